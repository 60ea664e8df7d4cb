import pytest

from app.cli import run
from tests.conftest import bridged_cliques, write_lines


@pytest.fixture
def worked_files(tmp_path):
    return (
        write_lines(tmp_path / "f.txt", ["0", "0", "1", "1"]),
        write_lines(tmp_path / "g.txt", ["0", "1", "0", "1"]),
    )


@pytest.fixture
def clique_files(tmp_path):
    graph, truth = bridged_cliques()
    edges = write_lines(tmp_path / "edges.txt", [f"{i} {j}" for i, j in graph.edges])
    labels = write_lines(tmp_path / "truth.txt", [str(label) for label in truth.labels])
    return edges, labels, truth


def _rows(out):
    return {line.split()[0]: line.split() for line in out.splitlines()[1:]}


def test_compare_worked_example(worked_files, capsys):
    assert run(["compare", *map(str, worked_files)]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0].split() == ["measure", "value", "defined", "note"]
    rows = _rows(out)
    assert rows["ri"][1] == "0.3333"
    assert rows["ari"][1] == "-0.5000"
    assert rows["resmi"][1] == "0.2740"
    assert rows["rmi"][3:] == ["encoding=dirichlet"]


def test_compare_flat_rmi_reports_omega(worked_files, capsys):
    assert run(["compare", *map(str, worked_files), "--measures", "rmi", "--rmi-encoding", "flat"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert rows["rmi"][3:] == ["encoding=flat", "omega=exact"]


def test_compare_identical_files(worked_files, capsys):
    f, _ = worked_files
    assert run(["compare", str(f), str(f), "--measures", "nmi,ari,resmi"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert list(rows) == ["nmi", "ari", "resmi"]
    assert all(row[1] == "1.0000" for row in rows.values())


def test_compare_keyed_files_are_matched_by_id(tmp_path, capsys):
    f = write_lines(tmp_path / "f.txt", ["a 0", "b 0", "c 1", "d 1"])
    g = write_lines(tmp_path / "g.txt", ["d x", "b y", "c x", "a y"])
    assert run(["compare", str(f), str(g), "--measures", "ari"]) == 0
    assert _rows(capsys.readouterr().out)["ari"][1] == "1.0000"


def test_compare_length_mismatch(worked_files, tmp_path, capsys):
    f, _ = worked_files
    short = write_lines(tmp_path / "short.txt", ["0", "1", "1"])
    assert run(["compare", str(f), str(short)]) == 2
    assert "Error:" in capsys.readouterr().err


def test_compare_unknown_measure(worked_files, capsys):
    assert run(["compare", *map(str, worked_files), "--measures", "nmi,vi"]) == 1
    assert "unknown measure" in capsys.readouterr().err


def test_compare_missing_file(tmp_path):
    assert run(["compare", str(tmp_path / "nope.txt"), str(tmp_path / "nope.txt")]) == 1


def test_experiment_csv_is_reproducible(capsys):
    argv = ["experiment", "c", "--n", "64", "--runs", "3", "--seed", "5", "--grid", "0,0.5,1"]
    assert run(argv) == 0
    first = capsys.readouterr().out
    assert run(argv) == 0
    second = capsys.readouterr().out
    assert first == second
    lines = first.splitlines()
    assert lines[0] == "experiment,param,measure,mean,std,runs"
    assert len(lines) == 1 + 3 * 5
    assert lines[1].startswith("c,0,ami,")


def test_experiment_writes_files(tmp_path, capsys):
    out = tmp_path / "a.csv"
    debug = tmp_path / "runs.csv"
    argv = ["experiment", "a", "--n", "64", "--runs", "2", "--grid", "1,8", "--measures", "ari,resmi"]
    assert run([*argv, "--out", str(out), "--plot", "--debug-runs", str(debug)]) == 0
    assert out.read_text().count("\n") == 1 + 2 * 2
    assert out.with_suffix(".svg").exists()
    assert len(debug.read_text().splitlines()) == 1 + 2 * 2 * 2


def test_experiment_plot_needs_out():
    assert run(["experiment", "c", "--n", "64", "--runs", "1", "--grid", "0.5", "--plot"]) == 1


def test_experiment_rejects_bad_grid(capsys):
    assert run(["experiment", "a", "--n", "64", "--runs", "1", "--grid", "100"]) == 2
    assert "Error:" in capsys.readouterr().err


def test_experiment_rejects_bad_n():
    assert run(["experiment", "c", "--n", "1"]) == 1


def test_network_sweep(clique_files, tmp_path, capsys):
    edges, labels, _ = clique_files
    assert run(["network", str(edges), str(labels), "--grid", "2..3", "--runs", "2", "--seed", "4"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "experiment,param,measure,mean,std,runs"
    assert "network,2,resmi,1,0,2" in lines
    footer = [line for line in lines if line.startswith("# ")]
    assert "# argmax resmi c=2" in footer
    assert len(footer) == 5


def test_network_keyed_truth(clique_files, tmp_path, capsys):
    edges, _, truth = clique_files
    keyed = write_lines(tmp_path / "keyed.txt", [f"{i} {label}" for i, label in reversed(list(enumerate(truth.labels)))])
    assert run(["network", str(edges), str(keyed), "--grid", "2", "--runs", "1", "--measures", "ari"]) == 0
    assert "network,2,ari,1,0,1" in capsys.readouterr().out.splitlines()


def test_network_truth_too_short(clique_files, tmp_path, capsys):
    edges, _, truth = clique_files
    short = write_lines(tmp_path / "short.txt", [str(label) for label in truth.labels[:-1]])
    assert run(["network", str(edges), str(short), "--grid", "2", "--runs", "1"]) == 2
    assert "Error:" in capsys.readouterr().err


def test_network_disconnected_graph_suggests_flag(tmp_path, capsys):
    edges = write_lines(tmp_path / "edges.txt", ["0 1", "1 2", "0 2", "3 4", "4 5", "3 5"])
    labels = write_lines(tmp_path / "truth.txt", ["0", "0", "0", "1", "1", "1"])
    assert run(["network", str(edges), str(labels), "--grid", "2", "--runs", "1"]) == 2
    assert "--largest-component" in capsys.readouterr().err


def test_plot_command(tmp_path, capsys):
    csv = tmp_path / "b.csv"
    assert run(["experiment", "b", "--n", "64", "--runs", "1", "--grid", "1,32,64", "--out", str(csv)]) == 0
    svg = tmp_path / "b.svg"
    assert run(["plot", str(csv), str(svg)]) == 0
    assert svg.read_text().lstrip().startswith("<?xml")


def test_plot_empty_csv(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    assert run(["plot", str(empty), str(tmp_path / "out.svg")]) == 2


def test_properties_command(tmp_path, capsys):
    csv = tmp_path / "a.csv"
    argv = ["experiment", "a", "--n", "64", "--runs", "2", "--grid", "1,64", "--measures", "nmi,resmi", "--out", str(csv)]
    assert run(argv) == 0
    table = tmp_path / "checklist.csv"
    assert run(["properties", str(csv), "--out", str(table)]) == 0
    out = capsys.readouterr().out
    assert "constant_baseline" in out
    assert "RESMI" in out
    assert table.read_text(encoding="utf-8").splitlines()[0] == "property,NMI,RESMI"
