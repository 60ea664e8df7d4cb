"""Command-line front end: synthetic experiments, label comparison, network sweeps, plots."""
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Optional

import click
from pydantic import ValidationError

from app.core.config import settings
from app.core.exceptions import LabelingMismatchError, ToolkitError
from app.schemas.community import ScorePlusParams
from app.schemas.experiment import ExperimentKind, RngSeed, RunConfig
from app.schemas.measures import EXPERIMENT_MEASURES, MeasureName, NmiNormalization, OmegaMode, RmiEncoding
from app.services import experiments
from app.services.community import largest_component, load_edge_list, sweep_communities
from app.services.measures import compare_labelings
from app.services.partition import make_labeling
from app.services.plotting import plot_records
from app.services.properties import checklist_table, property_checklist, write_checklist_csv
from app.utils.label_files import labeling_from_file, paired_labelings, read_label_file

logger = logging.getLogger(__name__)

USAGE_EXIT = 1
DATA_EXIT = 2
COMPARE_MEASURES = "nmi,ami,ri,ari,rmi,resmi"


def _parse_measures(value: str) -> list[MeasureName]:
    try:
        return [MeasureName(token.strip().lower()) for token in value.split(",") if token.strip()]
    except ValueError:
        choices = ", ".join(m.value for m in MeasureName)
        raise click.BadParameter(f"unknown measure in {value!r}; choose from {choices}", param_hint="--measures")


def _parse_grid(value: Optional[str]) -> Optional[list[float]]:
    """Comma separated values, or an inclusive integer range ``lo..hi``."""
    if value is None:
        return None
    try:
        if ".." in value:
            lo, hi = (int(part) for part in value.split("..", 1))
            return [float(c) for c in range(lo, hi + 1)]
        return [float(token) for token in value.split(",") if token.strip()]
    except ValueError:
        raise click.BadParameter(f"cannot parse grid {value!r}", param_hint="--grid")


def _omega_mode(exact_omega: bool) -> OmegaMode:
    return OmegaMode.EXACT if exact_omega else OmegaMode.AUTO


def _emit_records(records, out: Optional[Path], full_precision: bool, footer: Sequence[str] = ()) -> None:
    if out is None:
        click.echo(experiments.records_csv_text(records, full_precision, footer), nl=False)
    else:
        experiments.write_records_csv(records, out, full_precision, footer)
        click.echo(f"wrote {len(records)} rows to {out}", err=True)


def _maybe_plot(records, out: Optional[Path], plot: bool) -> None:
    if not plot:
        return
    if out is None:
        raise click.UsageError("--plot needs --out to know where to put the SVG")
    svg = plot_records(records, out.with_suffix(".svg"))
    click.echo(f"wrote {svg}", err=True)


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Log at DEBUG level.")
def main(verbose: bool) -> None:
    """Clustering similarity toolkit: NMI, AMI, ARI, RMI and ResMI."""
    level = logging.DEBUG if verbose else getattr(logging, settings.LOG_LEVEL.upper(), logging.INFO)
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s %(message)s")


@main.command()
@click.argument("which", type=click.Choice(["a", "b", "c", "d"]))
@click.option("--n", "n", type=int, default=None, help=f"Number of objects (default {settings.EXPERIMENT_N}).")
@click.option("--runs", type=int, default=None, help=f"Runs per grid point (default {settings.EXPERIMENT_RUNS}).")
@click.option("--seed", type=int, default=None, help=f"Base seed (default {settings.EXPERIMENT_SEED}).")
@click.option("--grid", default=None, help="Comma separated c or p values, or lo..hi.")
@click.option("--measures", default=",".join(m.value for m in EXPERIMENT_MEASURES), show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None, help="CSV path; stdout when omitted.")
@click.option("--plot", is_flag=True, help="Also write an SVG next to --out.")
@click.option("--exact-omega", is_flag=True, help="Require exact Omega for RMI.")
@click.option(
    "--rmi-encoding",
    type=click.Choice([v.value for v in RmiEncoding]),
    default=None,
    help=f"RMI correction code (default {settings.RMI_ENCODING}); exact Omega applies to flat.",
)
@click.option("--full-precision", is_flag=True, help="Print floats without rounding.")
@click.option("--debug-runs", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Per-run values CSV.")
def experiment(which, n, runs, seed, grid, measures, out, plot, exact_omega, rmi_encoding, full_precision, debug_runs) -> None:
    """Run synthetic experiment a, b, c or d."""
    overrides = {"n": n, "runs": runs, "seed": seed}
    cfg = RunConfig(
        **{key: value for key, value in overrides.items() if value is not None},
        grid=_parse_grid(grid),
        measures=_parse_measures(measures),
        output=out,
        plot=plot,
        omega_mode=_omega_mode(exact_omega),
        rmi_encoding=rmi_encoding,
        full_precision=full_precision,
        debug_runs=debug_runs,
    )
    records, values = experiments.run_experiment(ExperimentKind(which), cfg)
    _emit_records(records, cfg.output, cfg.full_precision)
    if cfg.debug_runs is not None:
        experiments.write_run_values_csv(values, cfg.debug_runs)
    _maybe_plot(records, cfg.output, cfg.plot)


@main.command()
@click.argument("file_f", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.argument("file_g", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--measures", default=COMPARE_MEASURES, show_default=True)
@click.option(
    "--nmi-norm",
    type=click.Choice([v.value for v in NmiNormalization]),
    default=NmiNormalization.AVERAGE.value,
    show_default=True,
)
@click.option("--exact-omega", is_flag=True, help="Require exact Omega for RMI.")
@click.option(
    "--rmi-encoding",
    type=click.Choice([v.value for v in RmiEncoding]),
    default=None,
    help=f"RMI correction code (default {settings.RMI_ENCODING}); exact Omega applies to flat.",
)
def compare(file_f, file_g, measures, nmi_norm, exact_omega, rmi_encoding) -> None:
    """Compare two label files."""
    parsed_f = read_label_file(file_f)
    parsed_g = read_label_file(file_g)
    f, g = paired_labelings(parsed_f, parsed_g)
    results = compare_labelings(
        f,
        g,
        _parse_measures(measures),
        nmi_normalization=NmiNormalization(nmi_norm),
        omega_mode=_omega_mode(exact_omega),
        rmi_encoding=RmiEncoding(rmi_encoding) if rmi_encoding else None,
    )
    click.echo(f"{'measure':<8}{'value':>10}  defined  note")
    for result in results:
        notes = []
        if result.encoding is not None:
            notes.append(f"encoding={result.encoding.value}")
        if result.omega_method is not None:
            notes.append(f"omega={result.omega_method.value}")
        if result.unit:
            notes.append(result.unit)
        click.echo(
            f"{result.measure_name.value:<8}{result.value:>10.4f}  "
            f"{'yes' if result.defined else 'no':<7}  {' '.join(notes)}".rstrip()
        )


@main.command()
@click.argument("edges", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.argument("truth", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--grid", default="2..8", show_default=True, help="Community counts c, comma separated or lo..hi.")
@click.option("--runs", type=int, default=None, help=f"k-means seeds per c (default {settings.EXPERIMENT_RUNS}).")
@click.option("--seed", type=int, default=None, help=f"Base seed (default {settings.EXPERIMENT_SEED}).")
@click.option("--measures", default=",".join(m.value for m in EXPERIMENT_MEASURES), show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None, help="CSV path; stdout when omitted.")
@click.option("--plot", is_flag=True, help="Also write an SVG next to --out.")
@click.option("--largest-component", is_flag=True, help="Restrict to the largest connected component.")
@click.option("--exact-omega", is_flag=True, help="Require exact Omega for RMI.")
@click.option(
    "--rmi-encoding",
    type=click.Choice([v.value for v in RmiEncoding]),
    default=None,
    help=f"RMI correction code (default {settings.RMI_ENCODING}); exact Omega applies to flat.",
)
@click.option("--full-precision", is_flag=True, help="Print floats without rounding.")
@click.option("--debug-runs", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Per-run values CSV.")
@click.option("--ridge-delta", type=float, default=None, help=f"SCORE+ ridge (default {settings.SCORE_PLUS_RIDGE_DELTA}).")
@click.option(
    "--eigengap-threshold",
    type=float,
    default=None,
    help=f"SCORE+ eigengap rule (default {settings.SCORE_PLUS_EIGENGAP_THRESHOLD}).",
)
def network(
    edges, truth, grid, runs, seed, measures, out, plot, largest_component, exact_omega, rmi_encoding, full_precision,
    debug_runs, ridge_delta, eigengap_threshold,
) -> None:
    """Sweep SCORE+ over community counts and compare against a ground truth."""
    cfg = RunConfig(
        **({"runs": runs} if runs is not None else {}),
        **({"seed": seed} if seed is not None else {}),
        grid=_parse_grid(grid),
        measures=_parse_measures(measures),
        output=out,
        plot=plot,
        largest_component=largest_component,
        omega_mode=_omega_mode(exact_omega),
        rmi_encoding=rmi_encoding,
        full_precision=full_precision,
        debug_runs=debug_runs,
    )
    c_range = [int(c) for c in cfg.grid or []]
    if not c_range or any(c != value for c, value in zip(c_range, cfg.grid or [])):
        raise click.BadParameter("community counts must be integers", param_hint="--grid")

    with open(edges, encoding="utf-8") as handle:
        graph = load_edge_list(handle)
    parsed = read_label_file(truth)
    if parsed.keys is None and len(parsed.labels) != graph.num_nodes:
        raise LabelingMismatchError(graph.num_nodes, len(parsed.labels))
    order = None
    if parsed.keys is not None:
        order = sorted(graph.node_ids, key=graph.node_ids.get) if graph.node_ids else None
    labels = labeling_from_file(parsed, order)

    if cfg.largest_component:
        graph, kept = largest_component(graph)
        labels = make_labeling([labels.labels[i] for i in kept.tolist()])

    params = ScorePlusParams(
        c=max(2, c_range[0]),
        seed=RngSeed(seed=cfg.seed),
        **({"ridge_delta": ridge_delta} if ridge_delta is not None else {}),
        **({"eigengap_threshold": eigengap_threshold} if eigengap_threshold is not None else {}),
    )
    logger.info(
        f"[network] sweep c={c_range[0]}..{c_range[-1]} runs={cfg.runs} "
        f"ridge_delta={params.ridge_delta} eigengap_threshold={params.eigengap_threshold}"
    )
    records, values = sweep_communities(
        graph, labels, c_range, params, cfg.runs, cfg.measures, cfg.omega_mode, cfg.rmi_encoding
    )
    _emit_records(records, cfg.output, cfg.full_precision, footer=experiments.argmax_footer(records))
    if cfg.debug_runs is not None:
        experiments.write_run_values_csv(values, cfg.debug_runs)
    _maybe_plot(records, cfg.output, cfg.plot)


@main.command()
@click.argument("csv", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.argument("out", type=click.Path(dir_okay=False, path_type=Path))
def plot(csv, out) -> None:
    """Render an experiment CSV as an SVG line chart."""
    records = experiments.read_records_csv(csv)
    plot_records(records, out)
    click.echo(f"wrote {out}", err=True)


@main.command()
@click.argument("csvs", nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--tolerance", type=float, default=None, help="Baseline tolerance on |mean|.")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Write the table as CSV.")
def properties(csvs, tolerance, out) -> None:
    """Property checklist (constant baseline, model independence, ...) from experiment CSVs."""
    records = [record for path in csvs for record in experiments.read_records_csv(path)]
    measures = list(dict.fromkeys(r.measure for r in records))
    kwargs = {"tolerance": tolerance} if tolerance is not None else {}
    checks = property_checklist(records, measures, **kwargs)
    click.echo(checklist_table(checks).to_string())
    if out is not None:
        write_checklist_csv(checks, out)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Invoke the CLI and translate failures into exit codes (1 usage, 2 data)."""
    try:
        result = main.main(args=list(argv) if argv is not None else None, prog_name="resmi", standalone_mode=False)
    except click.UsageError as e:
        e.show()
        return USAGE_EXIT
    except ValidationError as e:
        click.echo(f"Error: invalid option: {e.errors()[0]['msg']}", err=True)
        return USAGE_EXIT
    except click.Abort:
        click.echo("Aborted!", err=True)
        return USAGE_EXIT
    except (ToolkitError, OSError) as e:
        click.echo(f"Error: {e}", err=True)
        return DATA_EXIT
    except click.ClickException as e:
        e.show()
        return e.exit_code
    return result if isinstance(result, int) else 0


if __name__ == "__main__":
    sys.exit(run())
