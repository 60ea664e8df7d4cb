from types import SimpleNamespace

import pytest

from app.api.endpoints import experiments as experiments_endpoint
from app.jobs.tasks import run_grid_point_task
from app.schemas.experiment import RunConfig

API = "/api/v1"


def _by_name(payload):
    return {row["measure_name"]: row for row in payload["results"]}


def test_root(client):
    response = client.get("/")
    assert response.status_code == 200
    assert "ResMI" in response.json()["message"]


def test_compare_worked_example(client):
    response = client.post(f"{API}/compare", json={"f": [0, 0, 1, 1], "g": [0, 1, 0, 1]})
    assert response.status_code == 200
    body = response.json()
    assert body["n"] == 4
    results = _by_name(body)
    assert set(results) == {"nmi", "ami", "ari", "rmi", "resmi", "ri"}
    assert results["ri"]["value"] == pytest.approx(1 / 3)
    assert results["ari"]["value"] == pytest.approx(-0.5)
    assert results["resmi"]["value"] == pytest.approx(0.27402, abs=1e-4)
    assert results["rmi"]["encoding"] == "dirichlet"
    assert results["rmi"]["omega_method"] is None


def test_compare_flat_rmi(client):
    payload = {"f": [0, 0, 1, 1], "g": [0, 1, 0, 1], "measures": ["rmi"], "rmi_encoding": "flat"}
    result = _by_name(client.post(f"{API}/compare", json=payload).json())["rmi"]
    assert result["encoding"] == "flat"
    assert result["omega_method"] == "exact"


def test_compare_accepts_string_labels(client):
    payload = {"f": ["x", "x", "y"], "g": ["p", "p", "q"], "measures": ["ari", "nmi"]}
    results = _by_name(client.post(f"{API}/compare", json=payload).json())
    assert results["ari"]["value"] == pytest.approx(1.0)
    assert results["nmi"]["value"] == pytest.approx(1.0)


def test_compare_length_mismatch_is_bad_request(client):
    response = client.post(f"{API}/compare", json={"f": [0, 0, 1], "g": [0, 1]})
    assert response.status_code == 400
    assert "error" in response.json()["detail"]


def test_compare_unknown_measure_is_rejected(client):
    response = client.post(f"{API}/compare", json={"f": [0, 1], "g": [0, 1], "measures": ["vi"]})
    assert response.status_code == 422


def test_compare_files(client):
    files = {
        "file_f": ("f.txt", b"0\n0\n1\n1\n", "text/plain"),
        "file_g": ("g.txt", b"# second labeling\n0\n1\n0\n1\n", "text/plain"),
    }
    response = client.post(f"{API}/compare/files", files=files)
    assert response.status_code == 200
    assert _by_name(response.json())["ri"]["value"] == pytest.approx(1 / 3)


def test_compare_keyed_files_are_matched_by_id(client):
    files = {
        "file_f": ("f.txt", b"a 0\nb 0\nc 1\nd 1\n", "text/plain"),
        "file_g": ("g.txt", b"d x\nb y\nc x\na y\n", "text/plain"),
    }
    response = client.post(f"{API}/compare/files", files=files)
    assert response.status_code == 200
    results = _by_name(response.json())
    assert results["ari"]["value"] == pytest.approx(1.0)
    assert results["ri"]["value"] == pytest.approx(1.0)


def test_compare_keyed_files_missing_id_is_bad_request(client):
    files = {
        "file_f": ("f.txt", b"a 0\nb 0\nc 1\n", "text/plain"),
        "file_g": ("g.txt", b"a 0\nb 1\nz 1\n", "text/plain"),
    }
    response = client.post(f"{API}/compare/files", files=files)
    assert response.status_code == 400


def test_compare_files_parse_error(client):
    files = {
        "file_f": ("f.txt", b"0 1 2\n", "text/plain"),
        "file_g": ("g.txt", b"0\n", "text/plain"),
    }
    assert client.post(f"{API}/compare/files", files=files).status_code == 400


@pytest.mark.parametrize("which", ["e", "network"])
def test_enqueue_rejects_unknown_experiment(client, which):
    assert client.post(f"{API}/experiments/{which}", json={}).status_code == 400


def test_enqueue_rejects_bad_grid(client):
    response = client.post(f"{API}/experiments/c", json={"n": 64, "grid": [0.5, 2.0]})
    assert response.status_code == 400


def test_enqueue_splits_grid_into_tasks(client, monkeypatch):
    submitted = []

    class FakeGroup:
        def __init__(self, signatures):
            self.signatures = list(signatures)

        def apply_async(self):
            submitted.extend(self.signatures)
            return SimpleNamespace(id="group-1", save=lambda: None)

    monkeypatch.setattr(experiments_endpoint, "group", FakeGroup)
    response = client.post(f"{API}/experiments/b", json={"n": 64, "runs": 2, "grid": [1, 32, 64]})
    assert response.status_code == 202
    assert response.json() == {"group_id": "group-1", "experiment": "b", "grid_points": 3}
    assert [sig.args[1] for sig in submitted] == [1.0, 32.0, 64.0]
    assert submitted[0].args[2]["n"] == 64


def test_status_unknown_group(client, monkeypatch):
    monkeypatch.setattr(experiments_endpoint.GroupResult, "restore", classmethod(lambda cls, *a, **k: None))
    assert client.get(f"{API}/experiments/missing").status_code == 404


def test_status_aggregates_finished_group(client, monkeypatch):
    cfg = RunConfig(n=64, runs=2, measures=["ari", "resmi"]).model_dump(mode="json")
    chunks = [run_grid_point_task("b", 32.0, cfg), run_grid_point_task("b", 1.0, cfg)]
    job = SimpleNamespace(
        results=[object(), object()],
        completed_count=lambda: 2,
        ready=lambda: True,
        failed=lambda: False,
        get=lambda: chunks,
    )
    monkeypatch.setattr(experiments_endpoint.GroupResult, "restore", classmethod(lambda cls, *a, **k: job))
    body = client.get(f"{API}/experiments/group-1").json()
    assert body["status"] == "completed"
    assert body["total"] == 2
    records = body["records"]
    assert [(r["param"], r["measure"]) for r in records] == [(1.0, "ari"), (1.0, "resmi"), (32.0, "ari"), (32.0, "resmi")]
    assert records[2]["mean"] == pytest.approx(1.0)
    assert all(r["runs"] == 2 for r in records)


def test_status_pending_group(client, monkeypatch):
    job = SimpleNamespace(results=[object()] * 3, completed_count=lambda: 0, ready=lambda: False)
    monkeypatch.setattr(experiments_endpoint.GroupResult, "restore", classmethod(lambda cls, *a, **k: job))
    body = client.get(f"{API}/experiments/group-2").json()
    assert (body["status"], body["completed"], body["total"], body["records"]) == ("pending", 0, 3, None)


def test_task_returns_json_rows():
    rows = run_grid_point_task("c", 0.0, RunConfig(n=64, runs=2).model_dump(mode="json"))
    assert len(rows) == 2 * 5
    assert {row["run"] for row in rows} == {0, 1}
    assert all(row["value"] == pytest.approx(1.0) and row["defined"] for row in rows)
