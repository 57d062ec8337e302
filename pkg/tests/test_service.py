import warnings

import pytest

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from fastapi.testclient import TestClient

from hetsample.service.app import create_app


SCHEMA = {
    "node_types": ["A", "P", "C"],
    "edge_types": [
        {"label": "AP", "endpoints": ["A", "P"]},
        {"label": "PC", "endpoints": ["P", "C"]},
    ],
}
NODES = "a1\tA\na2\tA\np1\tP\np2\tP\nc1\tC\n"
EDGES = "a1\tp1\tAP\na2\tp1\tAP\na2\tp2\tAP\np1\tc1\tPC\np2\tc1\tPC\n"
IMPORTANCE = {
    "alpha": {"A": 0.4, "P": 0.4, "C": 0.2},
    "edge_weights": [["A", "P", 0.3], ["P", "C", 0.2]],
    "meta_paths": ["A-P-A", "A-P-C-P-A"],
    "beta": [0.6, 0.4],
}


@pytest.fixture
def client():
    with TestClient(create_app()) as c:
        yield c


@pytest.fixture
def graph_id(client):
    resp = client.post(
        "/graphs", json={"nodes_tsv": NODES, "edges_tsv": EDGES, "schema_doc": SCHEMA}
    )
    assert resp.status_code == 200, resp.text
    return resp.json()["graph_id"]


def test_health(client):
    assert client.get("/health").json() == {"status": "ok"}


def test_upload_reports_counts(client, graph_id):
    info = client.get(f"/graphs/{graph_id}").json()
    assert info["num_nodes"] == 5
    assert info["num_edges"] == 5
    assert info["node_type_counts"] == {"A": 2, "P": 2, "C": 1}
    assert info["edge_type_counts"] == {"AP": 3, "PC": 2}


def test_upload_is_content_addressed(client, graph_id):
    resp = client.post(
        "/graphs", json={"nodes_tsv": NODES, "edges_tsv": EDGES, "schema_doc": SCHEMA}
    )
    assert resp.json()["graph_id"] == graph_id


def test_files_round_trip(client, graph_id):
    files = client.get(f"/graphs/{graph_id}/files").json()
    resp = client.post(
        "/graphs",
        json={
            "nodes_tsv": files["nodes_tsv"],
            "edges_tsv": files["edges_tsv"],
            "schema_doc": files["schema_doc"],
        },
    )
    assert resp.json()["graph_id"] == graph_id


def test_unknown_graph_404(client):
    resp = client.get("/graphs/doesnotexist")
    assert resp.status_code == 404
    assert resp.json()["detail"]["error"] == "not-found"


def test_upload_bad_data_400(client):
    resp = client.post(
        "/graphs",
        json={"nodes_tsv": "a1\tA\na1\tA\n", "edges_tsv": "", "schema_doc": SCHEMA},
    )
    assert resp.status_code == 400
    assert "duplicate" in resp.json()["detail"]["message"]


def test_sample_heterosample(client, graph_id):
    resp = client.post(
        f"/graphs/{graph_id}/sample",
        json={
            "method": "heterosample",
            "importance": IMPORTANCE,
            "sampler": {"ratio": 0.6, "seed": 0},
        },
    )
    assert resp.status_code == 200, resp.text
    body = resp.json()
    assert body["num_nodes"] == 3
    assert body["meta"]["phase_stats"]["leader"] >= 1
    assert body["nodes_tsv"].count("\n") == body["num_nodes"]


def test_sample_requires_importance_for_heterosample(client, graph_id):
    resp = client.post(
        f"/graphs/{graph_id}/sample",
        json={"method": "heterosample", "sampler": {"ratio": 0.5}},
    )
    assert resp.status_code == 422
    assert resp.json()["detail"]["error"] == "config"


def test_sample_unknown_method(client, graph_id):
    resp = client.post(
        f"/graphs/{graph_id}/sample", json={"method": "nope", "ratio": 0.5}
    )
    assert resp.status_code == 422


def test_sample_baseline_and_evaluate_by_id(client, graph_id):
    resp = client.post(
        f"/graphs/{graph_id}/sample",
        json={"method": "irv", "ratio": 1.0, "seed": 0},
    )
    sid = resp.json()["sample_id"]
    assert sid
    ev = client.post(
        f"/graphs/{graph_id}/evaluate",
        json={"sample_id": sid, "importance": IMPORTANCE},
    )
    report = ev.json()["report"]
    assert report["ntds"] <= 1e-9
    assert report["gre"] == 0.0
    assert report["runtime_ms"] is not None


def test_evaluate_by_tsv(client, graph_id):
    resp = client.post(
        f"/graphs/{graph_id}/sample",
        json={"method": "irv", "ratio": 0.6, "seed": 1, "store": False},
    )
    body = resp.json()
    ev = client.post(
        f"/graphs/{graph_id}/evaluate",
        json={
            "sample_nodes_tsv": body["nodes_tsv"],
            "sample_edges_tsv": body["edges_tsv"],
            "importance": IMPORTANCE,
        },
    )
    assert ev.status_code == 200
    assert ev.json()["report"]["sampling_ratio"] == pytest.approx(0.6)


def test_evaluate_mismatched_sample_409(client, graph_id):
    ev = client.post(
        f"/graphs/{graph_id}/evaluate",
        json={
            "sample_nodes_tsv": "zz\tA\n",
            "sample_edges_tsv": "",
            "importance": IMPORTANCE,
        },
    )
    assert ev.status_code == 409
    assert ev.json()["detail"]["error"] == "mismatch"


def test_evaluate_needs_sample(client, graph_id):
    ev = client.post(f"/graphs/{graph_id}/evaluate", json={"importance": IMPORTANCE})
    assert ev.status_code == 422


def test_run_cell_row_fields(client, graph_id):
    resp = client.post(
        f"/graphs/{graph_id}/run",
        json={
            "method": "heterosample",
            "ratio": 0.6,
            "seed": 0,
            "importance": IMPORTANCE,
        },
    )
    row = resp.json()["row"]
    assert set(row) == {"method", "ratio", "seed", "ntds", "etds", "mpr_macro", "gre", "runtime_ms"}
    assert row["method"] == "heterosample"
    assert row["runtime_ms"] >= 0


def test_bench_rows(client, graph_id):
    resp = client.post(
        f"/graphs/{graph_id}/bench",
        json={
            "methods": ["irv", "re"],
            "ratio": 0.6,
            "repeats": 3,
        },
    )
    body = resp.json()
    assert [r["method"] for r in body["rows"]] == ["irv", "re"]
    assert all(len(r["runtime_ms_runs"]) == 3 for r in body["rows"])


def test_bench_unknown_method(client, graph_id):
    resp = client.post(
        f"/graphs/{graph_id}/bench",
        json={"methods": ["irv", "nope"], "ratio": 0.5},
    )
    assert resp.status_code == 422


def test_synthetic_endpoint(client):
    resp = client.post(
        "/graphs/synthetic",
        json={
            "node_counts": {"A": 30, "B": 10},
            "edge_types": [{"label": "AB", "endpoints": ["A", "B"], "count": 40}],
            "skew": 0.5,
            "seed": 4,
        },
    )
    info = resp.json()
    assert info["num_nodes"] == 40
    assert info["num_edges"] == 40
    again = client.post(
        "/graphs/synthetic",
        json={
            "node_counts": {"A": 30, "B": 10},
            "edge_types": [{"label": "AB", "endpoints": ["A", "B"], "count": 40}],
            "skew": 0.5,
            "seed": 4,
        },
    )
    assert again.json()["graph_id"] == info["graph_id"]


def test_synthetic_infeasible_422(client):
    resp = client.post(
        "/graphs/synthetic",
        json={
            "node_counts": {"A": 3, "B": 3},
            "edge_types": [{"label": "AB", "endpoints": ["A", "B"], "count": 100}],
        },
    )
    assert resp.status_code == 422


def test_delete_graph(client, graph_id):
    assert client.delete(f"/graphs/{graph_id}").json() == {"deleted": graph_id}
    assert client.get(f"/graphs/{graph_id}").status_code == 404


def test_sample_deterministic_across_requests(client, graph_id):
    payload = {
        "method": "heterosample",
        "importance": IMPORTANCE,
        "sampler": {"ratio": 0.6, "seed": 0},
        "store": False,
    }
    r1 = client.post(f"/graphs/{graph_id}/sample", json=payload).json()
    r2 = client.post(f"/graphs/{graph_id}/sample", json=payload).json()
    assert r1["nodes_tsv"] == r2["nodes_tsv"]
    assert r1["edges_tsv"] == r2["edges_tsv"]
    assert r1["meta"] == r2["meta"]
