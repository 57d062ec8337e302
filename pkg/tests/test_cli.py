import json
import os

import pytest

from hetsample.cli import main

SCHEMA = {
    "node_types": ["A", "P", "C"],
    "edge_types": [
        {"label": "AP", "endpoints": ["A", "P"]},
        {"label": "PC", "endpoints": ["P", "C"]},
    ],
}
NODES = "a1\tA\na2\tA\na3\tA\np1\tP\np2\tP\nc1\tC\n"
EDGES = (
    "a1\tp1\tAP\na2\tp1\tAP\na2\tp2\tAP\na3\tp2\tAP\n"
    "p1\tc1\tPC\np2\tc1\tPC\n"
)


def write_fixture(tmp_path, **config_over):
    (tmp_path / "nodes.tsv").write_text(NODES)
    (tmp_path / "edges.tsv").write_text(EDGES)
    (tmp_path / "schema.json").write_text(json.dumps(SCHEMA))
    config = {
        "paths": {
            "nodes": "nodes.tsv",
            "edges": "edges.tsv",
            "schema": "schema.json",
            "out_dir": "out",
        },
        "method": "heterosample",
        "importance": {
            "alpha": {"A": 0.4, "P": 0.4, "C": 0.2},
            "edge_weights": [["A", "P", 0.3], ["P", "C", 0.2]],
            "meta_paths": ["A-P-A", "A-P-C-P-A"],
            "beta": [0.6, 0.4],
        },
        "sampler": {"ratio": 0.5, "seed": 3},
        "sweep": {"methods": ["heterosample", "irv"], "ratios": [0.4, 0.8], "seeds": [0, 1]},
        "synthetic": {
            "node_counts": {"A": 20, "B": 10},
            "edge_types": [{"label": "AB", "endpoints": ["A", "B"], "count": 30}],
            "skew": 0.5,
            "seed": 2,
        },
    }
    config.update(config_over)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config, indent=2))
    return str(path)


def test_check_config_ok(tmp_path, capsys):
    cfg = write_fixture(tmp_path)
    assert main(["--check-config", "--config", cfg]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["ok"] is True


def test_check_config_missing_file(tmp_path, capsys):
    cfg = write_fixture(tmp_path)
    os.remove(tmp_path / "edges.tsv")
    assert main(["--check-config", "--config", cfg]) == 2
    assert "paths.edges" in capsys.readouterr().err


def test_sample_writes_artifacts(tmp_path, capsys):
    cfg = write_fixture(tmp_path)
    assert main(["sample", "--config", cfg]) == 0
    out = json.loads(capsys.readouterr().out)
    for path in out["artifacts"].values():
        assert os.path.exists(path)
    meta = json.load(open(out["artifacts"]["meta"]))
    assert meta["method"] == "heterosample"
    assert meta["num_nodes"] == out["num_nodes"]


def test_sample_full_ratio_reproduces_input(tmp_path, capsys):
    cfg = write_fixture(tmp_path)
    assert main(["sample", "--config", cfg, "--ratio", "1.0"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert open(out["artifacts"]["nodes"]).read() == NODES
    assert open(out["artifacts"]["edges"]).read() == EDGES


def test_sample_missing_alpha_key_exit_2(tmp_path, capsys):
    cfg = write_fixture(
        tmp_path,
        importance={
            "alpha": {"A": 0.5, "P": 0.5},
            "edge_weights": [["A", "P", 0.3], ["P", "C", 0.2]],
            "meta_paths": ["A-P-A"],
            "beta": [1.0],
        },
    )
    assert main(["sample", "--config", cfg]) == 2
    assert "importance.alpha.C" in capsys.readouterr().err


def test_sample_unknown_method_exit_2(tmp_path, capsys):
    cfg = write_fixture(tmp_path)
    assert main(["sample", "--config", cfg, "--method", "bogus"]) == 2
    assert "bogus" in capsys.readouterr().err


def test_sample_corrupt_graph_exit_1(tmp_path, capsys):
    cfg = write_fixture(tmp_path)
    (tmp_path / "edges.tsv").write_text("a1\tp1\tAP\nbroken-line\n")
    assert main(["sample", "--config", cfg]) == 1
    assert "line 2" in capsys.readouterr().err


def test_sample_deterministic_artifacts(tmp_path, capsys):
    cfg = write_fixture(tmp_path)
    assert main(["sample", "--config", cfg]) == 0
    first = {
        name: open(tmp_path / "out" / name, "rb").read()
        for name in ("sample_nodes.tsv", "sample_edges.tsv", "sample_meta.json")
    }
    capsys.readouterr()
    assert main(["sample", "--config", cfg]) == 0
    for name, blob in first.items():
        assert open(tmp_path / "out" / name, "rb").read() == blob


def test_evaluate_round_trip(tmp_path, capsys):
    cfg = write_fixture(tmp_path)
    assert main(["sample", "--config", cfg]) == 0
    capsys.readouterr()
    assert main(["evaluate", "--config", cfg, "--sample-dir", str(tmp_path / "out")]) == 0
    out = json.loads(capsys.readouterr().out)
    report = out["report"]
    assert report["ntds"] is not None
    assert os.path.exists(out["artifacts"]["report"])
    # library and CLI share one code path, so the file equals stdout
    on_disk = json.load(open(out["artifacts"]["report"]))
    assert on_disk == report


def test_evaluate_full_sample_perfect(tmp_path, capsys):
    cfg = write_fixture(tmp_path)
    assert main(["sample", "--config", cfg, "--ratio", "1.0"]) == 0
    capsys.readouterr()
    assert main(["evaluate", "--config", cfg, "--sample-dir", str(tmp_path / "out")]) == 0
    report = json.loads(capsys.readouterr().out)["report"]
    assert report["ntds"] <= 1e-9
    assert report["etds"] <= 1e-9
    assert report["gre"] == 0.0
    assert all(v == 1.0 for v in report["mpr_per_schema"].values())


def test_evaluate_corrupt_sample_exit_1(tmp_path, capsys):
    cfg = write_fixture(tmp_path)
    assert main(["sample", "--config", cfg]) == 0
    (tmp_path / "out" / "sample_nodes.tsv").write_text("a1\tA\nbroken line here\n")
    capsys.readouterr()
    assert main(["evaluate", "--config", cfg, "--sample-dir", str(tmp_path / "out")]) == 1
    assert "line 2" in capsys.readouterr().err


def test_evaluate_foreign_sample_exit_3(tmp_path, capsys):
    cfg = write_fixture(tmp_path)
    out = tmp_path / "out"
    out.mkdir()
    (out / "sample_nodes.tsv").write_text("zz\tA\n")
    (out / "sample_edges.tsv").write_text("")
    assert main(["evaluate", "--config", cfg, "--sample-dir", str(out)]) == 3
    assert "zz" in capsys.readouterr().err


def test_sweep_grid_and_resume(tmp_path, capsys):
    cfg = write_fixture(tmp_path)
    assert main(["sweep", "--config", cfg]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["rows_new"] == 8  # 2 methods x 2 ratios x 2 seeds
    csv_path = out["csv"]
    first = open(csv_path).read()
    # resume: nothing new, file untouched
    assert main(["sweep", "--config", cfg]) == 0
    out2 = json.loads(capsys.readouterr().out)
    assert out2["rows_new"] == 0
    assert open(csv_path).read() == first


def test_sweep_resume_after_interruption(tmp_path, capsys):
    cfg = write_fixture(tmp_path)
    assert main(["sweep", "--config", cfg]) == 0
    capsys.readouterr()
    csv_path = str(tmp_path / "out" / "sweep.csv")
    lines = open(csv_path).read().splitlines(keepends=True)
    open(csv_path, "w").write("".join(lines[:4]))  # drop the tail rows
    assert main(["sweep", "--config", cfg]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["rows_new"] == 5
    rows = open(csv_path).read().splitlines()
    assert len(rows) == 9  # header + 8 rows


def test_synth_roundtrips_and_deterministic(tmp_path, capsys):
    cfg = write_fixture(tmp_path)
    assert main(["synth", "--config", cfg, "--out", "synthout"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["num_nodes"] == 30
    blobs = {p: open(p, "rb").read() for p in out["artifacts"].values()}
    assert main(["synth", "--config", cfg, "--out", "synthout"]) == 0
    capsys.readouterr()
    for p, blob in blobs.items():
        assert open(p, "rb").read() == blob


def test_bench_outputs_all_methods(tmp_path, capsys):
    cfg = write_fixture(tmp_path)
    assert main(["bench", "--config", cfg, "--repeats", "2", "--ratio", "0.5"]) == 0
    captured = capsys.readouterr()
    lines = captured.out.strip().splitlines()
    assert lines[0] == "method,ratio,repeats,runtime_ms_median"
    methods = [ln.split(",")[0] for ln in lines[1:]]
    assert methods == ["heterosample", "irv"]
    assert os.path.exists(tmp_path / "out" / "bench.csv")


def test_bench_unknown_method_exit_2(tmp_path, capsys):
    cfg = write_fixture(tmp_path, sweep={"methods": ["irv", "bogus"], "ratios": [0.5]})
    assert main(["bench", "--config", cfg, "--ratio", "0.5"]) == 2


def test_no_command_prints_usage(capsys):
    assert main([]) == 2
    assert "usage" in capsys.readouterr().err


def test_missing_config_exit_2(capsys):
    assert main(["sample"]) == 2
    assert "--config" in capsys.readouterr().err
