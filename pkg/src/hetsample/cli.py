"""Command-line front end, a thin client of the sampling service.

Commands: sample, evaluate, sweep, synth, bench, serve.  Everything is
driven by one JSON config document (see runconfig); --ratio/--seed/--method
override config scalars.  With no --server the service runs in-process.

stdout carries machine-readable JSON/CSV only; diagnostics go to stderr.
Exit codes: 0 ok, 1 I/O or input data problem, 2 configuration problem,
3 original/sample mismatch.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from .client import ServiceClient
from .errors import (
    ConfigError,
    DataMismatchError,
    DuplicateNodeError,
    EdgeReferenceError,
    GraphFormatError,
    HetSampleError,
    MetricDomainError,
    ParameterError,
    SchemaError,
)
from .runconfig import KNOWN_METHODS, RunConfig, load_config

SWEEP_COLUMNS = ["method", "ratio", "seed", "ntds", "etds", "mpr_macro", "gre", "runtime_ms"]
BENCH_COLUMNS = ["method", "ratio", "repeats", "runtime_ms_median"]

EXIT_OK = 0
EXIT_IO = 1
EXIT_CONFIG = 2
EXIT_MISMATCH = 3


def _exit_code(exc: Exception) -> int:
    if isinstance(exc, DataMismatchError):
        return EXIT_MISMATCH
    if isinstance(exc, (ConfigError, ParameterError)):
        return EXIT_CONFIG
    if isinstance(
        exc,
        (GraphFormatError, SchemaError, EdgeReferenceError, DuplicateNodeError, MetricDomainError, OSError),
    ):
        return EXIT_IO
    return EXIT_IO


def _diag(msg: str):
    print(f"hetsample: {msg}", file=sys.stderr)


def _emit(obj):
    print(json.dumps(obj, sort_keys=True))


def _resolve(base_dir: str, path: str) -> str:
    return path if os.path.isabs(path) else os.path.normpath(os.path.join(base_dir, path))


class Runner:
    """Shared plumbing: config, file staging, one client per invocation."""

    def __init__(self, args):
        self.args = args
        if args.config is None:
            raise ConfigError("--config is required for this command")
        self.config: RunConfig = load_config(args.config)
        self.base_dir = os.path.dirname(os.path.abspath(args.config))
        self.client = ServiceClient(args.server)
        self.method = args.method or self.config.method
        if self.method not in KNOWN_METHODS:
            raise ConfigError(f"field 'method': unknown method {self.method!r}")

    def close(self):
        self.client.close()

    def out_dir(self) -> str:
        out = self.args.out or self.config.out_dir()
        out = _resolve(self.base_dir, out)
        os.makedirs(out, exist_ok=True)
        return out

    def graph_path(self, key: str) -> str:
        try:
            return _resolve(self.base_dir, self.config.paths[key])
        except KeyError:
            raise ConfigError(f"field 'paths.{key}' is required") from None

    def upload_graph(self) -> str:
        with open(self.graph_path("schema"), encoding="utf-8") as fh:
            schema_doc = json.load(fh)
        with open(self.graph_path("nodes"), encoding="utf-8") as fh:
            nodes_tsv = fh.read()
        with open(self.graph_path("edges"), encoding="utf-8") as fh:
            edges_tsv = fh.read()
        info = self.client.upload_graph(nodes_tsv, edges_tsv, schema_doc)
        _diag(
            f"graph {info['graph_id']}: {info['num_nodes']} nodes, {info['num_edges']} edges"
        )
        return info["graph_id"]

    def ratio(self) -> float | None:
        if self.args.ratio is not None:
            return self.args.ratio
        return None

    def seed(self) -> int | None:
        if self.args.seed is not None:
            return self.args.seed
        return None


def cmd_sample(args) -> int:
    runner = Runner(args)
    try:
        gid = runner.upload_graph()
        resp = runner.client.sample(
            gid,
            method=runner.method,
            importance=runner.config.importance or None,
            sampler=runner.config.sampler,
            baseline=runner.config.baseline,
            ratio=runner.ratio(),
            seed=runner.seed(),
            store=False,
        )
        out = runner.out_dir()
        paths = {
            "nodes": os.path.join(out, "sample_nodes.tsv"),
            "edges": os.path.join(out, "sample_edges.tsv"),
            "meta": os.path.join(out, "sample_meta.json"),
        }
        with open(paths["nodes"], "w", encoding="utf-8") as fh:
            fh.write(resp["nodes_tsv"])
        with open(paths["edges"], "w", encoding="utf-8") as fh:
            fh.write(resp["edges_tsv"])
        with open(paths["meta"], "w", encoding="utf-8") as fh:
            json.dump(resp["meta"], fh, indent=2, sort_keys=True)
            fh.write("\n")
        _emit(
            {
                "command": "sample",
                "method": resp["method"],
                "achieved_ratio": resp["achieved_ratio"],
                "num_nodes": resp["num_nodes"],
                "num_edges": resp["num_edges"],
                "artifacts": paths,
            }
        )
        return EXIT_OK
    finally:
        runner.close()


def cmd_evaluate(args) -> int:
    runner = Runner(args)
    try:
        gid = runner.upload_graph()
        sample_dir = args.sample_dir or runner.out_dir()
        nodes_path = os.path.join(sample_dir, "sample_nodes.tsv")
        edges_path = os.path.join(sample_dir, "sample_edges.tsv")
        with open(nodes_path, encoding="utf-8") as fh:
            sample_nodes = fh.read()
        with open(edges_path, encoding="utf-8") as fh:
            sample_edges = fh.read()
        resp = runner.client.evaluate(
            gid,
            sample_nodes_tsv=sample_nodes,
            sample_edges_tsv=sample_edges,
            importance=runner.config.importance or None,
            epsilon=runner.config.epsilon,
        )
        report = resp["report"]
        out = runner.out_dir()
        report_path = os.path.join(out, "metrics_report.json")
        with open(report_path, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
        if args.csv:
            row = {
                "method": runner.method,
                "ratio": report["sampling_ratio"],
                "seed": runner.seed() if runner.seed() is not None else "",
                "ntds": report["ntds"],
                "etds": report["etds"],
                "mpr_macro": report["mpr_macro"],
                "gre": report["gre"],
                "runtime_ms": report["runtime_ms"],
            }
            _append_csv(args.csv, [row])
        _emit({"command": "evaluate", "report": report, "artifacts": {"report": report_path}})
        return EXIT_OK
    finally:
        runner.close()


def _read_csv_keys(path: str) -> set[tuple[str, str, str]]:
    keys = set()
    if not os.path.exists(path):
        return keys
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            keys.add((row["method"], row["ratio"], row["seed"]))
    return keys


def _append_csv(path: str, rows: list[dict], columns=SWEEP_COLUMNS):
    exists = os.path.exists(path) and os.path.getsize(path) > 0
    with open(path, "a", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=columns)
        if not exists:
            writer.writeheader()
        for row in rows:
            writer.writerow({k: _csv_cell(row.get(k)) for k in columns})


def _csv_cell(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.9g}"
    return value


def cmd_sweep(args) -> int:
    runner = Runner(args)
    try:
        sweep = runner.config.sweep
        methods = sweep.get("methods") or [runner.method]
        ratios = sweep.get("ratios") or []
        seeds = sweep.get("seeds") or [0]
        if not ratios:
            raise ConfigError("field 'sweep.ratios' must be non-empty")
        gid = runner.upload_graph()
        out = runner.out_dir()
        csv_path = args.csv or os.path.join(out, "sweep.csv")
        done = _read_csv_keys(csv_path)
        new_rows = 0
        for method in methods:
            for ratio in ratios:
                for seed in seeds:
                    key = (method, f"{float(ratio):.9g}", str(seed))
                    if key in done:
                        continue
                    resp = runner.client.run_cell(
                        gid,
                        method=method,
                        ratio=float(ratio),
                        seed=int(seed),
                        importance=runner.config.importance or None,
                        sampler=runner.config.sampler,
                        baseline=runner.config.baseline,
                        epsilon=runner.config.epsilon,
                    )
                    row = dict(resp["row"])
                    row["ratio"] = f"{float(ratio):.9g}"
                    _append_csv(csv_path, [row])
                    done.add(key)
                    new_rows += 1
        total = len(_read_csv_keys(csv_path))
        _emit({"command": "sweep", "csv": csv_path, "rows_new": new_rows, "rows_total": total})
        return EXIT_OK
    finally:
        runner.close()


def cmd_synth(args) -> int:
    if args.config is None:
        raise ConfigError("--config is required for this command")
    config = load_config(args.config)
    if not config.synthetic:
        raise ConfigError("field 'synthetic' is required for the synth command")
    params = dict(config.synthetic)
    if args.seed is not None:
        params["seed"] = args.seed
    client = ServiceClient(args.server)
    try:
        info = client.synthesize(params)
        files = client.graph_files(info["graph_id"])
        base_dir = os.path.dirname(os.path.abspath(args.config))
        out = _resolve(base_dir, args.out or config.out_dir())
        os.makedirs(out, exist_ok=True)
        paths = {
            "nodes": os.path.join(out, "nodes.tsv"),
            "edges": os.path.join(out, "edges.tsv"),
            "schema": os.path.join(out, "schema.json"),
        }
        with open(paths["nodes"], "w", encoding="utf-8") as fh:
            fh.write(files["nodes_tsv"])
        with open(paths["edges"], "w", encoding="utf-8") as fh:
            fh.write(files["edges_tsv"])
        with open(paths["schema"], "w", encoding="utf-8") as fh:
            json.dump(files["schema_doc"], fh, indent=2)
            fh.write("\n")
        _emit(
            {
                "command": "synth",
                "num_nodes": info["num_nodes"],
                "num_edges": info["num_edges"],
                "artifacts": paths,
            }
        )
        return EXIT_OK
    finally:
        client.close()


def cmd_bench(args) -> int:
    runner = Runner(args)
    try:
        methods = runner.config.sweep.get("methods") or [runner.method]
        ratio = runner.ratio()
        if ratio is None:
            ratio = runner.config.sampler.get("ratio", runner.config.baseline.get("ratio"))
        if ratio is None:
            raise ConfigError("field 'sampler.ratio' (or --ratio) is required for bench")
        gid = runner.upload_graph()
        resp = runner.client.bench(
            gid,
            methods=methods,
            ratio=float(ratio),
            repeats=args.repeats,
            importance=runner.config.importance or None,
            sampler=runner.config.sampler,
            baseline=runner.config.baseline,
        )
        out = runner.out_dir()
        csv_path = os.path.join(out, "bench.csv")
        rows = [
            {
                "method": r["method"],
                "ratio": f"{float(ratio):.9g}",
                "repeats": resp["repeats"],
                "runtime_ms_median": r["runtime_ms_median"],
            }
            for r in resp["rows"]
        ]
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=BENCH_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _csv_cell(row[k]) for k in BENCH_COLUMNS})
        with open(csv_path, "w", newline="", encoding="utf-8") as fh:
            fh.write(buf.getvalue())
        sys.stdout.write(buf.getvalue())
        _diag(f"bench results at ratio {ratio} ({resp['repeats']} repeats):")
        width = max(len(m) for m in methods)
        for row in rows:
            _diag(f"  {row['method']:<{width}}  {row['runtime_ms_median']:10.2f} ms")
        return EXIT_OK
    finally:
        runner.close()


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("hetsample.service.app:app", host=args.host, port=args.port)
    return EXIT_OK


def _check_config(args) -> int:
    if args.config is None:
        raise ConfigError("--check-config requires --config")
    config = load_config(args.config)
    base_dir = os.path.dirname(os.path.abspath(args.config))
    problems = []
    for key, path in config.paths.items():
        if key == "out_dir":
            continue
        full = _resolve(base_dir, path)
        if not os.path.exists(full):
            problems.append(f"paths.{key}: file not found: {full}")
    if config.importance:
        schema_path = config.paths.get("schema")
        if schema_path and os.path.exists(_resolve(base_dir, schema_path)):
            from . import graph_io
            from .runconfig import resolve_importance

            with open(_resolve(base_dir, schema_path), encoding="utf-8") as fh:
                schema = graph_io.load_schema(fh)
            resolve_importance(config.importance, schema)
    if problems:
        raise ConfigError("; ".join(problems))
    _emit({"command": "check-config", "config": args.config, "ok": True})
    return EXIT_OK


def _common_flags() -> argparse.ArgumentParser:
    # SUPPRESS defaults keep subparser parsing from clobbering values the
    # top-level parser already set; real defaults live in set_defaults below
    common = argparse.ArgumentParser(add_help=False)
    add = common.add_argument
    add("--config", default=argparse.SUPPRESS, help="path to the JSON run configuration")
    add("--seed", type=int, default=argparse.SUPPRESS, help="override the configured seed")
    add("--ratio", type=float, default=argparse.SUPPRESS, help="override the configured sampling ratio")
    add("--method", default=argparse.SUPPRESS, help="override the configured method")
    add("--out", default=argparse.SUPPRESS, help="override the configured output directory")
    add("--server", default=argparse.SUPPRESS, help="base URL of a running service (default: in-process)")
    add(
        "--check-config",
        action="store_true",
        default=argparse.SUPPRESS,
        help="validate the configuration document and exit",
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = argparse.ArgumentParser(
        prog="hetsample",
        description="Typed-graph sampling toolkit: sampler, baselines, metrics.",
        parents=[common],
    )
    parser.set_defaults(
        config=None, seed=None, ratio=None, method=None, out=None, server=None, check_config=False
    )
    sub = parser.add_subparsers(dest="command")

    sub.add_parser("sample", parents=[common], help="run one sampling pass and write the sample files")

    p_eval = sub.add_parser("evaluate", parents=[common], help="compute quality metrics for a sample")
    p_eval.add_argument("--sample-dir", help="directory holding sample_nodes.tsv / sample_edges.tsv")
    p_eval.add_argument("--csv", help="also append a CSV row to this file")

    p_sweep = sub.add_parser("sweep", parents=[common], help="run the (method, ratio, seed) grid into a CSV")
    p_sweep.add_argument("--csv", help="CSV path (default: <out>/sweep.csv)")

    sub.add_parser("synth", parents=[common], help="generate a synthetic graph and write its files")

    p_bench = sub.add_parser("bench", parents=[common], help="median-of-N runtime comparison")
    p_bench.add_argument("--repeats", type=int, default=5)

    p_serve = sub.add_parser("serve", parents=[common], help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)

    return parser


COMMANDS = {
    "sample": cmd_sample,
    "evaluate": cmd_evaluate,
    "sweep": cmd_sweep,
    "synth": cmd_synth,
    "bench": cmd_bench,
    "serve": cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.check_config:
            return _check_config(args)
        if not args.command:
            parser.print_usage(sys.stderr)
            return EXIT_CONFIG
        return COMMANDS[args.command](args)
    except HetSampleError as exc:
        _diag(str(exc))
        return _exit_code(exc)
    except OSError as exc:
        _diag(str(exc))
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
