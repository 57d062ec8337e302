"""FastAPI service wrapping the core sampling package.

Graphs are uploaded (or generated) once, held immutably in an in-memory
registry under a content-hash id, and then served to any number of
sampling / evaluation / benchmark requests.  All heavy lifting stays in the
core modules; endpoints only translate payloads.
"""

from __future__ import annotations

import hashlib
import json
import statistics
import threading
from collections import OrderedDict

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import graph_io
from ..baselines import run_baseline
from ..errors import (
    ConfigError,
    DataMismatchError,
    GraphLookupError,
    HetSampleError,
    MetricDomainError,
    ParameterError,
)
from ..graph import HeteroGraph
from ..metrics import evaluate, time_sampling
from ..runconfig import (
    KNOWN_METHODS,
    meta_paths_from_importance,
    resolve_baseline_params,
    resolve_importance,
    resolve_sampler_params,
)
from ..sampler import SampleResult, sample as run_heterosample
from ..synth import SyntheticParams, generate_synthetic
from . import schemas as sc

_MAX_GRAPHS = 64
_MAX_SAMPLES = 512


class Registry:
    """Content-addressed store of immutable graphs and their samples."""

    def __init__(self):
        self._lock = threading.Lock()
        self._graphs: OrderedDict[str, HeteroGraph] = OrderedDict()
        self._samples: OrderedDict[str, tuple[str, SampleResult, float]] = OrderedDict()

    def put_graph(self, graph: HeteroGraph) -> str:
        digest = hashlib.sha256()
        digest.update(graph_io.serialize_nodes(graph).encode())
        digest.update(graph_io.serialize_edges(graph).encode())
        digest.update(graph_io.dump_schema(graph.schema).encode())
        gid = digest.hexdigest()[:16]
        with self._lock:
            self._graphs[gid] = graph
            self._graphs.move_to_end(gid)
            while len(self._graphs) > _MAX_GRAPHS:
                self._graphs.popitem(last=False)
        return gid

    def graph(self, gid: str) -> HeteroGraph:
        with self._lock:
            if gid not in self._graphs:
                raise GraphLookupError(f"unknown graph id {gid!r}")
            self._graphs.move_to_end(gid)
            return self._graphs[gid]

    def drop_graph(self, gid: str):
        with self._lock:
            if gid not in self._graphs:
                raise GraphLookupError(f"unknown graph id {gid!r}")
            del self._graphs[gid]
            stale = [sid for sid, (g, _, _) in self._samples.items() if g == gid]
            for sid in stale:
                del self._samples[sid]

    def put_sample(self, gid: str, request_fingerprint: str, result: SampleResult, runtime_ms: float) -> str:
        sid = hashlib.sha256(f"{gid}:{request_fingerprint}".encode()).hexdigest()[:16]
        with self._lock:
            self._samples[sid] = (gid, result, runtime_ms)
            self._samples.move_to_end(sid)
            while len(self._samples) > _MAX_SAMPLES:
                self._samples.popitem(last=False)
        return sid

    def sample(self, gid: str, sid: str) -> tuple[SampleResult, float]:
        with self._lock:
            if sid not in self._samples:
                raise GraphLookupError(f"unknown sample id {sid!r}")
            owner, result, runtime_ms = self._samples[sid]
        if owner != gid:
            raise DataMismatchError(f"sample {sid!r} belongs to a different graph")
        return result, runtime_ms


def _error_payload(kind: str, exc: Exception) -> dict:
    return {"error": kind, "message": str(exc)}


_ERROR_MAP: list[tuple[type, str, int]] = [
    (GraphLookupError, "not-found", 404),
    (DataMismatchError, "mismatch", 409),
    (ConfigError, "config", 422),
    (ParameterError, "config", 422),
    (MetricDomainError, "domain", 422),
    (HetSampleError, "data", 400),
]


def _graph_info(gid: str, graph: HeteroGraph) -> sc.GraphInfo:
    ntc = graph.node_type_counts()
    etc = graph.edge_type_counts()
    return sc.GraphInfo(
        graph_id=gid,
        num_nodes=graph.num_nodes,
        num_edges=graph.num_edges,
        node_types=list(graph.schema.node_types),
        edge_types=[e[0] for e in graph.schema.edge_types],
        node_type_counts={t: int(c) for t, c in zip(graph.schema.node_types, ntc)},
        edge_type_counts={e[0]: int(c) for e, c in zip(graph.schema.edge_types, etc)},
        duplicate_edges_dropped=graph.duplicate_edges_dropped,
    )


def _run_sample(graph: HeteroGraph, req) -> tuple[SampleResult, float]:
    """Dispatch one sampling call; returns (result, wall-clock ms)."""
    if req.method not in KNOWN_METHODS:
        raise ConfigError(f"unknown method {req.method!r}")
    if req.method == "heterosample":
        if req.importance is None:
            raise ConfigError("field 'importance' is required for method 'heterosample'")
        config = resolve_importance(req.importance, graph.schema)
        params = resolve_sampler_params(req.sampler, ratio=req.ratio, seed=req.seed)
        return time_sampling(lambda: run_heterosample(graph, config, params))
    ratio = req.ratio if req.ratio is not None else req.baseline.get("ratio", req.sampler.get("ratio"))
    if ratio is None:
        raise ConfigError("field 'ratio' is required")
    seed = req.seed if req.seed is not None else req.baseline.get("seed", req.sampler.get("seed", 0))
    doc = {k: v for k, v in req.baseline.items() if k not in ("ratio", "seed")}
    params = resolve_baseline_params(doc, ratio=float(ratio), seed=int(seed))
    return time_sampling(lambda: run_baseline(graph, req.method, params))


def _fingerprint(req) -> str:
    return json.dumps(req.model_dump(), sort_keys=True)


def create_app() -> FastAPI:
    app = FastAPI(title="hetsample service", version="0.1.0")
    registry = Registry()
    app.state.registry = registry

    @app.exception_handler(HetSampleError)
    async def handle_toolkit_error(request: Request, exc: HetSampleError):
        for klass, kind, status in _ERROR_MAP:
            if isinstance(exc, klass):
                return JSONResponse(status_code=status, content={"detail": _error_payload(kind, exc)})
        return JSONResponse(status_code=400, content={"detail": _error_payload("data", exc)})

    @app.get("/health", response_model=sc.HealthResponse)
    def health():
        return sc.HealthResponse()

    @app.post("/graphs", response_model=sc.GraphInfo)
    def upload_graph(payload: sc.GraphUpload):
        schema = graph_io.load_schema(payload.schema_doc)
        graph = graph_io.load_graph(payload.nodes_tsv, payload.edges_tsv, schema)
        gid = registry.put_graph(graph)
        return _graph_info(gid, graph)

    @app.post("/graphs/synthetic", response_model=sc.GraphInfo)
    def synthesize_graph(payload: sc.SyntheticRequest):
        params = SyntheticParams.from_dict(payload.model_dump())
        graph = generate_synthetic(params)
        gid = registry.put_graph(graph)
        return _graph_info(gid, graph)

    @app.get("/graphs/{gid}", response_model=sc.GraphInfo)
    def graph_info(gid: str):
        return _graph_info(gid, registry.graph(gid))

    @app.get("/graphs/{gid}/files", response_model=sc.GraphFiles)
    def graph_files(gid: str):
        graph = registry.graph(gid)
        return sc.GraphFiles(
            nodes_tsv=graph_io.serialize_nodes(graph),
            edges_tsv=graph_io.serialize_edges(graph),
            schema_doc=graph.schema.to_dict(),
        )

    @app.delete("/graphs/{gid}", response_model=sc.DeleteResponse)
    def delete_graph(gid: str):
        registry.drop_graph(gid)
        return sc.DeleteResponse(deleted=gid)

    @app.post("/graphs/{gid}/sample", response_model=sc.SampleResponse)
    def sample_graph(gid: str, payload: sc.SampleRequest):
        graph = registry.graph(gid)
        result, runtime_ms = _run_sample(graph, payload)
        sid = ""
        if payload.store:
            sid = registry.put_sample(gid, _fingerprint(payload), result, runtime_ms)
        nodes_tsv, edges_tsv = graph_io.sample_to_tsv(graph, result.nodes, result.edges)
        return sc.SampleResponse(
            sample_id=sid,
            method=result.method,
            target_ratio=result.target_ratio,
            achieved_ratio=result.achieved_ratio,
            num_nodes=int(result.nodes.size),
            num_edges=int(result.edges.shape[0]),
            nodes_tsv=nodes_tsv,
            edges_tsv=edges_tsv,
            meta=result.to_meta_dict(graph),
            runtime_ms=runtime_ms,
        )

    @app.post("/graphs/{gid}/evaluate", response_model=sc.EvaluateResponse)
    def evaluate_sample(gid: str, payload: sc.EvaluateRequest):
        graph = registry.graph(gid)
        runtime_ms = payload.runtime_ms
        if payload.sample_id:
            result, stored_runtime = registry.sample(gid, payload.sample_id)
            if runtime_ms is None:
                runtime_ms = stored_runtime
        elif payload.sample_nodes_tsv is not None and payload.sample_edges_tsv is not None:
            result = graph_io.sample_from_tsv(graph, payload.sample_nodes_tsv, payload.sample_edges_tsv)
        else:
            raise ConfigError("provide either sample_id or sample_nodes_tsv/sample_edges_tsv")
        if payload.importance is None:
            raise ConfigError("field 'importance' (meta_paths) is required for evaluation")
        paths = meta_paths_from_importance(payload.importance, graph.schema)
        report = evaluate(graph, result, paths, epsilon=payload.epsilon, runtime_ms=runtime_ms)
        return sc.EvaluateResponse(report=report.to_dict())

    @app.post("/graphs/{gid}/run", response_model=sc.RunResponse)
    def run_cell(gid: str, payload: sc.RunRequest):
        graph = registry.graph(gid)
        sample_req = sc.SampleRequest(
            method=payload.method,
            importance=payload.importance,
            sampler=payload.sampler,
            baseline=payload.baseline,
            ratio=payload.ratio,
            seed=payload.seed,
            store=False,
        )
        result, runtime_ms = _run_sample(graph, sample_req)
        if payload.importance is None:
            raise ConfigError("field 'importance' (meta_paths) is required for evaluation")
        paths = meta_paths_from_importance(payload.importance, graph.schema)
        report = evaluate(graph, result, paths, epsilon=payload.epsilon, runtime_ms=runtime_ms)
        row = {
            "method": payload.method,
            "ratio": payload.ratio,
            "seed": payload.seed,
            "ntds": report.to_dict()["ntds"],
            "etds": report.to_dict()["etds"],
            "mpr_macro": report.to_dict()["mpr_macro"],
            "gre": report.to_dict()["gre"],
            "runtime_ms": report.to_dict()["runtime_ms"],
        }
        return sc.RunResponse(row=row, report=report.to_dict())

    @app.post("/graphs/{gid}/bench", response_model=sc.BenchResponse)
    def bench(gid: str, payload: sc.BenchRequest):
        graph = registry.graph(gid)
        if payload.repeats < 1:
            raise ConfigError("repeats must be >= 1")
        rows = []
        for method in payload.methods:
            if method not in KNOWN_METHODS:
                raise ConfigError(f"unknown method {method!r}")
        for method in payload.methods:
            req = sc.SampleRequest(
                method=method,
                importance=payload.importance,
                sampler=payload.sampler,
                baseline=payload.baseline,
                ratio=payload.ratio,
                seed=payload.sampler.get("seed", payload.baseline.get("seed", 0)),
                store=False,
            )
            _run_sample(graph, req)  # untimed warmup
            runs = []
            for _ in range(payload.repeats):
                _, ms = _run_sample(graph, req)
                runs.append(ms)
            rows.append(
                sc.BenchRow(
                    method=method,
                    runtime_ms_median=statistics.median(runs),
                    runtime_ms_runs=runs,
                )
            )
        return sc.BenchResponse(ratio=payload.ratio, repeats=payload.repeats, rows=rows)

    return app


app = create_app()
