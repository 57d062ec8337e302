"""Request/response models for the sampling service."""

from __future__ import annotations

from pydantic import BaseModel, Field


class HealthResponse(BaseModel):
    status: str = "ok"


class GraphUpload(BaseModel):
    nodes_tsv: str
    edges_tsv: str
    schema_doc: dict = Field(..., description="schema JSON document")


class SyntheticRequest(BaseModel):
    node_counts: dict[str, int]
    edge_types: list[dict]
    skew: float = 0.0
    seed: int = 0


class GraphInfo(BaseModel):
    graph_id: str
    num_nodes: int
    num_edges: int
    node_types: list[str]
    edge_types: list[str]
    node_type_counts: dict[str, int]
    edge_type_counts: dict[str, int]
    duplicate_edges_dropped: int = 0


class GraphFiles(BaseModel):
    nodes_tsv: str
    edges_tsv: str
    schema_doc: dict


class SampleRequest(BaseModel):
    method: str = "heterosample"
    importance: dict | None = None
    sampler: dict = Field(default_factory=dict)
    baseline: dict = Field(default_factory=dict)
    ratio: float | None = None
    seed: int | None = None
    store: bool = True


class SampleResponse(BaseModel):
    sample_id: str
    method: str
    target_ratio: float
    achieved_ratio: float
    num_nodes: int
    num_edges: int
    nodes_tsv: str
    edges_tsv: str
    meta: dict
    runtime_ms: float


class EvaluateRequest(BaseModel):
    sample_id: str | None = None
    sample_nodes_tsv: str | None = None
    sample_edges_tsv: str | None = None
    importance: dict | None = None
    epsilon: float = 1e-9
    runtime_ms: float | None = None


class EvaluateResponse(BaseModel):
    report: dict


class RunRequest(BaseModel):
    method: str = "heterosample"
    ratio: float
    seed: int = 0
    importance: dict | None = None
    sampler: dict = Field(default_factory=dict)
    baseline: dict = Field(default_factory=dict)
    epsilon: float = 1e-9


class RunResponse(BaseModel):
    row: dict
    report: dict


class BenchRequest(BaseModel):
    methods: list[str]
    ratio: float
    repeats: int = 5
    importance: dict | None = None
    sampler: dict = Field(default_factory=dict)
    baseline: dict = Field(default_factory=dict)


class BenchRow(BaseModel):
    method: str
    runtime_ms_median: float
    runtime_ms_runs: list[float]


class BenchResponse(BaseModel):
    ratio: float
    repeats: int
    rows: list[BenchRow]


class DeleteResponse(BaseModel):
    deleted: str
