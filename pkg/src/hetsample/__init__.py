"""Sampling toolkit for typed (heterogeneous) graphs.

Core pieces: the HeteroGraph data model with TSV/JSON I/O, a seeded
synthetic generator, meta-path schema machinery, the three-phase
deterministic sampler, classical baseline samplers, sample-quality metrics,
and an HTTP service plus CLI on top.
"""

from .baselines import BASELINES, BaselineParams, run_baseline
from .errors import (
    ConfigError,
    DataMismatchError,
    DuplicateNodeError,
    EdgeReferenceError,
    GraphFormatError,
    GraphLookupError,
    HetSampleError,
    MetricDomainError,
    ParameterError,
    SchemaError,
)
from .graph import HeteroGraph, SchemaGraph
from .graph_io import load_graph, load_schema, read_graph_files, write_graph_files
from .metapath import (
    MetaPathSchema,
    WalkResult,
    count_instances,
    count_instances_exhaustive,
    enumerate_schemas,
    guided_walk,
    instances_preserved,
    parse_schema,
    schema_importance,
    weighted_schema_importance,
)
from .metrics import MetricsReport, etds, evaluate, gre, mpr, ntds, time_sampling
from .sampler import (
    ImportanceConfig,
    SampleResult,
    SamplerParams,
    bne_expand,
    mgne_expand,
    metapath_global_sample,
    node_importance,
    sample,
    select_top_leaders,
)
from .synth import SyntheticParams, generate_synthetic

__version__ = "0.1.0"

__all__ = [
    "BASELINES",
    "BaselineParams",
    "ConfigError",
    "DataMismatchError",
    "DuplicateNodeError",
    "EdgeReferenceError",
    "GraphFormatError",
    "GraphLookupError",
    "HetSampleError",
    "HeteroGraph",
    "ImportanceConfig",
    "MetaPathSchema",
    "MetricDomainError",
    "MetricsReport",
    "ParameterError",
    "SampleResult",
    "SamplerParams",
    "SchemaError",
    "SchemaGraph",
    "SyntheticParams",
    "WalkResult",
    "bne_expand",
    "count_instances",
    "count_instances_exhaustive",
    "enumerate_schemas",
    "etds",
    "evaluate",
    "generate_synthetic",
    "gre",
    "guided_walk",
    "instances_preserved",
    "load_graph",
    "load_schema",
    "mgne_expand",
    "metapath_global_sample",
    "mpr",
    "node_importance",
    "ntds",
    "parse_schema",
    "read_graph_files",
    "run_baseline",
    "sample",
    "schema_importance",
    "select_top_leaders",
    "time_sampling",
    "weighted_schema_importance",
    "write_graph_files",
]
