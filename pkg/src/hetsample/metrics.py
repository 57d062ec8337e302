"""Sample-quality metrics and the timing harness.

Type-distribution divergences use standard nonnegative KL (natural log) so
that lower always means more similar; the sampled-side distribution gets
add-epsilon smoothing so a type missing from the sample stays finite.
Meta-path preservation is the fraction of original instances surviving in
the node-induced subgraph.  Reconstruction error compares adjacency
matrices under the Frobenius norm; the default reconstruction is the
sampled adjacency re-embedded at original indices, for which the error has
the closed form sqrt(1 - |E_S|/|E|).  Any reconstructor producing an
|V| x |V| nonnegative matrix can be plugged in instead.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ConfigError, MetricDomainError
from .graph import HeteroGraph
from .metapath import MetaPathSchema, count_instances
from .sampler import SampleResult

DEFAULT_EPSILON = 1e-9


def kl_divergence(p_counts: np.ndarray, q_counts: np.ndarray, epsilon: float = DEFAULT_EPSILON) -> float:
    """KL(p || q) in nats with add-epsilon smoothing of q; 0 ln 0 = 0."""
    p_counts = np.asarray(p_counts, dtype=np.float64)
    q_counts = np.asarray(q_counts, dtype=np.float64)
    if p_counts.sum() <= 0 or q_counts.sum() <= 0:
        raise MetricDomainError("KL divergence of an empty distribution")
    p = p_counts / p_counts.sum()
    q = (q_counts + epsilon) / (q_counts.sum() + epsilon * q_counts.size)
    mask = p > 0
    # exact arithmetic guarantees >= 0; clamp float roundoff near zero
    return max(0.0, float(np.sum(p[mask] * np.log(p[mask] / q[mask]))))


def ntds(original: HeteroGraph, sample: SampleResult, epsilon: float = DEFAULT_EPSILON) -> float:
    """Node-type distribution divergence between graph and sample."""
    if sample.nodes.size == 0:
        raise MetricDomainError("NTDS of an empty sample")
    m = original.schema.num_node_types
    q = np.bincount(original.node_types[sample.nodes], minlength=m)
    return kl_divergence(original.node_type_counts(), q, epsilon)


def etds(original: HeteroGraph, sample: SampleResult, epsilon: float = DEFAULT_EPSILON) -> float:
    """Edge-type distribution divergence; undefined for edgeless samples."""
    if original.num_edges == 0:
        raise MetricDomainError("ETDS of an edgeless graph")
    if sample.edges.shape[0] == 0:
        raise MetricDomainError("ETDS of an edgeless sample")
    r = original.schema.num_edge_types
    q = np.bincount(sample.edges[:, 2], minlength=r)
    return kl_divergence(original.edge_type_counts(), q, epsilon)


def mpr(
    original: HeteroGraph,
    sample: SampleResult,
    paths: list[MetaPathSchema],
) -> tuple[dict[str, float | None], float | None, float | None]:
    """Preserved-instance ratio per schema plus macro and pooled means.

    Schemas with no instances in the original are reported as None and
    excluded from both means.  Returns (per-schema, macro, pooled).
    """
    if not paths:
        raise ConfigError("MPR requires a non-empty meta-path set")
    induced = original.induced_subgraph(sample.nodes)
    per: dict[str, float | None] = {}
    ratios: list[float] = []
    total_orig = 0
    total_kept = 0
    for p in paths:
        label = p.label(original.schema)
        orig = count_instances(original, p)
        if orig == 0:
            per[label] = None
            continue
        kept = count_instances(induced, p)
        per[label] = kept / orig
        ratios.append(kept / orig)
        total_orig += orig
        total_kept += kept
    macro = float(np.mean(ratios)) if ratios else None
    pooled = (total_kept / total_orig) if total_orig else None
    return per, macro, pooled


Reconstructor = Callable[[HeteroGraph, SampleResult], np.ndarray]


def default_reconstructor(original: HeteroGraph, sample: SampleResult) -> np.ndarray:
    """Sampled adjacency at original indices, zero elsewhere (dense 0/1)."""
    n = original.num_nodes
    a = np.zeros((n, n))
    for s, d, _ in sample.edges:
        a[s, d] = 1.0
        a[d, s] = 1.0
    return a


def adjacency_matrix(graph: HeteroGraph) -> np.ndarray:
    n = graph.num_nodes
    a = np.zeros((n, n))
    for s, d, _ in graph.edges:
        a[s, d] = 1.0
        a[d, s] = 1.0
    return a


def gre(
    original: HeteroGraph,
    sample: SampleResult,
    reconstructor: Reconstructor | None = None,
) -> float:
    """Frobenius reconstruction error, normalized by the original adjacency.

    With the default reconstruction this equals sqrt(1 - |E_S| / |E|) and is
    computed in closed form (no matrix is materialized); custom
    reconstructors go through the explicit dense norm, which is meant for
    desk-scale studies.
    """
    if original.num_edges == 0:
        raise MetricDomainError("GRE of an edgeless graph")
    if reconstructor is None:
        kept = sample.edges.shape[0]
        return float(np.sqrt(1.0 - kept / original.num_edges))
    diff = adjacency_matrix(original) - reconstructor(original, sample)
    return float(np.linalg.norm(diff) / np.linalg.norm(adjacency_matrix(original)))


def time_sampling(fn: Callable[[], SampleResult]) -> tuple[SampleResult, float]:
    """Wall-clock the sampling call alone; returns (result, milliseconds)."""
    t0 = time.perf_counter()
    result = fn()
    return result, (time.perf_counter() - t0) * 1000.0


@dataclass
class MetricsReport:
    sampling_ratio: float
    ntds: float | None
    etds: float | None
    mpr_per_schema: dict[str, float | None]
    mpr_macro: float | None
    mpr_pooled: float | None
    gre: float | None
    one_minus_gre: float | None
    runtime_ms: float | None = None
    undefined: list[str] = field(default_factory=list)

    @staticmethod
    def _round(x: float | None) -> float | None:
        # 9 significant digits keeps the JSON rendering golden-test stable
        return None if x is None else float(f"{x:.9g}")

    def to_dict(self) -> dict:
        return {
            "sampling_ratio": self._round(self.sampling_ratio),
            "ntds": self._round(self.ntds),
            "etds": self._round(self.etds),
            "mpr_per_schema": {k: self._round(v) for k, v in self.mpr_per_schema.items()},
            "mpr_macro": self._round(self.mpr_macro),
            "mpr_pooled": self._round(self.mpr_pooled),
            "gre": self._round(self.gre),
            "one_minus_gre": self._round(self.one_minus_gre),
            "runtime_ms": self._round(self.runtime_ms),
            "undefined": list(self.undefined),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, doc: dict) -> "MetricsReport":
        return cls(
            sampling_ratio=doc["sampling_ratio"],
            ntds=doc["ntds"],
            etds=doc["etds"],
            mpr_per_schema=dict(doc["mpr_per_schema"]),
            mpr_macro=doc["mpr_macro"],
            mpr_pooled=doc["mpr_pooled"],
            gre=doc["gre"],
            one_minus_gre=doc["one_minus_gre"],
            runtime_ms=doc.get("runtime_ms"),
            undefined=list(doc.get("undefined", [])),
        )


def evaluate(
    original: HeteroGraph,
    sample: SampleResult,
    paths: list[MetaPathSchema],
    epsilon: float = DEFAULT_EPSILON,
    runtime_ms: float | None = None,
    reconstructor: Reconstructor | None = None,
) -> MetricsReport:
    """All metrics in one report; impossible ones are marked, never zeroed."""
    undefined: list[str] = []

    try:
        ntds_v = ntds(original, sample, epsilon)
    except MetricDomainError:
        ntds_v = None
        undefined.append("ntds")
    try:
        etds_v = etds(original, sample, epsilon)
    except MetricDomainError:
        etds_v = None
        undefined.append("etds")
    per, macro, pooled = mpr(original, sample, paths)
    if macro is None:
        undefined.append("mpr_macro")
    try:
        gre_v = gre(original, sample, reconstructor)
    except MetricDomainError:
        gre_v = None
        undefined.append("gre")

    return MetricsReport(
        sampling_ratio=sample.achieved_ratio,
        ntds=ntds_v,
        etds=etds_v,
        mpr_per_schema=per,
        mpr_macro=macro,
        mpr_pooled=pooled,
        gre=gre_v,
        one_minus_gre=None if gre_v is None else 1.0 - gre_v,
        runtime_ms=runtime_ms,
        undefined=undefined,
    )
