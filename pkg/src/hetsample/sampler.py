"""Three-phase deterministic sampler for typed graphs.

Phase 1 picks the top-k highest-importance nodes per type (leaders), where
importance is the type weight times the degree.  Phase 2 grows each leader's
neighborhood two ways: quota-balanced one-hop expansion (per-type quotas
proportional to the leader's typed neighbor counts) and walks along the
highest-weight type-level meta-path schemas.  Phase 3 runs guided walks
along the configured global meta-path set.  A node budget of
ceil(ratio * |V|) caps the pipeline; additions stop the moment it is hit,
walks being added atomically (bounded overshoot <= walk length).

The default mode is fully deterministic: candidate ranking is (degree desc,
id asc) everywhere.  The stochastic mode replaces the one-hop candidate
ranking with seeded uniform draws inside each type quota.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, GraphLookupError, ParameterError
from .graph import HeteroGraph, SchemaGraph
from .metapath import (
    MetaPathSchema,
    WalkResult,
    enumerate_schemas,
    guided_walk,
    schema_importance,
)

log = logging.getLogger(__name__)

SUM_TOL = 1e-9


@dataclass
class ImportanceConfig:
    """Type- and path-level weights steering the sampler.

    alpha: per node type, sums to 1.  W: symmetric node-type-pair matrix,
    all entries summed equal 1.  paths/beta: the global meta-path set and
    its weights (sum 1).
    """

    alpha: np.ndarray
    W: np.ndarray
    paths: list[MetaPathSchema]
    beta: np.ndarray

    def __post_init__(self):
        self.alpha = np.asarray(self.alpha, dtype=np.float64)
        self.W = np.asarray(self.W, dtype=np.float64)
        self.beta = np.asarray(self.beta, dtype=np.float64)

    def validate(self, schema: SchemaGraph):
        m = schema.num_node_types
        if self.alpha.shape != (m,):
            raise ConfigError(f"alpha must have {m} entries")
        if np.any(self.alpha < 0):
            raise ConfigError("alpha entries must be >= 0")
        if abs(float(self.alpha.sum()) - 1.0) > SUM_TOL:
            raise ConfigError(f"alpha must sum to 1 (got {self.alpha.sum():.12f})")
        if self.W.shape != (m, m):
            raise ConfigError(f"W must be {m}x{m}")
        if np.any(self.W < 0):
            raise ConfigError("W entries must be >= 0")
        if not np.allclose(self.W, self.W.T, atol=SUM_TOL, rtol=0.0):
            raise ConfigError("W must be symmetric")
        if abs(float(self.W.sum()) - 1.0) > SUM_TOL:
            raise ConfigError(f"W entries must sum to 1 (got {self.W.sum():.12f})")
        if len(self.paths) == 0:
            raise ConfigError("meta-path set must not be empty")
        if self.beta.shape != (len(self.paths),):
            raise ConfigError("beta length must match the meta-path set")
        if np.any(self.beta < 0):
            raise ConfigError("beta entries must be >= 0")
        if abs(float(self.beta.sum()) - 1.0) > SUM_TOL:
            raise ConfigError(f"beta must sum to 1 (got {self.beta.sum():.12f})")
        for p in self.paths:
            p.validate(schema)


@dataclass
class SamplerParams:
    ratio: float
    k: int | None = None  # None: per-type default max(1, ceil(0.01 * type size))
    delta: int = 10
    max_len: int = 4
    k_mp: int = 3
    walks_per_schema: int = 2
    seed: int = 0
    mode: str = "deterministic"
    disable_ts: bool = False
    disable_bne: bool = False
    disable_mgne: bool = False
    disable_mp: bool = False

    def __post_init__(self):
        if not 0.0 < self.ratio <= 1.0:
            raise ParameterError("ratio must be in (0, 1]")
        if self.k is not None and self.k < 1:
            raise ParameterError("k must be >= 1")
        if self.delta < 0:
            raise ParameterError("delta must be >= 0")
        if self.max_len < 1:
            raise ParameterError("max_len must be >= 1")
        if self.k_mp < 1:
            raise ParameterError("k_mp must be >= 1")
        if self.walks_per_schema < 1:
            raise ParameterError("walks_per_schema must be >= 1")
        if self.mode not in ("deterministic", "stochastic"):
            raise ParameterError(f"unknown mode {self.mode!r}")

    def k_for_type(self, type_size: int) -> int:
        if self.k is not None:
            return min(self.k, type_size)
        return min(max(1, math.ceil(0.01 * type_size)), type_size)


@dataclass
class SampleResult:
    nodes: np.ndarray  # sorted ascending node ids
    edges: np.ndarray  # (m, 3) induced edge rows of the original graph
    provenance: dict[int, str]
    phase_stats: dict[str, int]
    target_ratio: float
    achieved_ratio: float
    method: str = "heterosample"
    seed: int = 0

    def node_set(self) -> set[int]:
        return set(int(v) for v in self.nodes)

    def to_meta_dict(self, graph: HeteroGraph) -> dict:
        """JSON-ready sidecar: provenance by node name, phase stats, ratios."""
        return {
            "method": self.method,
            "seed": self.seed,
            "target_ratio": self.target_ratio,
            "achieved_ratio": self.achieved_ratio,
            "num_nodes": int(self.nodes.size),
            "num_edges": int(self.edges.shape[0]),
            "phase_stats": dict(self.phase_stats),
            "provenance": {
                graph.node_names[v]: tag for v, tag in sorted(self.provenance.items())
            },
        }


def make_result(
    graph: HeteroGraph,
    node_ids,
    provenance: dict[int, str],
    phase_stats: dict[str, int],
    target_ratio: float,
    method: str,
    seed: int,
) -> SampleResult:
    nodes = np.asarray(sorted(set(int(v) for v in node_ids)), dtype=np.int64)
    mask = np.zeros(graph.num_nodes, dtype=bool)
    mask[nodes] = True
    edges = graph.induced_edge_rows(mask)
    return SampleResult(
        nodes=nodes,
        edges=edges,
        provenance=provenance,
        phase_stats=phase_stats,
        target_ratio=target_ratio,
        achieved_ratio=nodes.size / graph.num_nodes if graph.num_nodes else 0.0,
        method=method,
        seed=seed,
    )


# -- scoring and selection ---------------------------------------------


def node_importance(graph: HeteroGraph, alpha: np.ndarray, node: int) -> float:
    """Type weight times degree."""
    if not 0 <= node < graph.num_nodes:
        raise GraphLookupError(f"unknown node id {node}")
    return float(alpha[graph.node_types[node]]) * graph.degree(node)


def importance_scores(graph: HeteroGraph, alpha: np.ndarray) -> np.ndarray:
    return np.asarray(alpha, dtype=np.float64)[graph.node_types] * graph.degrees()


def select_top_leaders(
    graph: HeteroGraph, alpha: np.ndarray, k: int | SamplerParams
) -> dict[int, list[int]]:
    """Per type, the k nodes with highest importance (ties: ascending id).

    k may be an int (same for every type) or SamplerParams, whose per-type
    default rule is then applied.  Types with fewer than k nodes return all
    their nodes.
    """
    scores = importance_scores(graph, alpha)
    out: dict[int, list[int]] = {}
    for t in range(graph.schema.num_node_types):
        members = np.flatnonzero(graph.node_types == t)
        if members.size == 0:
            out[t] = []
            continue
        if isinstance(k, SamplerParams):
            kt = k.k_for_type(members.size)
        else:
            kt = min(int(k), members.size)
        order = np.lexsort((members, -scores[members]))
        out[t] = [int(v) for v in members[order][:kt]]
    return out


def _ranked_candidates(graph: HeteroGraph, cands: np.ndarray) -> np.ndarray:
    """Deterministic candidate order: degree descending, then id ascending."""
    degs = graph.degrees()[cands]
    return cands[np.lexsort((cands, -degs))]


def bne_quotas(neighbor_counts: np.ndarray, delta: int) -> np.ndarray:
    """Per-type quotas floor(count / total * delta); zero total -> all zero."""
    total = int(neighbor_counts.sum())
    if total == 0:
        return np.zeros_like(neighbor_counts)
    return (neighbor_counts * delta) // total


def bne_expand(
    graph: HeteroGraph,
    in_sample: np.ndarray,
    leader: int,
    W: np.ndarray,
    delta: int,
    mode: str = "deterministic",
    rng: np.random.Generator | None = None,
) -> list[int]:
    """Quota-balanced one-hop additions around a leader.

    Candidates are the leader's neighbors outside the sample; per-type
    quotas are proportional to candidate counts (floored).  Deterministic
    mode ranks candidates by (degree desc, id asc); stochastic mode draws
    uniformly inside each type, which is what weight-proportional selection
    degenerates to because the pair weight is constant within a type.
    Returns at most delta nodes, ordered by ascending type then rank.
    """
    nbr, _ = graph.neighbor_slice(leader)
    nbr = np.unique(nbr)
    cands = nbr[~in_sample[nbr]]
    counts = np.bincount(graph.node_types[cands], minlength=graph.schema.num_node_types)
    quotas = bne_quotas(counts, delta)
    picked: list[int] = []
    for t in range(graph.schema.num_node_types):
        q = int(min(quotas[t], counts[t]))
        if q == 0:
            continue
        of_type = cands[graph.node_types[cands] == t]
        if mode == "stochastic":
            if rng is None:
                raise ParameterError("stochastic mode requires a generator")
            chosen = np.sort(rng.choice(of_type, size=q, replace=False))
        else:
            chosen = _ranked_candidates(graph, of_type)[:q]
        picked.extend(int(v) for v in chosen)
    return picked


def _top_schemas(scored: list[tuple[float, MetaPathSchema]], k_mp: int) -> list[MetaPathSchema]:
    """Highest-scoring schemas; ties prefer shorter, then lexicographic."""
    order = sorted(
        scored,
        key=lambda sp: (-sp[0], sp[1].length, sp[1].node_type_ids, sp[1].edge_type_ids),
    )
    return [p for _, p in order[:k_mp]]


def _mgne_walks(
    graph: HeteroGraph,
    leader: int,
    W: np.ndarray,
    max_len: int,
    k_mp: int,
    schema_cache: dict[tuple[int, int], list[MetaPathSchema]] | None = None,
) -> list[WalkResult]:
    """One guided walk per top schema enumerated from the leader's type."""
    start_type = int(graph.node_types[leader])
    key = (start_type, max_len)
    if schema_cache is not None and key in schema_cache:
        schemas = schema_cache[key]
    else:
        schemas = enumerate_schemas(graph.schema, start_type, max_len)
        if schema_cache is not None:
            schema_cache[key] = schemas
    if not schemas:
        return []
    scored = [(schema_importance(p, W), p) for p in schemas]
    return [guided_walk(graph, leader, p) for p in _top_schemas(scored, k_mp)]


def mgne_expand(
    graph: HeteroGraph,
    in_sample: np.ndarray,
    leader: int,
    W: np.ndarray,
    max_len: int,
    k_mp: int,
) -> list[int]:
    """Nodes contributed by the leader's top-schema walks, minus the sample."""
    seen: list[int] = []
    for walk in _mgne_walks(graph, leader, W, max_len, k_mp):
        for v in walk.nodes:
            if not in_sample[v] and v not in seen:
                seen.append(v)
    return seen


def _global_walks(
    graph: HeteroGraph,
    leader: int,
    paths: list[MetaPathSchema],
    beta: np.ndarray,
    W: np.ndarray,
    k_mp: int,
    walks_per_schema: int,
) -> list[WalkResult]:
    """Guided walks for the configured path set, fanned over first hops.

    Walk 1 follows the unconstrained greedy walk; walks 2..r force the
    first hop onto the next candidates in deterministic order, skipping
    leaders with fewer conforming neighbors.
    """
    start_type = int(graph.node_types[leader])
    scored = [
        (float(beta[i]) * schema_importance(p, W), p)
        for i, p in enumerate(paths)
        if p.node_type_ids[0] == start_type
    ]
    if not scored:
        return []
    walks: list[WalkResult] = []
    for p in _top_schemas(scored, k_mp):
        first_cands = graph.neighbors_via(leader, p.edge_type_ids[0], p.node_type_ids[1])
        if first_cands.size == 0:
            walks.append(WalkResult([int(leader)], [], truncated=True))
            continue
        ranked = _ranked_candidates(graph, first_cands)
        for j in range(min(walks_per_schema, ranked.size)):
            walks.append(guided_walk(graph, leader, p, first_hop=int(ranked[j])))
    return walks


def metapath_global_sample(
    graph: HeteroGraph,
    in_sample: np.ndarray,
    leaders: list[int],
    paths: list[MetaPathSchema],
    beta: np.ndarray,
    W: np.ndarray,
    k_mp: int,
    walks_per_schema: int,
) -> tuple[list[int], list[tuple[int, int, int]]]:
    """Nodes and edges contributed by the global walk phase (budget-free)."""
    if not paths:
        raise ConfigError("global sampling phase requires a non-empty meta-path set")
    nodes: list[int] = []
    edges: list[tuple[int, int, int]] = []
    seen = in_sample.copy()
    for leader in sorted(leaders):
        for walk in _global_walks(graph, leader, paths, beta, W, k_mp, walks_per_schema):
            edges.extend(walk.edges)
            for v in walk.nodes:
                if not seen[v]:
                    seen[v] = True
                    nodes.append(v)
    return nodes, edges


# -- full pipeline -------------------------------------------------------


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.count = 0

    @property
    def full(self) -> bool:
        return self.count >= self.limit


def sample(graph: HeteroGraph, config: ImportanceConfig, params: SamplerParams) -> SampleResult:
    """Run the full pipeline under a node budget of ceil(ratio * |V|).

    ratio = 1 returns the whole graph.  Phases run in order (leaders,
    one-hop + schema-walk expansion per leader ascending by id, global
    walks); each single-node addition re-checks the budget and the pipeline
    stops once it is reached, walks landing atomically (overshoot bounded
    by the walk length).
    """
    config.validate(graph.schema)
    n = graph.num_nodes
    if n == 0:
        raise ParameterError("cannot sample an empty graph")
    budget = _Budget(math.ceil(params.ratio * n))
    stats: dict[str, int] = {
        "leader": 0,
        "seed-fallback": 0,
        "bne": 0,
        "mgne": 0,
        "walk": 0,
        "truncated_walks": 0,
    }

    if budget.limit >= n:
        # ratio 1: sampling degenerates to the identity
        prov = {v: "full" for v in range(n)}
        return make_result(
            graph, range(n), prov, stats, params.ratio, "heterosample", params.seed
        )

    rng = np.random.default_rng(params.seed)
    in_sample = np.zeros(n, dtype=bool)
    prov: dict[int, str] = {}

    def add(v: int, tag: str) -> bool:
        """True when the node went in; respects the budget."""
        if budget.full or in_sample[v]:
            return False
        in_sample[v] = True
        prov[v] = tag
        stats[tag] += 1
        budget.count += 1
        return True

    def add_walk(walk: WalkResult, tag: str):
        # walks land atomically: budget checked before, not inside
        if walk.truncated:
            stats["truncated_walks"] += 1
        if budget.full:
            return
        for v in walk.nodes:
            if not in_sample[v]:
                in_sample[v] = True
                prov[v] = tag
                stats[tag] += 1
                budget.count += 1

    # Step 1: leaders (or stratified random fallback of the same cardinality)
    if params.disable_ts:
        leaders_by_type = {}
        for t in range(graph.schema.num_node_types):
            members = np.flatnonzero(graph.node_types == t)
            if members.size == 0:
                leaders_by_type[t] = []
                continue
            kt = params.k_for_type(members.size)
            leaders_by_type[t] = sorted(
                int(v) for v in rng.choice(members, size=kt, replace=False)
            )
        tag = "seed-fallback"
    else:
        leaders_by_type = select_top_leaders(graph, config.alpha, params)
        tag = "leader"

    truncated_leaders = False
    for t in sorted(leaders_by_type):
        for v in sorted(leaders_by_type[t]):
            if budget.full:
                truncated_leaders = True
                break
            add(v, tag)
        if truncated_leaders:
            break
    if truncated_leaders:
        log.warning("budget %d smaller than the leader set; leaders truncated", budget.limit)

    leaders = sorted(v for vs in leaders_by_type.values() for v in vs if in_sample[v])
    schema_cache: dict[tuple[int, int], list[MetaPathSchema]] = {}

    # Step 2: per-leader expansion
    for leader in leaders:
        if budget.full:
            break
        if not params.disable_bne:
            for v in bne_expand(
                graph, in_sample, leader, config.W, params.delta, params.mode, rng
            ):
                add(v, "bne")
                if budget.full:
                    break
        if budget.full:
            break
        if not params.disable_mgne:
            for walk in _mgne_walks(
                graph, leader, config.W, params.max_len, params.k_mp, schema_cache
            ):
                add_walk(walk, "mgne")
                if budget.full:
                    break

    # Step 3: global meta-path walks
    if not params.disable_mp and not budget.full:
        if not config.paths:
            raise ConfigError("global sampling phase requires a non-empty meta-path set")
        for leader in leaders:
            if budget.full:
                break
            for walk in _global_walks(
                graph,
                leader,
                config.paths,
                config.beta,
                config.W,
                params.k_mp,
                params.walks_per_schema,
            ):
                add_walk(walk, "walk")
                if budget.full:
                    break

    return make_result(
        graph,
        np.flatnonzero(in_sample),
        prov,
        stats,
        params.ratio,
        "heterosample",
        params.seed,
    )
