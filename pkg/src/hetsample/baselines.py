"""Classical graph sampling baselines: IRV, RDN, RPN, RE, RW, FF.

All of them take the same (graph, params) pair, honor the node budget
ceil(ratio * |V|) (random-edge may overshoot by one node when the closing
edge brings two endpoints in), induce the edge set over the chosen nodes
and are reproducible per seed through a single generator per invocation.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import math

import numpy as np

from .errors import ConfigError, ParameterError
from .graph import HeteroGraph
from .sampler import SampleResult, make_result


@dataclass
class BaselineParams:
    ratio: float
    seed: int = 0
    pagerank_damping: float = 0.85
    pagerank_iters: int = 50
    restart: float = 0.15
    burn_prob: float = 0.4

    def __post_init__(self):
        if not 0.0 < self.ratio <= 1.0:
            raise ParameterError("ratio must be in (0, 1]")
        if not 0.0 <= self.pagerank_damping < 1.0:
            raise ParameterError("pagerank damping must be in [0, 1)")
        if self.pagerank_iters < 1:
            raise ParameterError("pagerank iteration count must be >= 1")
        if not 0.0 <= self.restart <= 1.0:
            raise ParameterError("restart probability must be in [0, 1]")
        if not 0.0 < self.burn_prob < 1.0:
            raise ParameterError("burn probability must be in (0, 1)")


def _budget(graph: HeteroGraph, ratio: float) -> int:
    return math.ceil(ratio * graph.num_nodes)


def _result(graph, nodes, method, params, extra_stats=None) -> SampleResult:
    prov = {int(v): method for v in nodes}
    stats = {"nodes": len(prov)}
    if extra_stats:
        stats.update(extra_stats)
    return make_result(graph, nodes, prov, stats, params.ratio, method, params.seed)


def _weighted_order(rng: np.random.Generator, weights: np.ndarray) -> np.ndarray:
    """Sampling-without-replacement order via exponential races.

    Zero-weight nodes sort last (still reachable when the budget demands
    them); equal weights reduce to a uniform permutation.
    """
    keys = rng.exponential(size=weights.size)
    with np.errstate(divide="ignore"):
        keys = keys / weights
    return np.argsort(keys, kind="stable")


def sample_irv(graph: HeteroGraph, params: BaselineParams) -> SampleResult:
    """Induced random vertex sampling: uniform nodes, induced edges."""
    rng = np.random.default_rng(params.seed)
    nodes = rng.permutation(graph.num_nodes)[: _budget(graph, params.ratio)]
    return _result(graph, nodes, "irv", params)


def sample_rdn(graph: HeteroGraph, params: BaselineParams) -> SampleResult:
    """Random degree node sampling: inclusion odds proportional to degree."""
    rng = np.random.default_rng(params.seed)
    order = _weighted_order(rng, graph.degrees().astype(np.float64))
    return _result(graph, order[: _budget(graph, params.ratio)], "rdn", params)


def pagerank(graph: HeteroGraph, damping: float = 0.85, iters: int = 50) -> np.ndarray:
    """Power iteration with uniform teleport; scores sum to 1 each sweep.

    Dangling (isolated) nodes spread their mass uniformly.
    """
    n = graph.num_nodes
    if n == 0:
        raise ParameterError("pagerank of an empty graph")
    deg = graph.degrees().astype(np.float64)
    src = np.concatenate([graph.edges[:, 0], graph.edges[:, 1]])
    dst = np.concatenate([graph.edges[:, 1], graph.edges[:, 0]])
    dangling = deg == 0
    x = np.full(n, 1.0 / n)
    for _ in range(iters):
        out = np.zeros(n)
        if src.size:
            contrib = np.where(dangling, 0.0, x / np.where(dangling, 1.0, deg))
            np.add.at(out, dst, contrib[src])
        loose = x[dangling].sum()
        x = (1.0 - damping) / n + damping * (out + loose / n)
    return x


def sample_rpn(graph: HeteroGraph, params: BaselineParams) -> SampleResult:
    """Random pagerank node sampling: inclusion odds proportional to pagerank."""
    rng = np.random.default_rng(params.seed)
    scores = pagerank(graph, params.pagerank_damping, params.pagerank_iters)
    order = _weighted_order(rng, scores)
    return _result(graph, order[: _budget(graph, params.ratio)], "rpn", params)


def sample_re(graph: HeteroGraph, params: BaselineParams) -> SampleResult:
    """Random edge sampling: uniform edges until their endpoints fill the budget.

    Isolated nodes are never reachable; budget may overshoot by one node.
    """
    rng = np.random.default_rng(params.seed)
    budget = _budget(graph, params.ratio)
    nodes: set[int] = set()
    for row in rng.permutation(graph.num_edges):
        if len(nodes) >= budget:
            break
        s, d, _ = graph.edges[row]
        nodes.add(int(s))
        nodes.add(int(d))
    return _result(graph, nodes, "re", params)


# steps without growth before a random-walk jump is forced
_RW_STALL_LIMIT = 10_000


def sample_rw(graph: HeteroGraph, params: BaselineParams) -> SampleResult:
    """Random walk sampling with restart; stuck or stalled walks jump uniformly."""
    rng = np.random.default_rng(params.seed)
    n = graph.num_nodes
    budget = _budget(graph, params.ratio)
    visited = np.zeros(n, dtype=bool)
    order: list[int] = []

    def visit(v: int):
        if not visited[v]:
            visited[v] = True
            order.append(v)

    cur = int(rng.integers(n))
    visit(cur)
    stall = 0
    while len(order) < budget:
        if params.restart > 0 and rng.random() < params.restart:
            cur = int(rng.integers(n))
        else:
            nbr, _ = graph.neighbor_slice(cur)
            if nbr.size == 0:
                cur = int(rng.integers(n))
            else:
                cur = int(nbr[rng.integers(nbr.size)])
        before = len(order)
        visit(cur)
        stall = 0 if len(order) > before else stall + 1
        if stall >= _RW_STALL_LIMIT:
            # trapped in an exhausted region (e.g. component smaller than
            # the budget with restart=0): jump to an unvisited node
            remaining = np.flatnonzero(~visited)
            cur = int(remaining[rng.integers(remaining.size)])
            visit(cur)
            stall = 0
    return _result(graph, order, "rw", params)


def sample_ff(graph: HeteroGraph, params: BaselineParams) -> SampleResult:
    """Forest fire sampling: geometric burn fan-out, uniform re-ignition."""
    rng = np.random.default_rng(params.seed)
    n = graph.num_nodes
    budget = _budget(graph, params.ratio)
    burned = np.zeros(n, dtype=bool)
    order: list[int] = []
    queue: deque[int] = deque()

    def burn(v: int) -> bool:
        if burned[v]:
            return False
        burned[v] = True
        order.append(v)
        queue.append(v)
        return True

    while len(order) < budget:
        if not queue:
            remaining = np.flatnonzero(~burned)
            burn(int(remaining[rng.integers(remaining.size)]))
            continue
        v = queue.popleft()
        # failures before first success: mean burn_prob / (1 - burn_prob)
        fanout = int(rng.geometric(1.0 - params.burn_prob)) - 1
        if fanout == 0:
            continue
        nbr, _ = graph.neighbor_slice(v)
        nbr = np.unique(nbr)
        nbr = nbr[~burned[nbr]]
        if nbr.size == 0:
            continue
        take = min(fanout, nbr.size, budget - len(order))
        for u in rng.choice(nbr, size=take, replace=False):
            burn(int(u))
    return _result(graph, order, "ff", params)


BASELINES = {
    "irv": sample_irv,
    "rdn": sample_rdn,
    "rpn": sample_rpn,
    "re": sample_re,
    "rw": sample_rw,
    "ff": sample_ff,
}


def run_baseline(graph: HeteroGraph, method: str, params: BaselineParams) -> SampleResult:
    try:
        fn = BASELINES[method]
    except KeyError:
        raise ConfigError(f"unknown baseline method {method!r}") from None
    return fn(graph, params)
