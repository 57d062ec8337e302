"""Seeded synthetic heterogeneous graph generator.

Node counts are honored exactly; per-edge-type counts are exact whenever the
pair space can be enumerated and within 1% otherwise (rejection sampling).
Within each type, endpoint weights follow a power law in the node index, so
index 0 of every type is its biggest hub when skew > 0.  Node order in the
output interleaves types by fractional position, keeping any id-ordered
prefix approximately type-proportional.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .graph import HeteroGraph, SchemaGraph

# pair spaces up to this size are enumerated for exact weighted draws
_ENUMERATION_LIMIT = 4_000_000


@dataclass
class SyntheticParams:
    node_counts: dict[str, int]
    # label -> (endpoint type a, endpoint type b, edge count)
    edge_counts: dict[str, tuple[str, str, int]]
    skew: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not self.node_counts:
            raise ParameterError("at least one node type is required")
        for label, c in self.node_counts.items():
            if c <= 0:
                raise ParameterError(f"node count for {label!r} must be positive")
        for label, (a, b, c) in self.edge_counts.items():
            if a not in self.node_counts or b not in self.node_counts:
                raise ParameterError(f"edge type {label!r} references unknown node type")
            if c <= 0:
                raise ParameterError(f"edge count for {label!r} must be positive")
        if self.skew < 0:
            raise ParameterError("skew exponent must be >= 0")

    def schema(self) -> SchemaGraph:
        return SchemaGraph(
            node_types=tuple(self.node_counts),
            edge_types=tuple((lab, a, b) for lab, (a, b, _) in self.edge_counts.items()),
        )

    def to_dict(self) -> dict:
        return {
            "node_counts": dict(self.node_counts),
            "edge_types": [
                {"label": lab, "endpoints": [a, b], "count": c}
                for lab, (a, b, c) in self.edge_counts.items()
            ],
            "skew": self.skew,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "SyntheticParams":
        try:
            return cls(
                node_counts={k: int(v) for k, v in doc["node_counts"].items()},
                edge_counts={
                    e["label"]: (e["endpoints"][0], e["endpoints"][1], int(e["count"]))
                    for e in doc["edge_types"]
                },
                skew=float(doc.get("skew", 0.0)),
                seed=int(doc.get("seed", 0)),
            )
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise ParameterError(f"malformed synthetic params: {exc}") from None


def _interleaved_order(counts: list[int]) -> list[tuple[int, int]]:
    """(type id, within-type index) pairs, types striped by fractional position."""
    entries = []
    for t, c in enumerate(counts):
        for j in range(c):
            entries.append(((j + 0.5) / c, t, j))
    entries.sort()
    return [(t, j) for _, t, j in entries]


def _pair_capacity(ca: int, cb: int, same: bool) -> int:
    return ca * (ca - 1) // 2 if same else ca * cb


def _draw_pairs_enumerated(rng, ca, cb, same, wa, wb, count) -> np.ndarray:
    """Exact weighted draw without replacement over the full pair space."""
    if same:
        ii, jj = np.triu_indices(ca, k=1)
    else:
        ii = np.repeat(np.arange(ca), cb)
        jj = np.tile(np.arange(cb), ca)
    w = wa[ii] * wb[jj]
    # exponential-race keys: smallest count keys form the weighted sample
    keys = rng.exponential(size=w.size) / w
    take = np.argpartition(keys, count - 1)[:count]
    return np.stack([ii[take], jj[take]], axis=1)


def _draw_pairs_rejection(rng, ca, cb, same, wa, wb, count) -> np.ndarray:
    chosen: set[tuple[int, int]] = set()
    out = []
    rounds = 0
    while len(out) < count and rounds < 200:
        need = count - len(out)
        batch = max(2 * need, 64)
        us = rng.choice(ca, size=batch, p=wa)
        vs = rng.choice(cb, size=batch, p=wb)
        if same:
            lo, hi = np.minimum(us, vs), np.maximum(us, vs)
            keep = lo != hi
            us, vs = lo[keep], hi[keep]
        for u, v in zip(us.tolist(), vs.tolist()):
            if (u, v) not in chosen:
                chosen.add((u, v))
                out.append((u, v))
                if len(out) == count:
                    break
        rounds += 1
    if len(out) < int(np.ceil(0.99 * count)):
        raise ParameterError(
            f"could not place {count} distinct edges (got {len(out)}); "
            "pair space too dense for rejection sampling"
        )
    return np.asarray(out, dtype=np.int64).reshape(-1, 2)


def generate_synthetic(params: SyntheticParams) -> HeteroGraph:
    """Deterministic generator: identical params (incl. seed) -> identical graph."""
    schema = params.schema()
    counts = [params.node_counts[t] for t in schema.node_types]
    order = _interleaved_order(counts)
    # node id of (type, within-type index)
    id_of = {}
    names = []
    type_ids = []
    for t, j in order:
        id_of[(t, j)] = len(names)
        names.append(f"{schema.node_types[t]}{j}")
        type_ids.append(t)

    rng = np.random.default_rng(params.seed)
    weights = []
    for c in counts:
        w = (np.arange(c, dtype=np.float64) + 1.0) ** (-params.skew)
        weights.append(w / w.sum())

    triples = []
    for et, (label, (a, b, count)) in enumerate(params.edge_counts.items()):
        ta, tb = schema.type_id(a), schema.type_id(b)
        same = ta == tb
        cap = _pair_capacity(counts[ta], counts[tb], same)
        if count > cap:
            raise ParameterError(
                f"edge type {label!r}: {count} edges exceed capacity {cap}"
            )
        if cap <= _ENUMERATION_LIMIT:
            pairs = _draw_pairs_enumerated(
                rng, counts[ta], counts[tb], same, weights[ta], weights[tb], count
            )
        else:
            pairs = _draw_pairs_rejection(
                rng, counts[ta], counts[tb], same, weights[ta], weights[tb], count
            )
        for u, v in pairs:
            triples.append((id_of[(ta, int(u))], id_of[(tb, int(v))], et))

    return HeteroGraph.build(schema, names, type_ids, triples)
