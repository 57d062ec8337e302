"""Meta-path schemas: enumeration, scoring, instance counting, guided walks.

A schema is a type-level path A1 -[R1]- A2 ... -[Rl]- A(l+1).  An instance
is an ordered node sequence conforming to the schema; revisits are allowed,
so a single A-P edge yields the APA instance (a, p, a).  Counting uses
chained biadjacency multiplication (exact integers); an exhaustive DFS
enumerator is kept alongside as the independent slow path.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, GraphLookupError, ParameterError
from .graph import HeteroGraph, SchemaGraph


@dataclass(frozen=True)
class MetaPathSchema:
    node_type_ids: tuple[int, ...]
    edge_type_ids: tuple[int, ...]

    def __post_init__(self):
        if len(self.node_type_ids) != len(self.edge_type_ids) + 1:
            raise ParameterError("schema must alternate l+1 node types and l edge types")
        if len(self.edge_type_ids) < 1:
            raise ParameterError("schema length must be >= 1")

    @property
    def length(self) -> int:
        return len(self.edge_type_ids)

    def validate(self, schema: SchemaGraph):
        for i, et in enumerate(self.edge_type_ids):
            if not 0 <= et < schema.num_edge_types:
                raise ConfigError(f"edge type id {et} out of range")
            a, b = self.node_type_ids[i], self.node_type_ids[i + 1]
            if et not in schema.compatible_edge_types(a, b):
                raise ConfigError(
                    f"edge type {schema.edge_types[et][0]!r} incompatible with "
                    f"({schema.node_types[a]}, {schema.node_types[b]})"
                )

    def label(self, schema: SchemaGraph) -> str:
        """Compact text form; edge labels shown only where ambiguous."""
        parts = [schema.node_types[self.node_type_ids[0]]]
        for i, et in enumerate(self.edge_type_ids):
            a, b = self.node_type_ids[i], self.node_type_ids[i + 1]
            if len(schema.compatible_edge_types(a, b)) > 1:
                parts.append(f"[{schema.edge_types[et][0]}]")
            parts.append(schema.node_types[self.node_type_ids[i + 1]])
        return "-".join(parts)


def parse_schema(text: str, schema: SchemaGraph) -> MetaPathSchema:
    """Parse `A-P-A` or `A-[AP]-P-[AP]-A` into a MetaPathSchema.

    Omitted edge labels are inferred when exactly one compatible edge type
    exists between the adjacent node types, otherwise a ConfigError is raised.
    """
    tokens = [t for t in text.split("-") if t != ""]
    node_ids: list[int] = []
    gaps: list[int | None] = []  # explicit edge type per step, None = infer
    pending: int | None = None
    for tok in tokens:
        if re.fullmatch(r"\[.+\]", tok):
            if not node_ids or pending is not None:
                raise ConfigError(f"meta-path {text!r}: misplaced edge label {tok}")
            try:
                pending = schema.edge_type_id(tok[1:-1])
            except GraphLookupError as exc:
                raise ConfigError(f"meta-path {text!r}: {exc}") from None
        else:
            try:
                tid = schema.type_id(tok)
            except GraphLookupError as exc:
                raise ConfigError(f"meta-path {text!r}: {exc}") from None
            if node_ids:
                gaps.append(pending)
                pending = None
            node_ids.append(tid)
    if pending is not None:
        raise ConfigError(f"meta-path {text!r} must end with a node type")
    if len(node_ids) < 2:
        raise ConfigError(f"meta-path {text!r} needs at least one edge step")
    resolved: list[int] = []
    for i, et in enumerate(gaps):
        if et is None:
            options = schema.compatible_edge_types(node_ids[i], node_ids[i + 1])
            if len(options) == 0:
                raise ConfigError(
                    f"meta-path {text!r}: no edge type connects "
                    f"{schema.node_types[node_ids[i]]} and {schema.node_types[node_ids[i + 1]]}"
                )
            if len(options) > 1:
                raise ConfigError(
                    f"meta-path {text!r}: ambiguous edge between "
                    f"{schema.node_types[node_ids[i]]} and {schema.node_types[node_ids[i + 1]]}; "
                    "write it explicitly as [LABEL]"
                )
            resolved.append(options[0])
        else:
            resolved.append(et)
    mp = MetaPathSchema(tuple(node_ids), tuple(resolved))
    mp.validate(schema)
    return mp


def enumerate_schemas(schema: SchemaGraph, start_type: int, max_len: int) -> list[MetaPathSchema]:
    """All type-level paths of length 1..max_len from start_type.

    Ordered by (length, node type ids, edge type ids) so the output is a
    stable ranking domain for top-k selections.
    """
    if max_len < 1:
        raise ParameterError("max_len must be >= 1")
    if not 0 <= start_type < schema.num_node_types:
        raise GraphLookupError(f"unknown node type id {start_type}")
    # type-level transitions: type -> sorted (next type, edge type)
    trans: list[list[tuple[int, int]]] = [[] for _ in schema.node_types]
    for et in range(schema.num_edge_types):
        a, b = schema.endpoint_type_ids(et)
        trans[a].append((b, et))
        if a != b:
            trans[b].append((a, et))
    for t in trans:
        t.sort()

    found: list[MetaPathSchema] = []

    def extend(nodes: list[int], edges: list[int]):
        if edges:
            found.append(MetaPathSchema(tuple(nodes), tuple(edges)))
        if len(edges) == max_len:
            return
        for nxt, et in trans[nodes[-1]]:
            extend(nodes + [nxt], edges + [et])

    extend([start_type], [])
    found.sort(key=lambda p: (p.length, p.node_type_ids, p.edge_type_ids))
    return found


def schema_importance(path: MetaPathSchema, W: np.ndarray) -> float:
    """Product of the per-step node-type-pair weights along the path."""
    score = 1.0
    for i in range(path.length):
        a, b = path.node_type_ids[i], path.node_type_ids[i + 1]
        if a >= W.shape[0] or b >= W.shape[1]:
            raise ConfigError("importance matrix too small for path types")
        score *= float(W[a, b])
    return score


def weighted_schema_importance(path_index: int, beta: np.ndarray, paths: list[MetaPathSchema], W: np.ndarray) -> float:
    """beta-weighted path importance used by the global sampling phase."""
    if not 0 <= path_index < len(paths):
        raise ConfigError(f"meta-path index {path_index} out of range")
    if len(beta) != len(paths):
        raise ConfigError("beta length does not match meta-path set")
    return float(beta[path_index]) * schema_importance(paths[path_index], W)


def count_instances(graph: HeteroGraph, path: MetaPathSchema) -> int:
    """Number of conforming ordered walks, via chained biadjacency products.

    Exact int64 arithmetic; per-node partial counts are folded right-to-left
    so the cost is O(length * edges).
    """
    path.validate(graph.schema)
    n = graph.num_nodes
    types = graph.node_types
    x = np.zeros(n, dtype=np.int64)
    x[types == path.node_type_ids[-1]] = 1
    for i in range(path.length - 1, -1, -1):
        ta = path.node_type_ids[i]
        tb = path.node_type_ids[i + 1]
        et = path.edge_type_ids[i]
        rows = graph.edges[graph.edges[:, 2] == et]
        nxt = np.zeros(n, dtype=np.int64)
        if rows.shape[0]:
            s, d = rows[:, 0], rows[:, 1]
            fwd = (types[s] == ta) & (types[d] == tb)
            np.add.at(nxt, s[fwd], x[d[fwd]])
            rev = (types[d] == ta) & (types[s] == tb)
            np.add.at(nxt, d[rev], x[s[rev]])
        x = nxt
    return int(x.sum())


def count_instances_exhaustive(graph: HeteroGraph, path: MetaPathSchema) -> int:
    """Independent oracle: depth-first enumeration of every conforming walk."""
    path.validate(graph.schema)
    types = graph.node_types
    starts = np.flatnonzero(types == path.node_type_ids[0])
    total = 0
    l = path.length

    def walk(v: int, depth: int) -> int:
        if depth == l:
            return 1
        et = path.edge_type_ids[depth]
        want = path.node_type_ids[depth + 1]
        nbr, ets = graph.neighbor_slice(v)
        count = 0
        for u, e in zip(nbr.tolist(), ets.tolist()):
            if e == et and types[u] == want:
                count += walk(u, depth + 1)
        return count

    for v in starts.tolist():
        total += walk(v, 0)
    return total


def instances_preserved(graph: HeteroGraph, kept_nodes, path: MetaPathSchema) -> int:
    """Instance count inside the subgraph induced by kept_nodes."""
    return count_instances(graph.induced_subgraph(kept_nodes), path)


@dataclass
class WalkResult:
    nodes: list[int]
    edges: list[tuple[int, int, int]]
    truncated: bool

    @property
    def complete(self) -> bool:
        return not self.truncated


def guided_walk(
    graph: HeteroGraph,
    start: int,
    path: MetaPathSchema,
    first_hop: int | None = None,
) -> WalkResult:
    """Deterministic schema-conforming walk from start.

    At each hop the conforming neighbor with maximum degree is taken, ties
    broken by ascending node id; revisits are allowed.  first_hop, when
    given, overrides the choice of the first step (used to fan walks out
    from the same anchor).  Stops early with truncated=True when no
    conforming neighbor exists.
    """
    if graph.node_types[start] != path.node_type_ids[0]:
        raise ParameterError(
            f"walk start type {graph.node_types[start]} does not match schema head"
        )
    degs = graph.degrees()
    nodes = [int(start)]
    edges: list[tuple[int, int, int]] = []
    cur = int(start)
    for i in range(path.length):
        et = path.edge_type_ids[i]
        want = path.node_type_ids[i + 1]
        if i == 0 and first_hop is not None:
            nxt = int(first_hop)
        else:
            cands = graph.neighbors_via(cur, et, want)
            if cands.size == 0:
                return WalkResult(nodes, edges, truncated=True)
            best = cands[degs[cands] == degs[cands].max()]
            nxt = int(best.min())
        edges.append((cur, nxt, et))
        nodes.append(nxt)
        cur = nxt
    return WalkResult(nodes, edges, truncated=False)
