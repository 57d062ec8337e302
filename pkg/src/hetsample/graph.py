"""Typed undirected graph with per-type adjacency queries.

Nodes carry exactly one type, edges carry exactly one edge type whose
endpoint-type signature is declared in a SchemaGraph.  Node ids are dense
integers assigned in input order; every ordered output is sorted ascending
by id, which is the global tie-breaking rule for the samplers built on top.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    GraphFormatError,
    GraphLookupError,
    SchemaError,
)


@dataclass(frozen=True)
class SchemaGraph:
    """Type-level view of a heterogeneous graph.

    node_types: type labels, index = type id.
    edge_types: (label, endpoint type label pair), index = edge type id.
    Undirected: an edge type between (a, b) also permits (b, a).
    """

    node_types: tuple[str, ...]
    edge_types: tuple[tuple[str, str, str], ...]  # (label, type_a, type_b)

    def __post_init__(self):
        if len(set(self.node_types)) != len(self.node_types):
            raise SchemaError("duplicate node type labels in schema")
        labels = [e[0] for e in self.edge_types]
        if len(set(labels)) != len(labels):
            raise SchemaError("duplicate edge type labels in schema")
        for label, a, b in self.edge_types:
            for t in (a, b):
                if t not in self.node_types:
                    raise SchemaError(
                        f"edge type {label!r} references unknown node type {t!r}"
                    )

    @property
    def num_node_types(self) -> int:
        return len(self.node_types)

    @property
    def num_edge_types(self) -> int:
        return len(self.edge_types)

    def type_id(self, label: str) -> int:
        try:
            return self.node_types.index(label)
        except ValueError:
            raise GraphLookupError(f"unknown node type {label!r}") from None

    def edge_type_id(self, label: str) -> int:
        for i, (lab, _, _) in enumerate(self.edge_types):
            if lab == label:
                return i
        raise GraphLookupError(f"unknown edge type {label!r}")

    def endpoint_type_ids(self, edge_type: int) -> tuple[int, int]:
        _, a, b = self.edge_types[edge_type]
        return self.type_id(a), self.type_id(b)

    def compatible_edge_types(self, type_a: int, type_b: int) -> list[int]:
        """Edge type ids permitted between two node types (symmetric)."""
        out = []
        for i in range(len(self.edge_types)):
            a, b = self.endpoint_type_ids(i)
            if (a, b) == (type_a, type_b) or (a, b) == (type_b, type_a):
                out.append(i)
        return out

    def to_dict(self) -> dict:
        return {
            "node_types": list(self.node_types),
            "edge_types": [
                {"label": lab, "endpoints": [a, b]} for lab, a, b in self.edge_types
            ],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "SchemaGraph":
        try:
            node_types = tuple(doc["node_types"])
            edge_types = tuple(
                (e["label"], e["endpoints"][0], e["endpoints"][1])
                for e in doc["edge_types"]
            )
        except (KeyError, IndexError, TypeError) as exc:
            raise SchemaError(f"malformed schema document: {exc}") from None
        return cls(node_types, edge_types)


@dataclass
class HeteroGraph:
    """Immutable typed graph with CSR adjacency.

    edges is an (m, 3) int64 array of (src, dst, edge_type) with src < dst
    and rows sorted lexicographically; the adjacency mirrors it in both
    directions.  Do not mutate any array after construction.
    """

    schema: SchemaGraph
    node_names: list[str]
    node_types: np.ndarray  # (n,) int64, type id per node
    edges: np.ndarray  # (m, 3) int64, canonical src < dst
    duplicate_edges_dropped: int = 0
    _name_to_id: dict = field(default=None, repr=False)
    _indptr: np.ndarray = field(default=None, repr=False)
    _nbr: np.ndarray = field(default=None, repr=False)
    _nbr_etype: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        self.node_types = np.asarray(self.node_types, dtype=np.int64)
        self.edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 3)
        if self._name_to_id is None:
            self._name_to_id = {name: i for i, name in enumerate(self.node_names)}
        self._build_adjacency()

    def _build_adjacency(self):
        n = self.num_nodes
        if self.edges.shape[0] == 0:
            self._indptr = np.zeros(n + 1, dtype=np.int64)
            self._nbr = np.zeros(0, dtype=np.int64)
            self._nbr_etype = np.zeros(0, dtype=np.int64)
            return
        src = np.concatenate([self.edges[:, 0], self.edges[:, 1]])
        dst = np.concatenate([self.edges[:, 1], self.edges[:, 0]])
        et = np.concatenate([self.edges[:, 2], self.edges[:, 2]])
        order = np.lexsort((et, dst, src))
        src, dst, et = src[order], dst[order], et[order]
        self._indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=self._indptr[1:])
        self._nbr = dst
        self._nbr_etype = et

    # -- construction -------------------------------------------------

    @classmethod
    def build(
        cls,
        schema: SchemaGraph,
        node_names: list[str],
        node_type_ids: list[int] | np.ndarray,
        edge_triples: list[tuple[int, int, int]] | np.ndarray,
    ) -> "HeteroGraph":
        """Validate, canonicalize and deduplicate raw node/edge arrays.

        Edges are undirected and stored once with src < dst; exact duplicate
        (src, dst, type) triples are dropped and counted.  Self-loops are
        rejected, as are edges whose endpoint types do not match the edge
        type signature.
        """
        node_types = np.asarray(node_type_ids, dtype=np.int64)
        n = len(node_names)
        if node_types.shape != (n,):
            raise GraphFormatError("node_names and node_type_ids length mismatch")
        if n and (node_types.min() < 0 or node_types.max() >= schema.num_node_types):
            raise SchemaError("node type id out of range")

        edges = np.asarray(edge_triples, dtype=np.int64).reshape(-1, 3)
        dropped = 0
        if edges.shape[0]:
            if edges[:, :2].min() < 0 or edges[:, :2].max() >= n:
                raise GraphFormatError("edge endpoint id out of range")
            if edges[:, 2].min() < 0 or edges[:, 2].max() >= schema.num_edge_types:
                raise SchemaError("edge type id out of range")
            if np.any(edges[:, 0] == edges[:, 1]):
                raise GraphFormatError("self-loops are not permitted")
            lo = np.minimum(edges[:, 0], edges[:, 1])
            hi = np.maximum(edges[:, 0], edges[:, 1])
            edges = np.stack([lo, hi, edges[:, 2]], axis=1)
            # signature check, vectorized over edge types
            for et in range(schema.num_edge_types):
                sel = edges[:, 2] == et
                if not sel.any():
                    continue
                ta, tb = schema.endpoint_type_ids(et)
                sa = node_types[edges[sel, 0]]
                sb = node_types[edges[sel, 1]]
                ok = ((sa == ta) & (sb == tb)) | ((sa == tb) & (sb == ta))
                if not ok.all():
                    bad = np.flatnonzero(sel)[np.flatnonzero(~ok)[0]]
                    raise SchemaError(
                        f"edge ({node_names[edges[bad, 0]]}, {node_names[edges[bad, 1]]}) "
                        f"does not match signature of edge type "
                        f"{schema.edge_types[et][0]!r}"
                    )
            before = edges.shape[0]
            edges = np.unique(edges, axis=0)
            dropped = before - edges.shape[0]
            order = np.lexsort((edges[:, 2], edges[:, 1], edges[:, 0]))
            edges = edges[order]
        return cls(
            schema=schema,
            node_names=list(node_names),
            node_types=node_types,
            edges=edges,
            duplicate_edges_dropped=dropped,
        )

    # -- basic queries ------------------------------------------------

    @property
    def num_nodes(self) -> int:
        return len(self.node_names)

    @property
    def num_edges(self) -> int:
        return int(self.edges.shape[0])

    def node_id(self, name: str) -> int:
        try:
            return self._name_to_id[name]
        except KeyError:
            raise GraphLookupError(f"unknown node {name!r}") from None

    def _check_node(self, node: int):
        if not 0 <= node < self.num_nodes:
            raise GraphLookupError(f"unknown node id {node}")

    def degree(self, node: int) -> int:
        """Number of incident edges (each stored edge counted once)."""
        self._check_node(node)
        return int(self._indptr[node + 1] - self._indptr[node])

    def degrees(self) -> np.ndarray:
        return np.diff(self._indptr)

    def neighbor_slice(self, node: int) -> tuple[np.ndarray, np.ndarray]:
        """(neighbor ids, edge types) of all incident edges, ascending by id."""
        self._check_node(node)
        lo, hi = self._indptr[node], self._indptr[node + 1]
        return self._nbr[lo:hi], self._nbr_etype[lo:hi]

    def typed_neighbors(self, node: int, neighbor_type: int) -> np.ndarray:
        """Distinct neighbors of the given node type, ascending id order."""
        if not 0 <= neighbor_type < self.schema.num_node_types:
            raise GraphLookupError(f"unknown node type id {neighbor_type}")
        nbr, _ = self.neighbor_slice(node)
        return np.unique(nbr[self.node_types[nbr] == neighbor_type])

    def neighbors_via(self, node: int, edge_type: int, neighbor_type: int) -> np.ndarray:
        """Distinct neighbors reachable over one edge type, filtered by node type."""
        nbr, et = self.neighbor_slice(node)
        sel = (et == edge_type) & (self.node_types[nbr] == neighbor_type)
        return np.unique(nbr[sel])

    def neighbor_type_counts(self, node: int, exclude: np.ndarray | None = None) -> np.ndarray:
        """Distinct-neighbor counts per node type, optionally masking out nodes.

        exclude is a boolean array over node ids; masked nodes are not counted.
        """
        nbr, _ = self.neighbor_slice(node)
        nbr = np.unique(nbr)
        if exclude is not None:
            nbr = nbr[~exclude[nbr]]
        return np.bincount(self.node_types[nbr], minlength=self.schema.num_node_types)

    # -- distributions ------------------------------------------------

    def node_type_counts(self) -> np.ndarray:
        return np.bincount(self.node_types, minlength=self.schema.num_node_types)

    def edge_type_counts(self) -> np.ndarray:
        return np.bincount(self.edges[:, 2], minlength=self.schema.num_edge_types)

    def node_type_distribution(self) -> np.ndarray:
        """Fraction of nodes per type; entries sum to 1."""
        if self.num_nodes == 0:
            from .errors import MetricDomainError

            raise MetricDomainError("node type distribution of an empty graph")
        return self.node_type_counts() / self.num_nodes

    def edge_type_distribution(self) -> np.ndarray:
        if self.num_edges == 0:
            from .errors import MetricDomainError

            raise MetricDomainError("edge type distribution of an edgeless graph")
        return self.edge_type_counts() / self.num_edges

    # -- subgraphs ----------------------------------------------------

    def induced_edge_rows(self, keep_mask: np.ndarray) -> np.ndarray:
        """Rows of self.edges with both endpoints inside the mask."""
        sel = keep_mask[self.edges[:, 0]] & keep_mask[self.edges[:, 1]]
        return self.edges[sel]

    def keep_mask(self, keep) -> np.ndarray:
        keep = np.asarray(sorted(set(int(v) for v in keep)), dtype=np.int64)
        if keep.size and (keep.min() < 0 or keep.max() >= self.num_nodes):
            raise GraphLookupError("keep set references unknown node id")
        mask = np.zeros(self.num_nodes, dtype=bool)
        mask[keep] = True
        return mask

    def induced_subgraph(self, keep) -> "HeteroGraph":
        """Subgraph on the kept nodes with every original edge among them.

        Node ids are renumbered densely in ascending original-id order;
        names and types are preserved.
        """
        mask = self.keep_mask(keep)
        kept = np.flatnonzero(mask)
        remap = np.full(self.num_nodes, -1, dtype=np.int64)
        remap[kept] = np.arange(kept.size)
        rows = self.induced_edge_rows(mask)
        new_edges = rows.copy()
        if rows.shape[0]:
            new_edges[:, 0] = remap[rows[:, 0]]
            new_edges[:, 1] = remap[rows[:, 1]]
        return HeteroGraph(
            schema=self.schema,
            node_names=[self.node_names[i] for i in kept],
            node_types=self.node_types[kept],
            edges=new_edges,
        )

    def same_structure(self, other: "HeteroGraph") -> bool:
        """True when names, types and canonical edge lists coincide."""
        return (
            self.schema == other.schema
            and self.node_names == other.node_names
            and bool(np.array_equal(self.node_types, other.node_types))
            and bool(np.array_equal(self.edges, other.edges))
        )
