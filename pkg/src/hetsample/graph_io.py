"""TSV / JSON file formats for graphs.

nodes file: one `<node_id>\\t<type_label>` record per line.
edges file: `<src_id>\\t<dst_id>\\t<edge_type_label>` per line.
Lines starting with `#` and blank lines are ignored in both.
Schema is a JSON document, see SchemaGraph.to_dict.

Serialization is canonical (nodes ascending by id, edges ascending by
(src, dst, type) with the lower id first) so golden files are bit-exact.
"""

from __future__ import annotations

import json
import logging
from typing import IO, Iterable

import numpy as np

from .errors import (
    DataMismatchError,
    DuplicateNodeError,
    EdgeReferenceError,
    GraphFormatError,
    SchemaError,
)
from .graph import HeteroGraph, SchemaGraph

log = logging.getLogger(__name__)


def _lines(doc: str | IO[str] | Iterable[str]) -> Iterable[tuple[int, str]]:
    if isinstance(doc, str):
        raw = doc.splitlines()
    else:
        raw = doc
    for lineno, line in enumerate(raw, start=1):
        line = line.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        yield lineno, line


def load_schema(doc: str | IO[str] | dict) -> SchemaGraph:
    if isinstance(doc, dict):
        return SchemaGraph.from_dict(doc)
    text = doc if isinstance(doc, str) else doc.read()
    try:
        parsed = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"schema is not valid JSON: {exc}") from None
    return SchemaGraph.from_dict(parsed)


def dump_schema(schema: SchemaGraph) -> str:
    return json.dumps(schema.to_dict(), indent=2, sort_keys=False) + "\n"


def load_graph(
    nodes_doc: str | IO[str],
    edges_doc: str | IO[str],
    schema: SchemaGraph,
) -> HeteroGraph:
    """Parse TSV node and edge documents into a HeteroGraph.

    Raises SchemaError / EdgeReferenceError / DuplicateNodeError /
    GraphFormatError with the offending 1-based line number.
    """
    names: list[str] = []
    type_ids: list[int] = []
    seen: dict[str, int] = {}
    type_by_label = {t: i for i, t in enumerate(schema.node_types)}
    for lineno, line in _lines(nodes_doc):
        parts = line.split("\t")
        if len(parts) != 2:
            raise GraphFormatError(f"nodes line {lineno}: expected 2 fields, got {len(parts)}")
        name, label = parts
        if label not in type_by_label:
            raise SchemaError(f"nodes line {lineno}: unknown type label {label!r}")
        if name in seen:
            raise DuplicateNodeError(f"nodes line {lineno}: duplicate node id {name!r}")
        seen[name] = len(names)
        names.append(name)
        type_ids.append(type_by_label[label])

    etype_by_label = {e[0]: i for i, e in enumerate(schema.edge_types)}
    triples: list[tuple[int, int, int]] = []
    for lineno, line in _lines(edges_doc):
        parts = line.split("\t")
        if len(parts) != 3:
            raise GraphFormatError(f"edges line {lineno}: expected 3 fields, got {len(parts)}")
        src, dst, elabel = parts
        if src not in seen:
            raise EdgeReferenceError(f"edges line {lineno}: unknown node {src!r}")
        if dst not in seen:
            raise EdgeReferenceError(f"edges line {lineno}: unknown node {dst!r}")
        if elabel not in etype_by_label:
            raise SchemaError(f"edges line {lineno}: unknown edge type label {elabel!r}")
        if src == dst:
            raise GraphFormatError(f"edges line {lineno}: self-loop on {src!r}")
        triples.append((seen[src], seen[dst], etype_by_label[elabel]))

    try:
        graph = HeteroGraph.build(schema, names, type_ids, triples)
    except SchemaError as exc:
        raise SchemaError(f"edges: {exc}") from None
    if graph.duplicate_edges_dropped:
        log.warning("dropped %d duplicate edges", graph.duplicate_edges_dropped)
    return graph


def serialize_nodes(graph: HeteroGraph) -> str:
    out = []
    for i, name in enumerate(graph.node_names):
        out.append(f"{name}\t{graph.schema.node_types[graph.node_types[i]]}")
    return "\n".join(out) + ("\n" if out else "")


def serialize_edges(graph: HeteroGraph) -> str:
    out = []
    labels = [e[0] for e in graph.schema.edge_types]
    for src, dst, et in graph.edges:
        out.append(f"{graph.node_names[src]}\t{graph.node_names[dst]}\t{labels[et]}")
    return "\n".join(out) + ("\n" if out else "")


def sample_to_tsv(graph: HeteroGraph, nodes, edge_rows) -> tuple[str, str]:
    """Canonical TSV pair for a sample of the given graph.

    nodes: iterable of node ids; edge_rows: (m, 3) rows referencing original
    ids.  Nodes are written ascending by id, edges ascending by
    (src, dst, type), matching the whole-graph serializers byte for byte.
    """
    type_labels = graph.schema.node_types
    edge_labels = [e[0] for e in graph.schema.edge_types]
    node_lines = [
        f"{graph.node_names[v]}\t{type_labels[graph.node_types[v]]}"
        for v in sorted(int(v) for v in nodes)
    ]
    rows = sorted((int(s), int(d), int(t)) for s, d, t in edge_rows)
    edge_lines = [
        f"{graph.node_names[s]}\t{graph.node_names[d]}\t{edge_labels[t]}"
        for s, d, t in rows
    ]
    nodes_tsv = "\n".join(node_lines) + ("\n" if node_lines else "")
    edges_tsv = "\n".join(edge_lines) + ("\n" if edge_lines else "")
    return nodes_tsv, edges_tsv


def sample_from_tsv(graph: HeteroGraph, nodes_doc: str | IO[str], edges_doc: str | IO[str]):
    """Parse a sample TSV pair back against its original graph.

    Every node must exist in the graph with the same type, and every edge
    must be an edge of the graph; anything else raises DataMismatchError.
    Returns a SampleResult with provenance tag "external".
    """
    from .sampler import SampleResult

    type_by_label = {t: i for i, t in enumerate(graph.schema.node_types)}
    etype_by_label = {e[0]: i for i, e in enumerate(graph.schema.edge_types)}
    node_ids: list[int] = []
    for lineno, line in _lines(nodes_doc):
        parts = line.split("\t")
        if len(parts) != 2:
            raise GraphFormatError(f"sample nodes line {lineno}: expected 2 fields")
        name, label = parts
        if name not in graph._name_to_id:
            raise DataMismatchError(f"sample nodes line {lineno}: node {name!r} not in original graph")
        v = graph.node_id(name)
        if label not in type_by_label or type_by_label[label] != graph.node_types[v]:
            raise DataMismatchError(f"sample nodes line {lineno}: type of {name!r} differs from original")
        node_ids.append(v)
    if len(set(node_ids)) != len(node_ids):
        raise DataMismatchError("sample nodes contain duplicates")

    known = {(int(s), int(d), int(t)) for s, d, t in graph.edges}
    rows: list[tuple[int, int, int]] = []
    for lineno, line in _lines(edges_doc):
        parts = line.split("\t")
        if len(parts) != 3:
            raise GraphFormatError(f"sample edges line {lineno}: expected 3 fields")
        src, dst, elabel = parts
        for name in (src, dst):
            if name not in graph._name_to_id:
                raise DataMismatchError(f"sample edges line {lineno}: node {name!r} not in original graph")
        if elabel not in etype_by_label:
            raise DataMismatchError(f"sample edges line {lineno}: edge type {elabel!r} not in schema")
        s, d = graph.node_id(src), graph.node_id(dst)
        row = (min(s, d), max(s, d), etype_by_label[elabel])
        if row not in known:
            raise DataMismatchError(f"sample edges line {lineno}: edge not present in original graph")
        rows.append(row)

    node_arr = np.asarray(sorted(set(node_ids)), dtype=np.int64)
    in_sample = set(int(v) for v in node_arr)
    for s, d, _ in rows:
        if s not in in_sample or d not in in_sample:
            raise DataMismatchError("sample edge endpoint missing from sample nodes")
    edge_arr = np.asarray(sorted(set(rows)), dtype=np.int64).reshape(-1, 3)
    return SampleResult(
        nodes=node_arr,
        edges=edge_arr,
        provenance={int(v): "external" for v in node_arr},
        phase_stats={"nodes": int(node_arr.size)},
        target_ratio=node_arr.size / graph.num_nodes if graph.num_nodes else 0.0,
        achieved_ratio=node_arr.size / graph.num_nodes if graph.num_nodes else 0.0,
        method="external",
        seed=0,
    )


def read_graph_files(nodes_path: str, edges_path: str, schema_path: str) -> HeteroGraph:
    with open(schema_path, encoding="utf-8") as fh:
        schema = load_schema(fh)
    with open(nodes_path, encoding="utf-8") as nf, open(edges_path, encoding="utf-8") as ef:
        return load_graph(nf, ef, schema)


def write_graph_files(graph: HeteroGraph, nodes_path: str, edges_path: str, schema_path: str | None = None):
    with open(nodes_path, "w", encoding="utf-8") as fh:
        fh.write(serialize_nodes(graph))
    with open(edges_path, "w", encoding="utf-8") as fh:
        fh.write(serialize_edges(graph))
    if schema_path is not None:
        with open(schema_path, "w", encoding="utf-8") as fh:
            fh.write(dump_schema(graph.schema))
