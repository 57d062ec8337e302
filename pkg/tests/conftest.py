import numpy as np
import pytest

from hetsample import (
    HeteroGraph,
    ImportanceConfig,
    SchemaGraph,
    SyntheticParams,
    generate_synthetic,
    parse_schema,
)


@pytest.fixture
def apc_schema():
    """Author / paper / conference style schema with two edge types."""
    return SchemaGraph(
        ("A", "P", "C"),
        (("AP", "A", "P"), ("PC", "P", "C")),
    )


@pytest.fixture
def tiny_graph(apc_schema):
    """a1, a2 -- p1 -- c1."""
    return HeteroGraph.build(
        apc_schema,
        ["a1", "a2", "p1", "c1"],
        [0, 0, 1, 2],
        [(0, 2, 0), (1, 2, 0), (2, 3, 1)],
    )


@pytest.fixture
def two_author_graph(apc_schema):
    """Just the edges (a1, p1), (a2, p1); the canonical APA counting fixture."""
    return HeteroGraph.build(
        apc_schema,
        ["a1", "a2", "p1"],
        [0, 0, 1],
        [(0, 2, 0), (1, 2, 0)],
    )


def random_typed_graph(seed: int, max_nodes: int = 50) -> HeteroGraph:
    """Seeded random typed graph for property tests (2-3 types, sparse)."""
    rng = np.random.default_rng(seed)
    num_types = int(rng.integers(2, 4))
    type_labels = tuple("TUV"[:num_types])
    pairs = [(i, j) for i in range(num_types) for j in range(i, num_types)]
    rng.shuffle(pairs)
    pairs = pairs[: int(rng.integers(1, len(pairs) + 1))]
    edge_types = tuple(
        (f"{type_labels[a]}{type_labels[b]}", type_labels[a], type_labels[b])
        for a, b in pairs
    )
    schema = SchemaGraph(type_labels, edge_types)

    n = int(rng.integers(8, max_nodes + 1))
    node_types = rng.integers(0, num_types, size=n)
    names = [f"n{i}" for i in range(n)]
    triples = set()
    target = int(rng.integers(n, 2 * n))
    for _ in range(4 * target):
        if len(triples) >= target:
            break
        et = int(rng.integers(0, len(edge_types)))
        a, b = schema.endpoint_type_ids(et)
        cand_a = np.flatnonzero(node_types == a)
        cand_b = np.flatnonzero(node_types == b)
        if cand_a.size == 0 or cand_b.size == 0:
            continue
        u = int(cand_a[rng.integers(cand_a.size)])
        v = int(cand_b[rng.integers(cand_b.size)])
        if u == v:
            continue
        triples.add((min(u, v), max(u, v), et))
    return HeteroGraph.build(schema, names, node_types, sorted(triples))


@pytest.fixture
def three_type_synthetic():
    """Mid-sized generated fixture shared by sampler and metric tests."""
    params = SyntheticParams(
        node_counts={"A": 120, "B": 60, "C": 20},
        edge_counts={
            "AB": ("A", "B", 240),
            "AC": ("A", "C", 80),
            "BC": ("B", "C", 50),
        },
        skew=0.8,
        seed=9,
    )
    return generate_synthetic(params)


def importance_for(graph, meta_paths=None, beta=None) -> ImportanceConfig:
    """Uniform-ish importance config valid for any schema (test helper)."""
    m = graph.schema.num_node_types
    alpha = np.full(m, 1.0 / m)
    pair_count = m * m
    W = np.full((m, m), 1.0 / pair_count)
    if meta_paths is None:
        first = graph.schema.edge_types[0]
        meta_paths = [f"{first[1]}-[{first[0]}]-{first[2]}-[{first[0]}]-{first[1]}"]
    paths = [parse_schema(t, graph.schema) for t in meta_paths]
    if beta is None:
        b = np.full(len(paths), 1.0 / len(paths))
    else:
        b = np.asarray(beta, dtype=np.float64)
    return ImportanceConfig(alpha=alpha, W=W, paths=paths, beta=b)
