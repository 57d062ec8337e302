import numpy as np
import pytest

from hetsample import ParameterError, SyntheticParams, generate_synthetic
from hetsample.graph_io import serialize_edges, serialize_nodes


def params(**over):
    base = dict(
        node_counts={"A": 100, "B": 50},
        edge_counts={"AB": ("A", "B", 200)},
        skew=0.0,
        seed=7,
    )
    base.update(over)
    return SyntheticParams(**base)


def test_same_seed_identical_serialization():
    g1 = generate_synthetic(params())
    g2 = generate_synthetic(params())
    assert serialize_nodes(g1) == serialize_nodes(g2)
    assert serialize_edges(g1) == serialize_edges(g2)


def test_different_seed_differs():
    g1 = generate_synthetic(params(seed=1))
    g2 = generate_synthetic(params(seed=2))
    assert serialize_edges(g1) != serialize_edges(g2)


def test_node_counts_exact():
    g = generate_synthetic(params())
    assert g.num_nodes == 150
    assert list(g.node_type_counts()) == [100, 50]


def test_edge_count_exact_when_enumerable():
    g = generate_synthetic(params())
    assert g.num_edges == 200


def test_edge_count_within_one_percent_large():
    p = SyntheticParams(
        node_counts={"A": 3000, "B": 3000},
        edge_counts={"AB": ("A", "B", 12000)},
        skew=0.5,
        seed=3,
    )
    g = generate_synthetic(p)
    assert abs(g.num_edges - 12000) <= 120


def test_skew_produces_hub():
    p = SyntheticParams(
        node_counts={"A": 500, "B": 500},
        edge_counts={"AB": ("A", "B", 1500)},
        skew=1.0,
        seed=5,
    )
    g = generate_synthetic(p)
    degs = g.degrees()
    assert degs.max() > np.median(degs)


def test_same_type_edges():
    p = SyntheticParams(
        node_counts={"A": 40},
        edge_counts={"AA": ("A", "A", 100)},
        skew=0.0,
        seed=11,
    )
    g = generate_synthetic(p)
    assert g.num_edges == 100
    assert np.all(g.edges[:, 0] < g.edges[:, 1])


def test_infeasible_edge_count():
    with pytest.raises(ParameterError, match="capacity"):
        generate_synthetic(params(edge_counts={"AB": ("A", "B", 100 * 50 + 1)}))


def test_invalid_params():
    with pytest.raises(ParameterError):
        params(node_counts={"A": 0})
    with pytest.raises(ParameterError):
        params(skew=-0.5)
    with pytest.raises(ParameterError):
        params(edge_counts={"AB": ("A", "X", 10)})


def test_interleaved_node_order():
    # id-ordered prefixes stay close to the configured type proportions
    p = SyntheticParams(
        node_counts={"A": 70, "B": 20, "C": 10},
        edge_counts={"AB": ("A", "B", 50)},
        seed=1,
    )
    g = generate_synthetic(p)
    prefix = g.node_types[:30]
    counts = np.bincount(prefix, minlength=3)
    assert abs(counts[0] - 21) <= 2
    assert abs(counts[1] - 6) <= 2
    assert abs(counts[2] - 3) <= 2
