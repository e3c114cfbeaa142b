import math

import pytest
from hypothesis import given, settings, strategies as st

from cosimp import coface_graphs as cg


def test_rank_examples():
    assert cg.rank((1, 2, 3, 2, 4)) == 3
    assert cg.rank((1, 1, 2, 3)) == 2


@pytest.mark.parametrize("s,k", [(s, k) for s in (1, 2, 3) for k in (1, 2, 3)])
def test_counts(s, k):
    g = cg.build_graph(s, k)
    assert len(g.vertices) == math.prod(range(s + 1, s + k + 2))
    assert len(g.coherer_edges) * 2 == k * len(g.vertices)
    assert len(g.components) == math.comb(s + k + 1, k + 1)


@pytest.mark.parametrize("s,k", [(1, 2), (2, 3), (3, 2)])
def test_regular_of_degree_k(s, k):
    g = cg.build_graph(s, k)
    assert all(len(g.out[v]) + len(g.inc[v]) == k for v in g.vertices)


def test_g12_has_four_hexagons():
    g = cg.build_graph(1, 2)
    assert (len(g.vertices), len(g.coherer_edges), len(g.components)) == (24, 24, 4)
    assert all(len(c) == 6 for c in g.components)


def test_component_of_0234_has_in_vertex_1110():
    g = cg.build_graph(1, 3)
    c = cg.classify_vertices(g)[g.component[(0, 2, 3, 4)]]
    assert c["out"] == (0, 2, 3, 4)
    assert c["in"] == (1, 1, 1, 0)


def test_out_vertices_are_increasing_tuples():
    g = cg.build_graph(2, 2)
    outs = sorted(c["out"] for c in cg.classify_vertices(g).values())
    assert outs == sorted(v for v in g.vertices if all(a < b for a, b in zip(v, v[1:])))


def test_coherer_rewrites_adjacent_pair():
    e = cg.coherer_at(1, (0, 2, 3), 0)
    assert e.target == (1, 0, 3) and e.laterality == 1 and e.indices == (0, 2)
    assert cg.coherer_at(1, (1, 0, 3), 0) is None


def test_phi_edges_turn_leading_one_into_zero():
    g = cg.build_graph(1, 2, enhanced=True)
    assert all(e.source[0] == 1 and e.target == (0,) + e.source[1:] for e in g.phi_edges)
    assert len(g.phi_edges) == len(g.vertices) // 2


@pytest.mark.parametrize("k", [2, 3, 4])
def test_enhanced_graph_connected(k):
    assert len(cg.build_graph(1, k, enhanced=True).components) == 1


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_component_point_is_constant_on_components(s, k, data):
    g = cg.build_graph(s, k)
    e = data.draw(st.sampled_from(g.coherer_edges))
    assert cg.component_point(s, e.source) == cg.component_point(s, e.target)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 2), st.integers(1, 4), st.data())
def test_directed_paths_have_fixed_length(s, k, data):
    g = cg.build_graph(s, k)
    cid = data.draw(st.integers(0, len(g.components) - 1))
    c = cg.classify_vertices(g)[cid]
    paths = cg.directed_paths(g, c["out"], c["in"], limit=50)
    assert paths and all(len(p) == k * (k + 1) // 2 for p in paths)
    assert cg.height(c["out"]) - cg.height(c["in"]) == k * (k + 1) // 2


def test_connect_within_component():
    g = cg.build_graph(1, 3)
    path = cg.connect(g, (0, 2, 3, 4), (1, 1, 1, 0))
    assert path[0].source == (0, 2, 3, 4) and path[-1].target == (1, 1, 1, 0)
    assert cg.connect(g, (0, 2, 3, 4), (0, 1, 2, 3)) is None


def test_budget_and_bad_arguments():
    with pytest.raises(cg.BudgetError):
        cg.build_graph(3, 4, budget=100)
    with pytest.raises(ValueError):
        cg.build_graph(2, 2, enhanced=True)
    with pytest.raises(ValueError):
        cg.check_tuple(1, (2, 0))


def test_exports_are_stable():
    g1, g2 = cg.build_graph(1, 2), cg.build_graph(1, 2)
    assert g1.to_dot() == g2.to_dot()
    assert cg.dumps(g1) == cg.dumps(g2)
    d = g1.to_json()
    assert len(d["vertices"]) == 24 and len(d["components"]) == 4
