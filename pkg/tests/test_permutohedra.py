import math

import pytest
from hypothesis import given, strategies as st
from sympy.functions.combinatorial.numbers import stirling

from cosimp import coface_graphs as cg
from cosimp import permutohedra as pm


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_face_counts(k):
    counts = pm.build_permutohedron(k).face_counts()
    for r in range(1, k + 2):
        assert counts[r] == math.factorial(r) * int(stirling(k + 1, r))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_cayley_graph_shape(k):
    c = pm.cayley_graph(k)
    assert len(c.vertices) == math.factorial(k + 1)
    assert len(c.edges) == k * math.factorial(k + 1) // 2


@pytest.mark.parametrize("s,k", [(1, 1), (1, 2), (1, 3), (1, 4), (2, 3), (3, 2)])
def test_phi_is_isomorphism_onto_cayley_graph(s, k):
    g = cg.build_graph(s, k)
    cay = pm.cayley_graph(k).adjacency()
    for cid in range(len(g.components)):
        phi = pm.phi_map(g, cid)
        assert phi.path_independent and phi.edges_ok
        assert pm.is_graph_isomorphism(pm.component_adjacency(g, cid), cay, phi.mapping)


def test_phi_sends_out_vertex_to_identity():
    g = cg.build_graph(1, 3)
    cid = g.component[(0, 2, 3, 4)]
    assert pm.phi_map(g, cid).mapping[(0, 2, 3, 4)] == (1, 2, 3, 4)


def test_gphi12_isomorphic_to_component_of_g13():
    a = pm.graph_adjacency(cg.build_graph(1, 2, enhanced=True))
    b = pm.component_adjacency(cg.build_graph(1, 3), 0)
    res = pm.check_graph_isomorphism(a, b)
    assert res.isomorphic and pm.is_graph_isomorphism(a, b, res.mapping)


def test_non_isomorphic_graphs_are_refuted():
    res = pm.check_graph_isomorphism(pm.cycle_adjacency(6), pm.cayley_graph(2).adjacency())
    assert res.isomorphic
    res = pm.check_graph_isomorphism(pm.cycle_adjacency(8), pm.cayley_graph(2).adjacency())
    assert not res.isomorphic and "vertex counts" in res.reason
    two_triangles = {i: {(i + 1) % 3 + 3 * (i // 3), (i + 2) % 3 + 3 * (i // 3)} for i in range(6)}
    assert not pm.check_graph_isomorphism(two_triangles, pm.cycle_adjacency(6)).isomorphic


perms = st.integers(1, 5).flatmap(lambda n: st.permutations(list(range(1, n + 1)))).map(tuple)


@given(perms)
def test_inverse_and_compose(sigma):
    n = len(sigma)
    assert pm.compose(sigma, pm.inverse(sigma)) == pm.identity(n)


@given(perms, st.data())
def test_faces_round_trip(sigma, data):
    n = len(sigma)
    cuts = sorted(data.draw(st.sets(st.integers(1, n - 1), max_size=n - 1))) if n > 1 else []
    sizes = tuple(b - a for a, b in zip([0] + cuts, cuts + [n]))
    face = pm.pair_to_face(sigma, sizes)
    assert pm.vertex_on_face(sigma, face)
    tau, blocks = pm.face_to_pair(face)
    assert blocks == sizes and pm.is_shuffle(tau, blocks) and pm.pair_to_face(tau, blocks) == face


def test_edges_are_two_element_faces():
    for sigma in pm.cayley_graph(3).vertices:
        for i in range(1, 4):
            face = pm.pair_to_face(sigma, pm.transposition_blocks(4, i))
            assert set(pm.face_vertices(face)) == {sigma, pm.times_adjacent(sigma, i)}


def test_cycle_notation():
    assert pm.parse_cycles(3, "(1 2 3)") == pm.from_cycles(3, [(1, 2, 3)])
