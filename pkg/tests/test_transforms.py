from fractions import Fraction

import pytest

from shapes import V, dumbbell, loop1, theta, v0_two_loops, v1_loop, v1_v0loop, v1_v1
from sgqft.graphs import StableGraph, enumerate_connected, enumerate_labelled, vertex_graph
from sgqft.operators import GraphSum
from sgqft.poly import Poly, eps
from sgqft.realization import labelled_types, stable_types
from sgqft.transforms import (
    dual_abstract_F,
    dual_abstract_F_labelled,
    dual_operator_check,
    duality,
    eps_param,
    graph_transform,
    vertex_expansion,
)

S = GraphSum
F = Fraction
e1, e2 = Poly.var(eps(1)), Poly.var(eps(2))
TYPES4 = stable_types(4)


def test_vertex_expansion_examples():
    e = Poly.var(eps(1))
    assert vertex_expansion(0, 3, e) == S.single(V(0, 3))
    assert vertex_expansion(1, 1, e) == S([(V(1, 1), 1), (loop1(), e / 2)])
    bridge = StableGraph([0, 0], [(0, 1)], [0, 0, 1, 1])
    assert vertex_expansion(0, 4, e) == S([(V(0, 4), 1), (bridge, 3 * e)])


def test_transform_at_zero_is_identity():
    for G in enumerate_connected(2, 0) + enumerate_connected(1, 2):
        assert graph_transform(G, 0) == S.single(G)


def test_third_worked_example():
    # genus-1 vertex joined to a genus-0 vertex carrying the two legs
    G = StableGraph([1, 0], [(0, 1)], [1, 1])
    expected = S([(G, -1), (StableGraph([0, 0], [(0, 0), (0, 1)], [1, 1]), F(-1, 2))])
    assert duality(G) == expected
    assert graph_transform(G, 1) == expected * -1


def test_genus2_dotted_expansions():
    d = duality
    assert d(V(2)) == S([(V(2), 1), (v1_loop(), F(1, 2)), (v1_v1(), F(1, 2)),
                         (v0_two_loops(), F(1, 8)), (v1_v0loop(), F(1, 2)),
                         (dumbbell(), F(1, 8)), (theta(), F(1, 12))])
    assert d(v1_loop()) == S([(v1_loop(), -1), (v0_two_loops(), F(-1, 2)), (v1_v0loop(), -1),
                              (dumbbell(), F(-1, 2)), (theta(), F(-1, 2))])
    assert d(v1_v1()) == S([(v1_v1(), -1), (v1_v0loop(), -1), (dumbbell(), F(-1, 4))])
    assert d(v1_v0loop()) == S([(v1_v0loop(), 1), (dumbbell(), F(1, 2))])
    assert d(v0_two_loops()) == S([(v0_two_loops(), 1), (dumbbell(), 1), (theta(), 2)])
    assert d(dumbbell()) == S.single(dumbbell(), -1)
    assert d(theta()) == S.single(theta(), -1)


@pytest.mark.parametrize("t", TYPES4)
def test_involution(t):
    for G in enumerate_connected(*t):
        assert duality(duality(G)) == S.single(G)


@pytest.mark.parametrize("t", TYPES4)
def test_dual_free_energy_collapses(t):
    g, n = t
    nf = 1
    for k in range(2, n + 1):
        nf *= k
    assert dual_abstract_F(g, n) == S.single(vertex_graph(g, n), F(1, nf))


@pytest.mark.parametrize("t", labelled_types(2, 2))
def test_labelled_dual_free_energy(t):
    g, l = t
    fact = 1
    for x in l:
        for k in range(2, x + 1):
            fact *= k
    labels = [j + 1 for j in range(2) for _ in range(l[j])]
    assert dual_abstract_F_labelled(g, l) == S.single(vertex_graph(g, labels=labels), F(1, fact))


def test_labelled_involution():
    for g, l in labelled_types(2, 2):
        for G in enumerate_labelled(g, l):
            assert duality(duality(G, 2), 2) == S.single(G)


@pytest.mark.parametrize("t", stable_types(3))
def test_addition_law(t):
    Vx = vertex_graph(*t)
    a = graph_transform(graph_transform(Vx, e2), e1)
    b = graph_transform(graph_transform(Vx, e1), e2)
    assert a == b == vertex_expansion(*t, e1 + e2)


def test_addition_law_on_general_graphs():
    for G in [dumbbell(), theta(), v1_v0loop(), StableGraph([1, 0], [(0, 1)], [1, 1])]:
        assert graph_transform(graph_transform(G, e2), e1) == graph_transform(G, e1 + e2)
        inverse = graph_transform(graph_transform(G, e1), -e1)
        assert inverse == S.single(G)


@pytest.mark.parametrize("t", stable_types(3))
def test_triangularity(t):
    for G in enumerate_connected(*t):
        phi = graph_transform(G, e1)
        for H, c in phi.items():
            assert H.num_edges >= G.num_edges
            if H.num_edges == G.num_edges:
                assert S.single(H) == S.single(G) and c == 1
        assert phi.coefficient(G) == 1
        assert duality(G).coefficient(G) == (-1) ** G.num_edges


@pytest.mark.parametrize("G", [V(1, 1), V(0, 3), dumbbell(), loop1(), theta(),
                               StableGraph([1, 0], [(0, 1)], [1, 1])])
def test_dual_operators(G):
    assert dual_operator_check(G)


def test_eps_param():
    assert eps_param("1/2") == F(1, 2)
    assert eps_param("e1+e2") == e1 + e2
