from fractions import Fraction

import pytest

from shapes import V, dumbbell, loop1, theta
from sgqft.graphs import GraphError, StableGraph, disjoint_union
from sgqft.operators import (
    GraphSum,
    abstract_F,
    abstract_F_labelled,
    check_lemma_D,
    check_lemma_D_labelled,
    check_recursion_K,
    check_recursion_K_labelled,
    graphsum_from_json,
    op_D,
    op_gamma,
    op_gamma_i,
    op_K,
    op_K_ij,
    op_partial,
    op_partial_i,
    sum_mul,
)
from sgqft.realization import labelled_types

S = GraphSum


def test_sum_algebra():
    x = abstract_F(1, 1)
    assert x * 0 == 0
    sq = sum_mul(x, x)
    assert sq.coefficient(disjoint_union(loop1(), loop1())) == Fraction(1, 4)
    brute = S()
    for a, ca in x.items():
        for b, cb in x.items():
            brute.add_term(disjoint_union(a, b), ca * cb)
    assert sq == brute
    y = abstract_F(0, 3)
    assert sum_mul(x, y) == sum_mul(y, x)
    assert graphsum_from_json(sq.to_json()) == sq


def test_K_examples():
    assert op_K(V(2)) == 0
    cut_loop = StableGraph([0, 0], [(0, 1), (1, 1)], [0, 0])
    expected = S([(cut_loop, 2), (disjoint_union(loop1(), loop1()), 1)])
    assert op_K(dumbbell()) == expected
    two_edges = StableGraph([0, 0], [(0, 1), (0, 1)], [0, 1])
    assert op_K(theta()) == S([(two_edges, 3)])


def test_partial_examples():
    assert op_partial(V(0, 3)) == S([(V(0, 4), 1)])
    leg_on_vertex = StableGraph([0, 0], [(0, 0), (1, 1), (0, 1)], [0])
    in_loop = StableGraph([0, 0, 0], [(0, 2), (0, 2), (0, 1), (1, 1)], [2])
    in_bridge = StableGraph([0, 0, 0], [(0, 0), (1, 1), (0, 2), (2, 1)], [2])
    expected = S([(leg_on_vertex, 2), (in_loop, 2), (in_bridge, 1)])
    assert op_partial(dumbbell()) == expected
    # before merging, the total mass is |E| + |V|
    for G in [dumbbell(), theta(), loop1()]:
        assert sum(op_partial(G).coeffs.values()) == G.num_edges + G.num_vertices


def test_gamma_examples():
    assert op_gamma(V(2)) == 0
    assert op_gamma(dumbbell()) == 0
    G = StableGraph([0], [(0, 0)], [0, 0])
    two_vertex = StableGraph([0, 0], [(0, 0), (0, 1)], [0, 1, 1])
    assert op_gamma(G) == S([(two_vertex, 2)])


def test_D_lemma_example():
    assert op_D(abstract_F(1, 1)) == abstract_F(1, 2) * 2


def test_free_energy_coefficients():
    assert abstract_F(0, 3) == S([(V(0, 3), Fraction(1, 6))])
    assert sorted(abstract_F(2, 0).coeffs.values()) == sorted(
        Fraction(1, d) for d in (1, 2, 2, 8, 2, 8, 12)
    )
    assert sorted(abstract_F(1, 2).coeffs.values()) == sorted(
        Fraction(1, d) for d in (2, 4, 2, 4, 4)
    )


def test_explicit_K_identity():
    rhs = abstract_F(1, 2) + sum_mul(abstract_F(1, 1), abstract_F(1, 1)) * Fraction(1, 2)
    assert op_K(abstract_F(2, 0)) == rhs


@pytest.mark.parametrize("g,n", [(0, 3), (0, 4), (0, 5), (0, 6), (1, 1), (1, 2), (1, 3), (1, 4),
                                 (2, 0), (2, 1), (2, 2), (3, 0)])
def test_recursions(g, n):
    assert check_lemma_D(g, n)
    assert check_recursion_K(g, n)


def test_linearity_and_leibniz():
    a, b = dumbbell(), loop1()
    x = S([(a, 2), (b, Fraction(1, 3))])
    for op in (op_K, op_partial, op_gamma, op_D):
        assert op(x) == op(a) * 2 + op(b) * Fraction(1, 3)
    A, B = S.single(a), S.single(theta())
    assert op_K(sum_mul(A, B)) == sum_mul(op_K(A), B) + sum_mul(A, op_K(B))


def _labelled_dumbbell():
    # loops labelled (1,1) at both vertices, bridge labelled 1 at A and 2 at B
    return StableGraph([0, 0], [(0, 1, 0, 1), (1, 1, 1, 1), (0, 1, 1, 2)])


def test_K_ij_examples():
    G = _labelled_dumbbell()
    cut_a = StableGraph([0, 0], [(1, 1, 1, 1), (0, 1, 1, 2)], [(0, 1, ""), (0, 1, "")])
    cut_b = StableGraph([0, 0], [(0, 1, 0, 1), (0, 1, 1, 2)], [(1, 1, ""), (1, 1, "")])
    assert op_K_ij(G, 1, 1, 2) == S([(cut_a, 1), (cut_b, 1)])
    la = StableGraph([0], [(0, 1, 0, 1)], [(0, 1, "")])
    lb = StableGraph([0], [(0, 1, 0, 1)], [(0, 2, "")])
    assert op_K_ij(G, 1, 2, 2) == S([(disjoint_union(la, lb), 1)])
    assert op_K_ij(G, 2, 2, 2) == 0
    with pytest.raises(GraphError):
        op_K_ij(G, 1, 3, 2)


def test_partial_1_example():
    X = StableGraph([0], [(0, 2, 0, 2)], [(0, 1, "")])
    extra_leg = StableGraph([0], [(0, 2, 0, 2)], [(0, 1, ""), (0, 1, "")])

    def inserted(c, d):
        return StableGraph([0, 0], [(0, 2, 1, c), (1, d, 0, 2)], [(0, 1, ""), (1, 1, "")])

    expected = S([(extra_leg, 1), (inserted(1, 1), 1), (inserted(2, 2), 1), (inserted(1, 2), 2)])
    assert op_partial_i(X, 1, 2) == expected


def test_gamma_1_example():
    X = StableGraph([0], [(0, 2, 0, 2)], [(0, 1, "")])
    terms = []
    for c in (1, 2):
        for d in (1, 2):
            terms.append((StableGraph([0, 0], [(0, 2, 0, 2), (0, c, 1, d)],
                                      [(1, 1, ""), (1, 1, "")]), 1))
    result = op_gamma_i(X, 1, 2)
    assert result == S(terms) and len(result) == 4


@pytest.mark.parametrize("g,l", labelled_types(2, 2))
def test_labelled_recursions(g, l):
    assert all(check_lemma_D_labelled(g, l, i) for i in (1, 2))
    assert all(check_recursion_K_labelled(g, l, i, j) for i in (1, 2) for j in (1, 2))


def test_labelled_free_energy_at_N1_matches_unlabelled():
    a = abstract_F_labelled(2, (0,))
    assert sorted(a.coeffs.values()) == sorted(abstract_F(2, 0).coeffs.values())
