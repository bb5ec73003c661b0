"""
Verification suites run by ``sgqft verify``.

Each suite yields ``(name, passed)`` pairs. ``bound`` limits the excess
2g-2+n of the types that are checked.
"""
from __future__ import annotations

from fractions import Fraction

from .graphs import (
    aut_order,
    canonical_form,
    canonicalize,
    enumerate_connected,
    genus,
    validate,
    vertex_graph,
)
from .hae import (
    check_anomaly_equation,
    check_holo_lemma,
    check_independence,
    holo_F,
    is_homogeneous,
    tilde_F,
)
from .operators import (
    GraphSum,
    check_lemma_D,
    check_lemma_D_labelled,
    check_recursion_K,
    check_recursion_K_labelled,
)
from .poly import Poly, eps, kappa, theory
from .realization import (
    check_realized_recursion,
    dual_hat_F,
    labelled_types,
    s_transform,
    s_transform_labelled,
    stable_types,
    symbolic_theory,
    wick_gaussian,
    wick_gaussian_labelled,
)
from .transforms import dual_abstract_F, duality, graph_transform, vertex_expansion

SUITES = ("enumeration", "recursions", "duality", "transforms", "gaussian", "grouplaw", "hae")


def _types(bound):
    return stable_types(bound)


def enumeration(bound):
    counts = {(0, 3): 1, (1, 1): 2, (1, 2): 5, (2, 0): 7}
    for t, c in counts.items():
        yield f"count {t} = {c}", len(enumerate_connected(*t)) == c
    auts = sorted(aut_order(G) for G in enumerate_connected(2, 0))
    yield "aut orders at (2,0)", auts == [1, 2, 2, 2, 8, 8, 12]
    for g, n in _types(bound):
        ok = True
        for G in enumerate_connected(g, n):
            ok &= validate(G) is None and genus(G) == g and G.num_legs == n
            ok &= canonicalize(canonical_form(G))[0] == canonicalize(G)[0]
        yield f"invariants {(g, n)}", ok


def recursions(bound):
    for g, n in _types(bound):
        yield f"lemma D {(g, n)}", check_lemma_D(g, n)
        yield f"K recursion {(g, n)}", check_recursion_K(g, n)
    for g, l in labelled_types(min(bound, 2), 2):
        ok = all(check_lemma_D_labelled(g, l, i) for i in (1, 2))
        ok &= all(check_recursion_K_labelled(g, l, i, j) for i in (1, 2) for j in (1, 2))
        yield f"labelled recursions {(g, l)}", ok


def duality_suite(bound):
    for g, n in _types(bound):
        ok = all(duality(duality(G)) == GraphSum.single(G) for G in enumerate_connected(g, n))
        yield f"involution {(g, n)}", ok
        expected = GraphSum.single(vertex_graph(g, n), Fraction(1, _fact(n)))
        yield f"dual free energy {(g, n)}", dual_abstract_F(g, n) == expected


def _fact(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def transforms(bound):
    e1, e2 = Poly.var(eps(1)), Poly.var(eps(2))
    for g, n in _types(bound):
        V = vertex_graph(g, n)
        lhs = graph_transform(graph_transform(V, e2), e1)
        rhs = graph_transform(graph_transform(V, e1), e2)
        yield f"addition law {(g, n)}", lhs == rhs == vertex_expansion(g, n, e1 + e2)


def gaussian(bound):
    k = Poly.var(kappa())
    T = symbolic_theory(bound)
    W, S = wick_gaussian(T, k, bound), s_transform(T, k, bound)
    for t in S:
        yield f"wick {t}", W[t] == S[t]
    b2 = min(bound, 2)
    T2 = symbolic_theory(b2, 2)
    km = {(i, j): Poly.var(kappa(i, j)) for i, j in ((1, 1), (1, 2), (2, 2))}
    W2, S2 = wick_gaussian_labelled(T2, km, 2, b2), s_transform_labelled(T2, km, 2, b2)
    for t in S2:
        yield f"wick N=2 {t}", W2[t] == S2[t]


def grouplaw(bound):
    k1, k2 = Poly.var(kappa(1, 1)), Poly.var(kappa(2, 2))
    T = symbolic_theory(bound)
    twice = s_transform(s_transform(T, k1, bound), k2, bound)
    once = s_transform(T, k1 + k2, bound)
    back = s_transform(s_transform(T, k1, bound), -k1, bound)
    for t in T:
        yield f"composition {t}", twice[t] == once[t]
        yield f"inverse {t}", back[t] == T[t]
        yield f"dual realization {t}", dual_hat_F(*t) == Poly.var(theory(*t))
    for t in stable_types(min(bound, 3)):
        yield f"realized recursion {t}", check_realized_recursion(*t)


def hae(bound):
    for g, n in _types(bound):
        yield f"independence {(g, n)}", check_independence(g, n)
        yield f"weights {(g, n)}", is_homogeneous(tilde_F(g, n), n) and is_homogeneous(holo_F(g, n), n)
        yield f"anomaly equation {(g, n)}", check_anomaly_equation(g, n)
    for g, n in _types(bound - 1):
        yield f"lemma {(g, n)}", check_holo_lemma(g, n)


_TABLE = {
    "enumeration": enumeration,
    "recursions": recursions,
    "duality": duality_suite,
    "transforms": transforms,
    "gaussian": gaussian,
    "grouplaw": grouplaw,
    "hae": hae,
}


def run_suite(name: str, bound: int):
    names = SUITES if name == "all" else (name,)
    for n in names:
        for check, ok in _TABLE[n](bound):
            yield n, check, bool(ok)
