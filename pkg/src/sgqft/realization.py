"""
Feynman-rule realization of graph sums.

A theory is a dict mapping a stable type to a ``Poly``: ``(g, n)`` in the
one-dimensional case and ``(g, (l1, .., lN))`` in the labelled case. The
transform ``s_transform`` sums graphs with vertex weights taken from the
theory and a given propagator on edges. ``wick_gaussian`` computes the same
thing from the formal Gaussian integral, by Wick pairing and a logarithm,
without ever looking at a graph.
"""
from __future__ import annotations

from collections import Counter
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import factorial

from .graphs import GraphError, StableGraph, aut_order, enumerate_connected, enumerate_labelled
from .poly import Poly, as_poly, kappa, theory as theory_sym


def _excess(g: int, n) -> int:
    return 2 * g - 2 + (sum(n) if isinstance(n, tuple) else n)


def stable_types(bound: int) -> list:
    """All (g, n) with 0 < 2g-2+n <= bound."""
    return [
        (g, n)
        for g in range(bound // 2 + 2)
        for n in range(bound + 3)
        if 0 < 2 * g - 2 + n <= bound
    ]


def labelled_types(bound: int, N: int) -> list:
    out = []
    for g, n in stable_types(bound):
        for l in product(range(n + 1), repeat=N):
            if sum(l) == n:
                out.append((g, l))
    return out


def _lfact(l) -> int:
    out = 1
    for x in l:
        out *= factorial(x)
    return out


def symbolic_theory(bound: int, N: int = 0) -> dict:
    """The theory whose value at each type is its own symbol ``F[g,n]``."""
    if N:
        return {t: Poly.var(theory_sym(*t)) for t in labelled_types(bound, N)}
    return {t: Poly.var(theory_sym(*t)) for t in stable_types(bound)}


# weights


def weight(graph: StableGraph, vertex, edge) -> Poly:
    """Product of vertex and edge weights. ``vertex`` maps ``(g, n)`` (or
    ``(g, label counts)`` for labelled graphs) to a polynomial; ``edge`` is a
    polynomial or a function of the two half-edge labels."""
    labelled = graph.is_labelled()
    N = max([l for v in range(graph.num_vertices) for l in graph.half_edge_labels(v)] + [0])
    out = Poly.const(1)
    for v, g in enumerate(graph.genera):
        labels = graph.half_edge_labels(v)
        if labelled:
            t = (g, tuple(labels.count(j) for j in range(1, N + 1)))
        else:
            t = (g, len(labels))
        try:
            w = vertex(t) if callable(vertex) else vertex[t]
        except KeyError:
            raise GraphError(f"no vertex rule for type {t}") from None
        out = out * as_poly(w)
    for _, a, _, b in graph.edges:
        out = out * as_poly(edge(a, b) if callable(edge) else edge)
    return out


@lru_cache(maxsize=None)
def _signatures(g: int, n: int) -> tuple:
    """Group the connected (g,n) graphs by (vertex types, edge count) and sum 1/|Aut|."""
    acc: dict = {}
    for graph in enumerate_connected(g, n):
        vt = tuple(sorted((gv, graph.valence(v)) for v, gv in enumerate(graph.genera)))
        k = (vt, graph.num_edges)
        acc[k] = acc.get(k, 0) + Fraction(1, aut_order(graph))
    return tuple(sorted(acc.items()))


@lru_cache(maxsize=None)
def _signatures_labelled(g: int, l: tuple) -> tuple:
    N = len(l)
    acc: dict = {}
    for graph in enumerate_labelled(g, l):
        vt = []
        for v, gv in enumerate(graph.genera):
            labels = graph.half_edge_labels(v)
            vt.append((gv, tuple(labels.count(j) for j in range(1, N + 1))))
        et = Counter((min(a, b), max(a, b)) for _, a, _, b in graph.edges)
        k = (tuple(sorted(vt)), tuple(sorted(et.items())))
        acc[k] = acc.get(k, 0) + Fraction(1, aut_order(graph))
    return tuple(sorted(acc.items()))


def graph_sum_eval(g: int, n, vertex, edge) -> Poly:
    """sum over connected graphs of type (g,n) of weight / |Aut|.

    ``vertex`` is a dict or function on types. ``edge`` is a ``Poly`` in the
    one-dimensional case, a dict ``(i, j) -> Poly`` (``i <= j``) otherwise."""
    get = vertex if callable(vertex) else vertex.__getitem__
    total = Poly()
    if isinstance(n, tuple):
        for (vt, et), c in _signatures_labelled(g, n):
            term = Poly.const(c)
            for t in vt:
                term = term * as_poly(get(t))
            for pair, m in et:
                term = term * as_poly(edge[pair]) ** m
            total = total + term
        return total
    edge = as_poly(edge)
    powers: dict = {}
    for (vt, e), c in _signatures(g, n):
        term = Poly.const(c)
        for t in vt:
            term = term * as_poly(get(t))
        if e not in powers:
            powers[e] = edge ** e
        total = total + term * powers[e]
    return total


def _default_vertex(t):
    return Poly.var(theory_sym(*t))


def _default_edges(N: int) -> dict:
    return {(i, j): Poly.var(kappa(i, j)) for i in range(1, N + 1) for j in range(i, N + 1)}


@lru_cache(maxsize=None)
def hat_F(g: int, n: int) -> Poly:
    """Realization of the abstract free energy with vertex (g,n) -> F[g,n], edge -> kappa."""
    if _excess(g, n) <= 0:
        raise GraphError(f"unstable type ({g},{n})")
    return graph_sum_eval(g, n, _default_vertex, Poly.var(kappa()))


@lru_cache(maxsize=None)
def hat_F_labelled(g: int, l: tuple) -> Poly:
    if _excess(g, l) <= 0:
        raise GraphError(f"unstable type ({g};{l})")
    return graph_sum_eval(g, tuple(l), _default_vertex, _default_edges(len(l)))


def tilde_hat_F(g: int, n: int) -> Poly:
    """n! * hat_F(g, n)."""
    return hat_F(g, n) * factorial(n)


@lru_cache(maxsize=None)
def dual_hat_F(g: int, n: int) -> Poly:
    """Dual realization: vertices weighted by n_v! hat_F(g_v,n_v), edges by -kappa,
    times n!. Equals F[g,n]."""
    if _excess(g, n) <= 0:
        raise GraphError(f"unstable type ({g},{n})")
    return graph_sum_eval(g, n, lambda t: tilde_hat_F(*t), -Poly.var(kappa())) * factorial(n)


# the S_kappa action


def _bound_of(theory: dict) -> int:
    return max(_excess(g, n) for g, n in theory)


def s_transform(theory: dict, kpoly, bound: int | None = None) -> dict:
    """G_{g,n} = n! sum over connected (g,n) graphs of kpoly^|E| / |Aut| prod theory(g_v,n_v)."""
    if bound is None:
        bound = _bound_of(theory)
    kpoly = as_poly(kpoly)
    return {
        t: graph_sum_eval(t[0], t[1], theory, kpoly) * factorial(t[1])
        for t in stable_types(bound)
    }


def s_transform_labelled(theory: dict, kmat: dict, N: int, bound: int | None = None) -> dict:
    """Labelled version; ``kmat`` maps ``(i, j)`` with ``i <= j`` to a propagator."""
    if bound is None:
        bound = _bound_of(theory)
    kmat = {p: as_poly(kmat.get(p, 0)) for p in _default_edges(N)}
    return {
        t: graph_sum_eval(t[0], t[1], theory, kmat) * _lfact(t[1])
        for t in labelled_types(bound, N)
    }


# Wick oracle


def _series_mul(a: dict, b: dict, bound: int) -> dict:
    out: dict = {}
    for (p1, m1, k1), c1 in a.items():
        e1 = p1 + sum(m1) + sum(k1)
        for (p2, m2, k2), c2 in b.items():
            if e1 + p2 + sum(m2) + sum(k2) > bound:
                continue
            key = (p1 + p2, tuple(x + y for x, y in zip(m1, m2)), tuple(x + y for x, y in zip(k1, k2)))
            v = out.get(key, 0) + c1 * c2
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return out


def _series_add(a: dict, b: dict, scale=1) -> dict:
    out = dict(a)
    for k, c in b.items():
        v = out.get(k, 0) + c * scale
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def _wick(theory: dict, kmat: dict, N: int, bound: int) -> dict:
    zero = (0,) * N
    # the interaction: sum lambda^(2g-2) F prod (z_i + xi_i)^(l_i) / l_i!
    S: dict = {}
    for (g, l), value in theory.items():
        if _excess(g, l) > bound:
            continue
        for m in product(*(range(x + 1) for x in l)):
            k = tuple(x - y for x, y in zip(l, m))
            c = Fraction(1, _lfact(m) * _lfact(k))
            key = (2 * g - 2, m, k)
            S[key] = S.get(key, 0) + as_poly(value) * c
    # exp(S), every term of S has excess >= 1
    E = {(0, zero, zero): Poly.const(1)}
    power = {(0, zero, zero): Poly.const(1)}
    for j in range(1, bound + 1):
        power = _series_mul(power, S, bound)
        E = _series_add(E, power, Fraction(1, factorial(j)))

    moments: dict = {zero: Poly.const(1)}

    def moment(k):
        if k in moments:
            return moments[k]
        if sum(k) % 2:
            moments[k] = Poly()
            return moments[k]
        i = next(idx for idx, x in enumerate(k) if x)
        total = Poly()
        for j in range(N):
            mult = k[j] - (j == i)
            if mult <= 0:
                continue
            rest = list(k)
            rest[i] -= 1
            rest[j] -= 1
            pair = (min(i, j) + 1, max(i, j) + 1)
            total = total + kmat[pair] * moment(tuple(rest)) * mult
        moments[k] = total
        return total

    Z: dict = {}
    for (p, m, k), c in E.items():
        mk = moment(k)
        if not mk:
            continue
        key = (p + sum(k), m, zero)
        v = Z.get(key, 0) + c * mk
        if v:
            Z[key] = v
        else:
            Z.pop(key, None)
    # log Z = sum (-1)^(j+1) Y^j / j with Y = Z - 1
    Y = dict(Z)
    Y.pop((0, zero, zero), None)
    logZ: dict = {}
    power = {(0, zero, zero): Poly.const(1)}
    for j in range(1, bound + 1):
        power = _series_mul(power, Y, bound)
        logZ = _series_add(logZ, power, Fraction((-1) ** (j + 1), j))
    return logZ


def wick_gaussian(theory: dict, kpoly, bound: int) -> dict:
    """Formal Gaussian integral of exp(sum lambda^(2g-2) F_{g,n} (z+xi)^n / n!) with
    <xi xi> = kpoly; returns n! times the coefficient of lambda^(2g-2) z^n of the log."""
    if bound > 6:
        raise GraphError("genus bound too large for the Wick expansion")
    lifted = {(g, (n,)): v for (g, n), v in theory.items()}
    logZ = _wick(lifted, {(1, 1): as_poly(kpoly)}, 1, bound)
    return {
        (g, n): logZ.get((2 * g - 2, (n,), (0,)), Poly()) * factorial(n)
        for g, n in stable_types(bound)
    }


def wick_gaussian_labelled(theory: dict, kmat: dict, N: int, bound: int) -> dict:
    """N-dimensional version with <xi_i xi_j> = kmat[(i, j)]."""
    if bound > 6:
        raise GraphError("genus bound too large for the Wick expansion")
    kmat = {p: as_poly(kmat.get(p, 0)) for p in _default_edges(N)}
    logZ = _wick(theory, kmat, N, bound)
    zero = (0,) * N
    return {
        (g, l): logZ.get((2 * g - 2, l, zero), Poly()) * _lfact(l)
        for g, l in labelled_types(bound, N)
    }


# realized recursion


def realized_recursion_rhs(g: int, n: int) -> Poly:
    """1/2 ((1/n!) tF_{g-1,n+2} + sum_{n1+n2=n} tF_{g1,n1+1} tF_{g2,n2+1} / (n1! n2!))."""
    total = Poly()
    if g >= 1 and _excess(g - 1, n + 2) > 0:
        total = total + tilde_hat_F(g - 1, n + 2) * Fraction(1, factorial(n))
    for g1 in range(g + 1):
        for n1 in range(n + 1):
            g2, n2 = g - g1, n - n1
            if _excess(g1, n1 + 1) > 0 and _excess(g2, n2 + 1) > 0:
                total = total + tilde_hat_F(g1, n1 + 1) * tilde_hat_F(g2, n2 + 1) * Fraction(
                    1, factorial(n1) * factorial(n2)
                )
    return total * Fraction(1, 2)


def check_realized_recursion(g: int, n: int) -> bool:
    return hat_F(g, n).diff(kappa()) == realized_recursion_rhs(g, n)


# theory files


def theory_to_json(theory: dict) -> dict:
    out = {}
    for (g, n), p in sorted(theory.items(), key=lambda t: (t[0][0], t[0][1])):
        key = f"{g};{','.join(map(str, n))}" if isinstance(n, tuple) else f"{g},{n}"
        out[key] = as_poly(p).to_json()
    return out


def theory_from_json(data: dict) -> dict:
    out = {}
    for key, value in data.items():
        if ";" in key:
            g, rest = key.split(";")
            t = (int(g), tuple(int(x) for x in rest.split(",")))
        else:
            g, n = key.split(",")
            t = (int(g), int(n))
        out[t] = Poly.from_json(value) if isinstance(value, list) else Poly.parse(str(value))
    return out
