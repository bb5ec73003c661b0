"""
Holomorphic anomaly realization.

Polynomials here live in the ring generated by ``kappa`` and holomorphic
generators ``F03``, ``h11``, ``E4``, ``amb[g]`` and their derivatives
``D^k:X``. Weights: kappa -2, F03 3, h11 1, E4 -4, amb[g] 0, and ``D^k:X``
has weight ``wt(X) + k``. The covariant derivative acts by

    D_t(kappa) = -kappa^2 F03 + E4 F03
    D_t(X)     = D^1 X + wt(X) kappa F03 X

extended by the Leibniz rule.
"""
from __future__ import annotations

import threading
from fractions import Fraction
from math import factorial

from .graphs import GraphError, aut_order, enumerate_connected
from .poly import HOLO, KAPPA, Poly, holo, kappa, scalar, theory
from .realization import graph_sum_eval

_WEIGHTS = {"F03": 3, "h11": 1, "E4": -4}

K = Poly.var(kappa())
F03 = Poly.var(holo("F03"))
H11 = Poly.var(holo("h11"))
E4 = Poly.var(holo("E4"))


def amb(g: int) -> Poly:
    return Poly.var(holo(f"amb[{g}]"))


def sym_weight(s) -> int:
    if s.kind == KAPPA:
        return -2
    if s.kind != HOLO:
        raise GraphError(f"{s} is not a generator of the differential ring")
    _, k, base = s.data
    return _WEIGHTS.get(base, 0) + k


def weights(p: Poly) -> set:
    """Set of weights of the monomials of ``p``."""
    return {sum(sym_weight(s) * e for s, e in m) for m in p.terms}


def is_homogeneous(p: Poly, w: int) -> bool:
    return weights(p) <= {w}


def _raise(s):
    _, k, base = s.data
    return holo(base, k + 1)


def _derivation(p: Poly, image) -> Poly:
    out = Poly()
    for m, c in p.terms.items():
        for idx, (s, e) in enumerate(m):
            rest = list(m)
            if e == 1:
                del rest[idx]
            else:
                rest[idx] = (s, e - 1)
            out = out + Poly({tuple(rest): c * e}) * image(s)
    return out


_DCOV_KAPPA = -K * K * F03 + E4 * F03


def _dcov_sym(s) -> Poly:
    if s.kind == KAPPA:
        return _DCOV_KAPPA
    return Poly.var(_raise(s)) + K * F03 * Poly.var(s) * sym_weight(s)


def d_cov(p) -> Poly:
    """The covariant derivative D_t."""
    if not isinstance(p, Poly):
        return Poly()
    return _derivation(p, _dcov_sym)


def d_hol(p: Poly) -> Poly:
    """The holomorphic derivative: D^k X -> D^(k+1) X on kappa-free polynomials."""
    if kappa() in p.symbols():
        raise GraphError("holomorphic derivative is only applied to kappa-free polynomials")
    return _derivation(p, lambda s: Poly.var(_raise(s)))


_lock = threading.Lock()
_tilde: dict = {}
_holo: dict = {}


def _stable(g, n):
    return g >= 0 and n >= 0 and 2 * g - 2 + n > 0


def _tilde_closure(g: int) -> Poly:
    total = Poly()
    for graph in enumerate_connected(g, 0):
        if graph.num_vertices == 1 and graph.num_edges == 0:
            continue
        w = Poly.const(Fraction(1, aut_order(graph)))
        for v, gv in enumerate(graph.genera):
            w = w * tilde_F(gv, graph.valence(v))
        total = total + w * (-K) ** graph.num_edges
    return amb(g) - total


def tilde_F(g: int, n: int) -> Poly:
    """The non-holomorphic amplitudes."""
    if not _stable(g, n):
        raise GraphError(f"unstable type ({g},{n})")
    key = (g, n)
    if key in _tilde:
        return _tilde[key]
    if key == (0, 3):
        value = F03
    elif key == (1, 1):
        value = F03 * K * Fraction(1, 2) + H11
    elif g >= 2 and n == 0:
        value = _tilde_closure(g)
    else:
        value = d_cov(tilde_F(g, n - 1))
    with _lock:
        _tilde.setdefault(key, value)
    return _tilde[key]


def holo_F(g: int, n: int) -> Poly:
    """n! times the graph sum with vertex weights tilde_F and edge weight -kappa."""
    if not _stable(g, n):
        raise GraphError(f"unstable type ({g},{n})")
    key = (g, n)
    if key not in _holo:
        value = graph_sum_eval(g, n, lambda t: tilde_F(*t), -K) * factorial(n)
        with _lock:
            _holo.setdefault(key, value)
    return _holo[key]


def check_independence(g: int, n: int) -> bool:
    return holo_F(g, n).degree(kappa()) == 0


def lemma_A(g: int, n: int) -> Poly:
    """1/2 F_{g-1,n+2} + 1/2 sum_{n1+n2=n+2} n!/((n1-1)!(n2-1)!) F_{g1,n1} F_{g2,n2}."""
    total = Poly()
    if g >= 1 and _stable(g - 1, n + 2):
        total = total + holo_F(g - 1, n + 2)
    for g1 in range(g + 1):
        for n1 in range(1, n + 2):
            n2 = n + 2 - n1
            if _stable(g1, n1) and _stable(g - g1, n2):
                c = Fraction(factorial(n), factorial(n1 - 1) * factorial(n2 - 1))
                total = total + holo_F(g1, n1) * holo_F(g - g1, n2) * c
    return total * Fraction(1, 2)


def check_holo_lemma(g: int, n: int) -> bool:
    """F_{g,n+1} = D_hol F_{g,n} + E4 F03 A_{g,n}."""
    return holo_F(g, n + 1) - d_hol(holo_F(g, n)) == E4 * F03 * lemma_A(g, n)


def _hat(g, n):
    return tilde_F(g, n) * Fraction(1, factorial(n))


def anomaly_rhs(g: int, n: int) -> Poly:
    """1/2 (D_t D_t hatF_{g-1,n} + sum D_t hatF_{g1,n1} D_t hatF_{g2,n2}), with
    D_t hatF_{g,n} read as tilde_F(g,n+1)/n!."""
    total = Poly()
    if g >= 1 and _stable(g - 1, n + 2):
        total = total + tilde_F(g - 1, n + 2) * Fraction(1, factorial(n))
    for g1 in range(g + 1):
        for n1 in range(n + 1):
            g2, n2 = g - g1, n - n1
            if _stable(g1, n1 + 1) and _stable(g2, n2 + 1):
                total = total + tilde_F(g1, n1 + 1) * tilde_F(g2, n2 + 1) * Fraction(
                    1, factorial(n1) * factorial(n2)
                )
    return total * Fraction(1, 2)


def check_anomaly_equation(g: int, n: int) -> bool:
    """d/dkappa hatF_{g,n} with the holomorphic generators held fixed."""
    return _hat(g, n).diff(kappa()) == anomaly_rhs(g, n)


def closure_form(g: int) -> Poly:
    """tilde_F(g,0) in terms of the lower amplitudes: symbols F[h,m] stand for
    tilde_F(h,m) and ``scalar:f<g>`` for the holomorphic ambiguity."""
    if g < 2:
        raise GraphError("closure form is defined for genus >= 2")
    sym = lambda t: Poly.var(theory(*t))  # noqa: E731
    total = Poly()
    for graph in enumerate_connected(g, 0):
        if graph.num_vertices == 1 and graph.num_edges == 0:
            continue
        w = Poly.const(Fraction(1, aut_order(graph)))
        for v, gv in enumerate(graph.genera):
            w = w * sym((gv, graph.valence(v)))
        total = total + w * (-K) ** graph.num_edges
    return Poly.var(scalar(f"f{g}")) - total


def expand_closure(p: Poly, g: int) -> Poly:
    """Substitute the amplitudes into a closure-form polynomial."""
    values = {}
    for s in p.symbols():
        if s.name.startswith("F["):
            values[s] = tilde_F(*s.data)
    values[scalar(f"f{g}")] = amb(g)
    return p.subs(values)
