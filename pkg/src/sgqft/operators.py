"""
Graph sums and the edge operators K, partial, gamma and D.

A ``GraphSum`` is a finite linear combination of isomorphism classes of
stable graphs. Coefficients are ``Fraction`` or ``Poly``; anything that
supports ``+``, ``*`` and truth testing works.
"""
from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .graphs import (
    GraphError,
    StableGraph,
    _canon,
    disjoint_union,
    enumerate_connected,
    enumerate_labelled,
)
from .poly import Poly


class GraphSum:
    __slots__ = ("coeffs", "reps")

    def __init__(self, items=None):
        self.coeffs: dict = {}
        self.reps: dict = {}
        if items:
            for graph, c in items:
                self.add_term(graph, c)

    @classmethod
    def single(cls, graph: StableGraph, c=1) -> "GraphSum":
        return cls([(graph, c)])

    def add_term(self, graph: StableGraph, c):
        if not c:
            return
        key, _, rep = _canon(graph)
        v = self.coeffs.get(key, 0) + c
        if v:
            self.coeffs[key] = v
            self.reps.setdefault(key, rep)
        else:
            self.coeffs.pop(key, None)
            self.reps.pop(key, None)

    def _add_keyed(self, key, rep, c):
        v = self.coeffs.get(key, 0) + c
        if v:
            self.coeffs[key] = v
            self.reps.setdefault(key, rep)
        else:
            self.coeffs.pop(key, None)
            self.reps.pop(key, None)

    def copy(self) -> "GraphSum":
        s = GraphSum()
        s.coeffs = dict(self.coeffs)
        s.reps = dict(self.reps)
        return s

    def items(self):
        """``(graph, coefficient)`` pairs sorted by canonical key."""
        return [(self.reps[k], self.coeffs[k]) for k in sorted(self.coeffs)]

    def coefficient(self, graph: StableGraph):
        return self.coeffs.get(_canon(graph)[0], 0)

    def __len__(self):
        return len(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.coeffs
        if not isinstance(other, GraphSum):
            return NotImplemented
        diff = self - other
        return not diff.coeffs

    def __add__(self, other: "GraphSum") -> "GraphSum":
        s = self.copy()
        for k, c in other.coeffs.items():
            s._add_keyed(k, other.reps[k], c)
        return s

    def __neg__(self) -> "GraphSum":
        return self * -1

    def __sub__(self, other: "GraphSum") -> "GraphSum":
        return self + (-other)

    def __mul__(self, other) -> "GraphSum":
        if isinstance(other, GraphSum):
            return sum_mul(self, other)
        s = GraphSum()
        for k, c in self.coeffs.items():
            s._add_keyed(k, self.reps[k], c * other)
        return s

    __rmul__ = __mul__

    def map_coefficients(self, f) -> "GraphSum":
        s = GraphSum()
        for k, c in self.coeffs.items():
            s._add_keyed(k, self.reps[k], f(c))
        return s

    def to_json(self) -> list:
        out = []
        for graph, c in self.items():
            coeff = c.to_json() if isinstance(c, Poly) else str(Fraction(c))
            out.append({"coefficient": coeff, "graph": graph.to_json()})
        return out

    def __repr__(self):
        return "GraphSum(" + ", ".join(f"{c}*{g!r}" for g, c in self.items()) + ")"


def sum_add(a: GraphSum, b: GraphSum) -> GraphSum:
    return a + b


def sum_scale(a: GraphSum, c) -> GraphSum:
    return a * c


def sum_mul(a: GraphSum, b: GraphSum) -> GraphSum:
    """Bilinear disjoint union."""
    s = GraphSum()
    for ka, ca in a.coeffs.items():
        for kb, cb in b.coeffs.items():
            s.add_term(disjoint_union(a.reps[ka], b.reps[kb]), ca * cb)
    return s


def linear(op):
    """Extend a graph -> GraphSum map linearly; also accepts a single graph."""

    def apply(x, *args, **kwargs):
        if isinstance(x, StableGraph):
            return op(x, *args, **kwargs)
        out = GraphSum()
        for k, c in x.coeffs.items():
            term = op(x.reps[k], *args, **kwargs)
            for k2, c2 in term.coeffs.items():
                out._add_keyed(k2, term.reps[k2], c2 * c)
        return out

    apply.__name__ = op.__name__
    apply.__doc__ = op.__doc__
    return apply


def _check_label(i, N):
    if not (isinstance(i, int) and 1 <= i <= N):
        raise GraphError(f"label {i} out of range 1..{N}")


def _K(graph: StableGraph, pair=None) -> GraphSum:
    s = GraphSum()
    for k, (u, a, w, b) in enumerate(graph.edges):
        if pair is not None and {a, b} != pair:
            continue
        edges = graph.edges[:k] + graph.edges[k + 1:]
        s.add_term(StableGraph(graph.genera, edges, graph.legs + ((u, a, ""), (w, b, ""))), 1)
    return s


def _partial(graph: StableGraph, i=0, N=0) -> GraphSum:
    s = GraphSum()
    z = graph.num_vertices
    inner = [(c, d) for c in range(1, N + 1) for d in range(1, N + 1)] if N else [(0, 0)]
    for k, (u, a, w, b) in enumerate(graph.edges):
        rest = graph.edges[:k] + graph.edges[k + 1:]
        for c, d in inner:
            s.add_term(
                StableGraph(
                    graph.genera + (0,),
                    rest + ((u, a, z, c), (z, d, w, b)),
                    graph.legs + ((z, i, ""),),
                ),
                1,
            )
    for v in range(graph.num_vertices):
        s.add_term(StableGraph(graph.genera, graph.edges, graph.legs + ((v, i, ""),)), 1)
    return s


def _gamma(graph: StableGraph, i=0, N=0) -> GraphSum:
    s = GraphSum()
    z = graph.num_vertices
    inner = [(c, d) for c in range(1, N + 1) for d in range(1, N + 1)] if N else [(0, 0)]
    for k, (v, l, name) in enumerate(graph.legs):
        rest = graph.legs[:k] + graph.legs[k + 1:]
        for c, d in inner:
            s.add_term(
                StableGraph(
                    graph.genera + (0,),
                    graph.edges + ((v, c, z, d),),
                    rest + ((z, l, name), (z, i, "")),
                ),
                1,
            )
    return s


@linear
def op_K(graph: StableGraph) -> GraphSum:
    """Sum over internal edges of the graph with that edge cut into two legs."""
    return _K(graph)


@linear
def op_partial(graph: StableGraph) -> GraphSum:
    """Insert a genus-0 trivalent vertex into each edge, and add a leg to each vertex."""
    return _partial(graph)


@linear
def op_gamma(graph: StableGraph) -> GraphSum:
    """Attach a genus-0 trivalent vertex to each leg."""
    return _gamma(graph)


@linear
def op_D(graph: StableGraph) -> GraphSum:
    return _partial(graph) + _gamma(graph)


@linear
def op_K_ij(graph: StableGraph, i: int, j: int, N: int) -> GraphSum:
    """Cut only the edges whose two half-edges are labelled ``{i, j}``."""
    _check_label(i, N)
    _check_label(j, N)
    return _K(graph, {i, j})


@linear
def op_partial_i(graph: StableGraph, i: int, N: int) -> GraphSum:
    """Labelled partial: new leg labelled ``i``, the two new internal
    half-edges range over all ``N**2`` label pairs."""
    _check_label(i, N)
    return _partial(graph, i, N)


@linear
def op_gamma_i(graph: StableGraph, i: int, N: int) -> GraphSum:
    """Labelled gamma: the moved leg keeps its label, the new one gets ``i``."""
    _check_label(i, N)
    return _gamma(graph, i, N)


@linear
def op_D_i(graph: StableGraph, i: int, N: int) -> GraphSum:
    _check_label(i, N)
    return _partial(graph, i, N) + _gamma(graph, i, N)


# free energies


@lru_cache(maxsize=None)
def abstract_F(g: int, n: int) -> GraphSum:
    s = GraphSum()
    for graph in enumerate_connected(g, n):
        key, aut, rep = _canon(graph)
        s._add_keyed(key, rep, Fraction(1, aut))
    return s


@lru_cache(maxsize=None)
def abstract_F_labelled(g: int, labels: tuple) -> GraphSum:
    s = GraphSum()
    for graph in enumerate_labelled(g, tuple(labels)):
        key, aut, rep = _canon(graph)
        s._add_keyed(key, rep, Fraction(1, aut))
    return s


def _stable(g, n):
    return g >= 0 and n >= 0 and 2 * g - 2 + n > 0


def check_lemma_D(g: int, n: int) -> bool:
    """D F_{g,n} = (n+1) F_{g,n+1}."""
    return op_D(abstract_F(g, n)) == abstract_F(g, n + 1) * (n + 1)


def _D_free(g, n):
    """D applied to F_{g,n}, with the conventions for the unstable entries;
    ``None`` when undefined."""
    if _stable(g, n):
        return op_D(abstract_F(g, n))
    if (g, n) == (1, 0):
        return abstract_F(1, 1)
    if (g, n) == (0, 2):
        return abstract_F(0, 3) * 3
    return None


def _DD_free(g, n):
    if (g, n) == (0, 1):
        return abstract_F(0, 3) * 6
    once = _D_free(g, n)
    return None if once is None else op_D(once)


def recursion_rhs_operator(g: int, n: int) -> GraphSum:
    """1/2 (DD F_{g-1,n} + sum over ordered splits of D F_{g1,n1} D F_{g2,n2})."""
    s = GraphSum()
    if g >= 1:
        dd = _DD_free(g - 1, n)
        if dd is not None:
            s = s + dd
    for g1 in range(g + 1):
        for n1 in range(n + 1):
            a = _D_free(g1, n1)
            b = _D_free(g - g1, n - n1)
            if a is not None and b is not None:
                s = s + a * b
    return s * Fraction(1, 2)


def recursion_rhs_counting(g: int, n: int) -> GraphSum:
    """1/2 ((n+2)(n+1) F_{g-1,n+2} + sum n1 n2 F_{g1,n1} F_{g2,n2}), n1+n2 = n+2."""
    s = GraphSum()
    if g >= 1 and _stable(g - 1, n + 2):
        s = s + abstract_F(g - 1, n + 2) * ((n + 2) * (n + 1))
    for g1 in range(g + 1):
        for n1 in range(1, n + 2):
            n2 = n + 2 - n1
            if _stable(g1, n1) and _stable(g - g1, n2):
                s = s + abstract_F(g1, n1) * abstract_F(g - g1, n2) * (n1 * n2)
    return s * Fraction(1, 2)


def check_recursion_K(g: int, n: int) -> bool:
    """Both forms of the quadratic recursion for K F_{g,n}."""
    lhs = op_K(abstract_F(g, n))
    return lhs == recursion_rhs_operator(g, n) and lhs == recursion_rhs_counting(g, n)


# labelled versions


def _unit(N, j):
    return tuple(1 if k == j - 1 else 0 for k in range(N))


def _plus(l, j):
    return tuple(x + (k == j - 1) for k, x in enumerate(l))


def _stable_l(g, l):
    return min(l) >= 0 and 2 * g - 2 + sum(l) > 0


def check_lemma_D_labelled(g: int, l: tuple, i: int) -> bool:
    """D_i F_{g;l} = (l_i + 1) F_{g;l+e_i}."""
    N = len(l)
    lhs = op_D_i(abstract_F_labelled(g, l), i, N)
    return lhs == abstract_F_labelled(g, _plus(l, i)) * (l[i - 1] + 1)


def _Dl(g, l, j):
    N = len(l)
    if _stable_l(g, l):
        return op_D_i(abstract_F_labelled(g, l), j, N)
    if g == 1 and sum(l) == 0:
        return abstract_F_labelled(1, _unit(N, j))
    if g == 0 and sum(l) == 2:
        return abstract_F_labelled(0, _plus(l, j)) * (l[j - 1] + 1)
    return None


def _DDl(g, l, i, j):
    N = len(l)
    if g == 0 and sum(l) == 1:
        inner = _Dl(0, _plus(l, j), i)
        return inner * (l[j - 1] + 1)
    once = _Dl(g, l, j)
    return None if once is None else op_D_i(once, i, N)


def labelled_recursion_rhs(g: int, l: tuple, i: int, j: int) -> GraphSum:
    s = GraphSum()
    if g >= 1:
        dd = _DDl(g - 1, l, i, j)
        if dd is not None:
            s = s + dd
    splits = [()]
    for x in l:
        splits = [p + (k,) for p in splits for k in range(x + 1)]
    for g1 in range(g + 1):
        for p in splits:
            q = tuple(a - b for a, b in zip(l, p))
            a = _Dl(g1, p, i)
            b = _Dl(g - g1, q, j)
            if a is not None and b is not None:
                s = s + a * b
    return s * Fraction(1, 2) if i == j else s


def check_recursion_K_labelled(g: int, l: tuple, i: int, j: int) -> bool:
    N = len(l)
    lhs = op_K_ij(abstract_F_labelled(g, tuple(l)), i, j, N)
    return lhs == labelled_recursion_rhs(g, tuple(l), i, j)


def vertex_sum(g: int, n: int) -> GraphSum:
    from .graphs import vertex_graph

    return GraphSum.single(vertex_graph(g, n))


def graphsum_from_json(data) -> GraphSum:
    if isinstance(data, str):
        data = json.loads(data)
    s = GraphSum()
    for item in data:
        c = item["coefficient"]
        c = Poly.from_json(c) if isinstance(c, list) else Fraction(c)
        s.add_term(StableGraph.from_json(item["graph"]), c)
    return s


def factorial_of(labels) -> int:
    out = 1
    for x in labels:
        out *= factorial(x)
    return out
