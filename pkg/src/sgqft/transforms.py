"""
Type-epsilon expansions and the duality map.

``graph_transform`` replaces every vertex of a graph by the sum of all
stable graphs of the same type, weighted by ``eps**|E| / |Aut|``, where the
automorphisms fix the legs pointwise (each leg is named after the half-edge
of the original graph it came from). Legs whose names form an edge of the
original graph are then glued back together and the names forgotten.
``duality`` is the case ``eps = 1`` with the sign ``(-1)**|E|``.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import factorial

from .graphs import (
    GraphError,
    StableGraph,
    _canon,
    disjoint_union,
    enumerate_connected,
    enumerate_labelled,
    named_variants,
    vertex_graph,
)
from .operators import GraphSum, abstract_F, abstract_F_labelled, linear, op_D, op_partial
from .poly import Poly


@lru_cache(maxsize=None)
def _named_expansion(g: int, labels: tuple, N: int) -> tuple:
    """Named graphs of genus ``g`` whose legs are named ``"0".."n-1"``, leg
    ``i`` carrying label ``labels[i]``. Returns ``(graph, edges, 1/aut)``."""
    names = [(str(i), l) for i, l in enumerate(labels)]
    if N:
        counts = tuple(sum(1 for l in labels if l == j) for j in range(1, N + 1))
        bases = enumerate_labelled(g, counts)
    else:
        bases = enumerate_connected(g, len(labels))
    out = []
    for base in bases:
        for graph in named_variants(base, names):
            _, aut, rep = _canon(graph)
            out.append((rep, rep.num_edges, Fraction(1, aut)))
    return tuple(out)


def _rename(graph: StableGraph, names: list) -> StableGraph:
    legs = tuple((v, l, names[int(s)]) for v, l, s in graph.legs)
    return StableGraph(graph.genera, graph.edges, legs)


@lru_cache(maxsize=None)
def _expansion(key: bytes, N: int) -> tuple:
    """For the canonical graph with this key: a tuple of
    ``(rep, {extra_edges: coefficient})`` over the resulting classes."""
    graph = _REPS[key]
    V = graph.num_vertices
    per_vertex = [[] for _ in range(V)]
    for k, (u, a, w, b) in enumerate(graph.edges):
        per_vertex[u].append((f"e{k}a", a))
        per_vertex[w].append((f"e{k}b", b))
    for k, (v, l, _) in enumerate(graph.legs):
        per_vertex[v].append((f"l{k}", l))
    choices = []
    for v in range(V):
        half = sorted(per_vertex[v], key=lambda t: (t[1], t[0]))
        labels = tuple(l for _, l in half)
        names = [nm for nm, _ in half]
        choices.append(
            [(_rename(G, names), e, c) for G, e, c in _named_expansion(graph.genera[v], labels, N)]
        )
    result: dict = {}
    reps: dict = {}
    for combo in product(*choices):
        union = combo[0][0]
        for G, _, _ in combo[1:]:
            union = disjoint_union(union, G)
        extra = sum(e for _, e, _ in combo)
        coeff = Fraction(1)
        for _, _, c in combo:
            coeff *= c
        glued = _glue(union, graph)
        gkey, _, grep = _canon(glued)
        bucket = result.setdefault(gkey, {})
        bucket[extra] = bucket.get(extra, 0) + coeff
        reps.setdefault(gkey, grep)
    return tuple((reps[k], result[k]) for k in sorted(result))


_REPS: dict = {}


def _glue(union: StableGraph, skeleton: StableGraph) -> StableGraph:
    where = {s: (v, l) for v, l, s in union.legs}
    edges = list(union.edges)
    for k in range(skeleton.num_edges):
        (v1, l1), (v2, l2) = where[f"e{k}a"], where[f"e{k}b"]
        edges.append((v1, l1, v2, l2))
    legs = []
    for k, (_, l, s) in enumerate(skeleton.legs):
        v, _ = where[f"l{k}"]
        legs.append((v, l, s))
    return StableGraph(union.genera, edges, legs)


def _graph_N(graph: StableGraph, N: int | None) -> int:
    if N is None:
        N = 0
        for _, l, _ in graph.legs:
            N = max(N, l)
        for _, a, _, b in graph.edges:
            N = max(N, a, b)
    if graph.is_labelled() and not N:
        raise GraphError("labelled graph needs N")
    return N


def expansion(graph: StableGraph, N: int | None = None) -> tuple:
    N = _graph_N(graph, N)
    key, _, rep = _canon(graph)
    _REPS.setdefault(key, rep)
    return _expansion(key, N)


@linear
def graph_transform(graph: StableGraph, eps, N: int | None = None) -> GraphSum:
    """The Type-eps expansion of ``graph``; ``eps`` is a rational or a ``Poly``."""
    s = GraphSum()
    for rep, bucket in expansion(graph, N):
        c = 0
        for k, v in bucket.items():
            c = c + (eps ** k) * v
        s.add_term(rep, c)
    return s


@linear
def duality(graph: StableGraph, N: int | None = None) -> GraphSum:
    """phi(graph) = (-1)**|E| times the expansion at eps = 1."""
    sign = -1 if graph.num_edges % 2 else 1
    s = GraphSum()
    for rep, bucket in expansion(graph, N):
        s.add_term(rep, sign * sum(bucket.values()))
    return s


def vertex_expansion(g: int, n: int, eps) -> GraphSum:
    """n! * sum over connected (g,n) graphs of eps**|E| / |Aut| * graph."""
    nf = factorial(n)
    s = GraphSum()
    for graph, c in abstract_F(g, n).items():
        s.add_term(graph, (eps ** graph.num_edges) * c * nf)
    return s


def dual_abstract_F(g: int, n: int) -> GraphSum:
    s = GraphSum()
    for graph, c in abstract_F(g, n).items():
        s = s + duality(graph) * c
    return s


def dual_abstract_F_labelled(g: int, labels: tuple) -> GraphSum:
    N = len(labels)
    s = GraphSum()
    for graph, c in abstract_F_labelled(g, tuple(labels)).items():
        s = s + duality(graph, N) * c
    return s


def dual_operator_check(graph: StableGraph) -> bool:
    """phi(partial G) = D phi(G) and phi(D G) = partial phi(G)."""
    phi = duality(graph)
    return duality(op_partial(graph)) == op_D(phi) and duality(op_D(graph)) == op_partial(phi)


def eps_param(text: str):
    """Parse ``--epsilon``: a rational, or a polynomial in e1, e2, ..."""
    try:
        return Fraction(text)
    except ValueError:
        return Poly.parse(text)


def single_vertex(g: int, n: int) -> StableGraph:
    return vertex_graph(g, n)
