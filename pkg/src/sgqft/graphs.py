"""
Stable graphs.

A stable graph has genus-marked vertices, internal edges (loops and parallel
edges allowed) and external legs. Every half-edge carries an integer label,
``0`` meaning unlabelled. External legs may also carry a name, a string that
is treated as a unique colour (``""`` means no name).

Internally an edge is ``(u, a, w, b)``: half-edge labelled ``a`` at vertex
``u`` paired with half-edge labelled ``b`` at ``w``. A leg is
``(v, label, name)``. Slot indices only exist in the JSON form; they are
assigned per vertex in edge order, then leg order.
"""
from __future__ import annotations

import base64
import json
from collections import Counter
from functools import lru_cache
from itertools import combinations_with_replacement, permutations, product
from math import factorial


class GraphError(ValueError):
    """Raised for malformed graph input or unstable types."""


class StableGraph:
    __slots__ = ("genera", "edges", "legs", "_hash")

    def __init__(self, genera, edges=(), legs=()):
        self.genera = tuple(int(g) for g in genera)
        es = []
        for e in edges:
            if len(e) == 2:
                es.append((e[0], 0, e[1], 0))
            else:
                es.append(tuple(e))
        self.edges = tuple(es)
        ls = []
        for leg in legs:
            if isinstance(leg, int):
                ls.append((leg, 0, ""))
            elif len(leg) == 2:
                ls.append((leg[0], leg[1], ""))
            else:
                ls.append(tuple(leg))
        self.legs = tuple(ls)
        self._hash = hash((self.genera, self.edges, self.legs))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return (
            isinstance(other, StableGraph)
            and self.genera == other.genera
            and self.edges == other.edges
            and self.legs == other.legs
        )

    def __repr__(self):
        return f"StableGraph({list(self.genera)}, {list(self.edges)}, {list(self.legs)})"

    @property
    def num_vertices(self) -> int:
        return len(self.genera)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def num_legs(self) -> int:
        return len(self.legs)

    def valence(self, v: int) -> int:
        val = sum(1 for leg in self.legs if leg[0] == v)
        for u, _, w, _ in self.edges:
            val += (u == v) + (w == v)
        return val

    def half_edge_labels(self, v: int) -> list:
        """Labels of every half-edge at ``v``, internal and external."""
        out = [leg[1] for leg in self.legs if leg[0] == v]
        for u, a, w, b in self.edges:
            if u == v:
                out.append(a)
            if w == v:
                out.append(b)
        return out

    def is_labelled(self) -> bool:
        return any(leg[1] for leg in self.legs) or any(e[1] or e[3] for e in self.edges)

    def leg_label_counts(self, N: int) -> tuple:
        c = Counter(leg[1] for leg in self.legs)
        return tuple(c[i] for i in range(1, N + 1))

    def type(self) -> tuple:
        return genus(self), self.num_legs

    # JSON

    def slot_map(self):
        """Slot addresses for edges and legs, in the order used by ``to_json``."""
        nxt = [0] * self.num_vertices

        def take(v):
            nxt[v] += 1
            return [v, nxt[v] - 1]

        edges = [(take(u), take(w)) for u, _, w, _ in self.edges]
        legs = [take(v) for v, _, _ in self.legs]
        return edges, legs

    def to_json(self) -> dict:
        eslots, lslots = self.slot_map()
        edges = []
        for (u, a, w, b), (s, t) in zip(self.edges, eslots):
            edges.append([s, t, [a, b]] if (a or b) else [s, t])
        legs = [[s, leg[1] or None] for leg, s in zip(self.legs, lslots)]
        return {"vertices": list(self.genera), "edges": edges, "legs": legs}

    @classmethod
    def from_json(cls, data) -> "StableGraph":
        """Parse the JSON graph form; raises ``GraphError`` on malformed input."""
        if isinstance(data, (str, bytes)):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as exc:
                raise GraphError(f"invalid JSON: {exc}") from exc
        msg = _structural_problem(data)
        if msg:
            raise GraphError(msg)
        edges = []
        for e in data.get("edges", []):
            (u, _), (w, _) = e[0], e[1]
            a, b = (e[2] if len(e) > 2 else (0, 0))
            edges.append((u, a or 0, w, b or 0))
        legs = []
        for leg in data.get("legs", []):
            name = leg[2] if len(leg) > 2 else ""
            legs.append((leg[0][0], leg[1] or 0, name or ""))
        return cls(data["vertices"], edges, legs)


def _structural_problem(data) -> str | None:
    if not isinstance(data, dict) or "vertices" not in data:
        return "graph must be an object with a 'vertices' list"
    verts = data["vertices"]
    if not isinstance(verts, list) or any(
        not isinstance(g, int) or isinstance(g, bool) or g < 0 for g in verts
    ):
        return "vertices must be nonnegative integers"
    seen = set()

    def address(x):
        if (
            not isinstance(x, list)
            or len(x) != 2
            or not all(isinstance(i, int) and not isinstance(i, bool) for i in x)
        ):
            return "half-edge address must be [vertex, slot]"
        if not 0 <= x[0] < len(verts) or x[1] < 0:
            return f"half-edge {x} out of range"
        if tuple(x) in seen:
            return f"half-edge {x} used twice"
        seen.add(tuple(x))
        return None

    def label_ok(x):
        return x is None or (isinstance(x, int) and not isinstance(x, bool) and x >= 1)

    for e in data.get("edges", []):
        if not isinstance(e, list) or len(e) not in (2, 3):
            return "edge must be [[v,s],[v,s]] or [[v,s],[v,s],[l1,l2]]"
        if e[0] == e[1]:
            return f"half-edge {e[0]} paired with itself"
        for x in e[:2]:
            msg = address(x)
            if msg:
                return msg
        if len(e) == 3 and (
            not isinstance(e[2], list) or len(e[2]) != 2 or not all(map(label_ok, e[2]))
        ):
            return "edge labels must be a pair of positive integers"
    for leg in data.get("legs", []):
        if not isinstance(leg, list) or len(leg) not in (2, 3):
            return "leg must be [[v,s], label-or-null]"
        msg = address(leg[0])
        if msg:
            return msg
        if not label_ok(leg[1]):
            return "leg label must be a positive integer or null"
    for v in range(len(verts)):
        slots = sorted(s for u, s in seen if u == v)
        if slots != list(range(len(slots))):
            return f"slots at vertex {v} are not 0..k-1"
    return None


def validate(graph) -> str | None:
    """Return ``None`` if ``graph`` (a ``StableGraph`` or JSON dict) is a valid
    stable graph, otherwise a message naming the first violated invariant."""
    if not isinstance(graph, StableGraph):
        msg = _structural_problem(graph)
        if msg:
            return msg
        graph = StableGraph.from_json(graph)
    V = graph.num_vertices
    for u, _, w, _ in graph.edges:
        if not (0 <= u < V and 0 <= w < V):
            return "edge endpoint out of range"
    for leg in graph.legs:
        if not 0 <= leg[0] < V:
            return "leg vertex out of range"
    names = [leg[2] for leg in graph.legs if leg[2]]
    if len(names) != len(set(names)):
        return "leg names are not distinct"
    for v, g in enumerate(graph.genera):
        val = graph.valence(v)
        if g == 0 and val < 3:
            return f"genus-0 valence < 3 at vertex {v}"
        if g == 1 and val < 1:
            return f"genus-1 valence < 1 at vertex {v}"
    return None


def components(graph: StableGraph) -> list:
    """Vertex sets of the connected components, each sorted, in order of least vertex."""
    parent = list(range(graph.num_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, _, w, _ in graph.edges:
        ru, rw = find(u), find(w)
        if ru != rw:
            parent[max(ru, rw)] = min(ru, rw)
    groups: dict = {}
    for v in range(graph.num_vertices):
        groups.setdefault(find(v), []).append(v)
    return [groups[r] for r in sorted(groups)]


def is_connected(graph: StableGraph) -> bool:
    return len(components(graph)) <= 1


def genus(graph: StableGraph) -> int:
    return (
        graph.num_edges
        - graph.num_vertices
        + len(components(graph))
        + sum(graph.genera)
    )


def disjoint_union(g1: StableGraph, g2: StableGraph) -> StableGraph:
    k = g1.num_vertices
    return StableGraph(
        g1.genera + g2.genera,
        g1.edges + tuple((u + k, a, w + k, b) for u, a, w, b in g2.edges),
        g1.legs + tuple((v + k, l, s) for v, l, s in g2.legs),
    )


def connected_components(graph: StableGraph) -> list:
    out = []
    for verts in components(graph):
        idx = {v: i for i, v in enumerate(verts)}
        out.append(
            StableGraph(
                [graph.genera[v] for v in verts],
                [(idx[u], a, idx[w], b) for u, a, w, b in graph.edges if u in idx],
                [(idx[v], l, s) for v, l, s in graph.legs if v in idx],
            )
        )
    return out


# canonical form


def _rank(values: list) -> list:
    order = {x: i for i, x in enumerate(sorted(set(values)))}
    return [order[x] for x in values]


@lru_cache(maxsize=None)
def _canon(graph: StableGraph):
    V = graph.num_vertices
    legs = [[] for _ in range(V)]
    for v, l, s in graph.legs:
        legs[v].append((l, s))
    loops = [[] for _ in range(V)]
    nbrs = [[] for _ in range(V)]
    plain = []
    for u, a, w, b in graph.edges:
        if u == w:
            loops[u].append((min(a, b), max(a, b)))
        else:
            nbrs[u].append((w, a, b))
            nbrs[w].append((u, b, a))
            plain.append((u, a, w, b))
    for v in range(V):
        legs[v].sort()
        loops[v].sort()
    vdata = [(graph.genera[v], tuple(legs[v]), tuple(loops[v])) for v in range(V)]
    colour = _rank([vdata[v] + (len(nbrs[v]),) for v in range(V)])
    while True:
        sig = [
            (colour[v], tuple(sorted((colour[w], a, b) for w, a, b in nbrs[v])))
            for v in range(V)
        ]
        new = _rank(sig)
        if len(set(new)) == len(set(colour)):
            break
        colour = new
    cells = [[v for v in range(V) if colour[v] == c] for c in sorted(set(colour))]

    best, count = None, 0
    for choice in product(*(permutations(c) for c in cells)):
        order = [v for part in choice for v in part]
        pos = [0] * V
        for i, v in enumerate(order):
            pos[v] = i
        es = []
        for u, a, w, b in plain:
            x, y = (pos[u], a), (pos[w], b)
            es.append(x + y if x <= y else y + x)
        enc = (tuple(vdata[v] for v in order), tuple(sorted(es)))
        if best is None or enc < best:
            best, count = enc, 1
        elif enc == best:
            count += 1

    verts, es = best
    edges = [(i, a, i, b) for i, (_, _, lp) in enumerate(verts) for a, b in lp]
    edges += list(es)
    edges.sort()
    rep_legs = [(i, l, s) for i, (_, lg, _) in enumerate(verts) for l, s in lg]
    rep = StableGraph([v[0] for v in verts], edges, rep_legs)

    aut = count
    for m in Counter(edges).values():
        aut *= factorial(m)
    aut *= 2 ** sum(1 for u, a, w, b in edges if u == w and a == b)
    for m in Counter(rep_legs).values():
        aut *= factorial(m)
    key = json.dumps(best, separators=(",", ":")).encode()
    return key, aut, rep


def canonicalize(graph: StableGraph) -> tuple:
    """Return ``(key, aut_order)``; ``key`` is bytes, equal iff isomorphic."""
    key, aut, _ = _canon(graph)
    return key, aut


def canonical_form(graph: StableGraph) -> StableGraph:
    """The canonical representative of the isomorphism class."""
    return _canon(graph)[2]


def aut_order(graph: StableGraph) -> int:
    return _canon(graph)[1]


def canonical_text(key: bytes) -> str:
    return base64.b64encode(key).decode("ascii")


# enumeration


def _check_stable_type(g: int, n: int):
    if g < 0 or n < 0 or 2 * g - 2 + n <= 0:
        raise GraphError(f"unstable type (g,n)=({g},{n})")


def _partitions_nonincreasing(total: int, parts: int, cap: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(min(total, cap), -1, -1):
        for rest in _partitions_nonincreasing(total - first, parts - 1, first):
            yield (first,) + rest


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def enumerate_connected(g: int, n: int) -> tuple:
    """Canonical representatives of connected stable graphs of type (g,n),
    unlabelled legs, sorted by canonical key."""
    _check_stable_type(g, n)
    found: dict = {}
    for V in range(1, 2 * g - 2 + n + 1):
        pairs = [(i, j) for i in range(V) for j in range(i, V)]
        for gsum in range(g + 1):
            E = V - 1 + g - gsum
            for gens in _partitions_nonincreasing(gsum, V, gsum):
                for legc in _compositions(n, V):
                    base = [legc[v] for v in range(V)]
                    for es in combinations_with_replacement(pairs, E):
                        val = list(base)
                        for i, j in es:
                            val[i] += 1
                            val[j] += 1
                        if any(
                            (gv == 0 and d < 3) or (gv == 1 and d < 1)
                            for gv, d in zip(gens, val)
                        ):
                            continue
                        legs = [v for v in range(V) for _ in range(legc[v])]
                        graph = StableGraph(gens, es, legs)
                        if not is_connected(graph):
                            continue
                        key, aut, rep = _canon(graph)
                        found.setdefault(key, rep)
    return tuple(found[k] for k in sorted(found))


@lru_cache(maxsize=None)
def enumerate_labelled(g: int, labels: tuple) -> tuple:
    """Connected stable graphs of genus ``g`` whose legs carry labels with
    counts ``labels`` (``labels[j-1]`` legs labelled ``j``) and whose internal
    half-edges carry arbitrary labels in ``1..N``."""
    labels = tuple(labels)
    N = len(labels)
    if N < 1:
        raise GraphError("need at least one label")
    n = sum(labels)
    _check_stable_type(g, n)
    pool = [j + 1 for j in range(N) for _ in range(labels[j])]
    leg_choices = sorted(set(permutations(pool)))
    found: dict = {}
    for base in enumerate_connected(g, n):
        E = base.num_edges
        for ll in leg_choices:
            legs = [(v, l, s) for (v, _, s), l in zip(base.legs, ll)]
            for el in product(range(1, N + 1), repeat=2 * E):
                edges = [
                    (u, el[2 * k], w, el[2 * k + 1])
                    for k, (u, _, w, _) in enumerate(base.edges)
                ]
                key, _, rep = _canon(StableGraph(base.genera, edges, legs))
                found.setdefault(key, rep)
    return tuple(found[k] for k in sorted(found))


def named_variants(graph: StableGraph, names) -> list:
    """All non-isomorphic ways of putting the distinct ``names`` on the legs
    of ``graph``. A name is ``(name, label)``: it may only go on a leg with
    that label. Returns canonical representatives."""
    names = list(names)
    if len(names) != graph.num_legs:
        raise GraphError("need one name per leg")
    found: dict = {}
    for perm in permutations(names):
        if any(leg[1] != lab for leg, (_, lab) in zip(graph.legs, perm)):
            continue
        legs = [(leg[0], leg[1], nm) for leg, (nm, _) in zip(graph.legs, perm)]
        key, _, rep = _canon(StableGraph(graph.genera, graph.edges, legs))
        found.setdefault(key, rep)
    return [found[k] for k in sorted(found)]


def vertex_graph(g: int, n: int = 0, labels=None) -> StableGraph:
    """The single-vertex graph of genus ``g``; ``labels`` gives leg labels."""
    if labels is not None:
        return StableGraph([g], [], [(0, l, "") for l in labels])
    return StableGraph([g], [], [0] * n)
