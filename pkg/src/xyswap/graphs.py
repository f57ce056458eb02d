"""Bicoloured graphs, plain and decorated, up to isomorphism.

A graph is determined by the multiset of its black vertices. A plain black
vertex is the sorted tuple of white labels it touches (repeats = parallel
edges). A decorated black vertex is ``(g_i, D)`` with ``D`` a sorted tuple of
``(label, h)`` pairs. Isomorphism is multiset equality, so the canonical form
is simply the sorted tuple of black vertices.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from math import factorial

__all__ = [
    "PlainGraph",
    "DecoratedGraph",
    "GraphStats",
    "enumerate_decorated",
    "enumerate_plain",
    "enumerate_trees",
    "automorphism_count",
    "brute_force_automorphisms",
    "betti1",
    "stats",
    "shadow",
]


@dataclass(frozen=True, order=True)
class PlainGraph:
    n: int
    blacks: tuple  # sorted tuple of sorted label tuples

    def edges(self):
        return [(b, label, 0) for b, labels in enumerate(self.blacks) for label in labels]

    def vertex_data(self):
        return [(0, tuple((label, 0) for label in labels)) for labels in self.blacks]

    def render(self):
        inner = ",".join("{" + "".join(str(v) for v in labels) + "}" for labels in self.blacks)
        return f"n={self.n}, blacks=[{inner}]"


@dataclass(frozen=True, order=True)
class DecoratedGraph:
    n: int
    blacks: tuple  # sorted tuple of (g_i, sorted tuple of (label, h))

    def edges(self):
        return [(b, label, h) for b, (_, D) in enumerate(self.blacks) for label, h in D]

    def vertex_data(self):
        return list(self.blacks)

    @property
    def genus(self):
        return sum(g for g, _ in self.blacks) + sum(h for _, D in self.blacks for _, h in D) + betti1(self)

    def render(self):
        parts = []
        for g, D in self.blacks:
            parts.append(f"({g},[" + ",".join(f"({label},{h})" for label, h in D) + "])")
        return (
            f"g={self.genus}, b1={betti1(self)}, aut={automorphism_count(self)}, "
            f"blacks=[{','.join(parts)}]"
        )

    def to_structured(self):
        return {
            "n": self.n,
            "g": self.genus,
            "b1": betti1(self),
            "aut": automorphism_count(self),
            "blacks": [[g, [[label, h] for label, h in D]] for g, D in self.blacks],
        }


@dataclass(frozen=True)
class GraphStats:
    valences: tuple  # r_i per white label 1..n
    edge_genus: tuple  # H_i per white label 1..n
    betti: int
    aut: int


def _connected(n, blacks_labels):
    parent = list(range(n + 1))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for labels in blacks_labels:
        first = labels[0]
        for other in labels[1:]:
            ra, rb = find(first), find(other)
            if ra != rb:
                parent[ra] = rb
    roots = {find(i) for i in range(1, n + 1)}
    return len(roots) == 1


def betti1(graph):
    """E - V + 1."""
    E = len(graph.edges())
    V = graph.n + len(graph.blacks)
    return E - V + 1


def automorphism_count(graph):
    """Identical black vertices permute; parallel edges with equal decoration permute."""
    total = 1
    for mult in Counter(graph.blacks).values():
        total *= factorial(mult)
    for _, D in graph.vertex_data():
        for size in Counter(D).values():
            total *= factorial(size)
    return total


def brute_force_automorphisms(graph):
    """Count edge permutations preserving incidence, labels and decorations by exhaustion."""
    edges = graph.edges()
    genera = [g for g, _ in graph.vertex_data()]
    count = 0
    for perm in permutations(range(len(edges))):
        black_map = {}
        ok = True
        for e, f in enumerate(perm):
            b, label, h = edges[e]
            b2, label2, h2 = edges[f]
            if label != label2 or h != h2 or genera[b] != genera[b2]:
                ok = False
                break
            if black_map.setdefault(b, b2) != b2:
                ok = False
                break
        if ok and len(set(black_map.values())) == len(black_map):
            count += 1
    return count


def stats(graph):
    r = [0] * graph.n
    H = [0] * graph.n
    for _, label, h in graph.edges():
        r[label - 1] += 1
        H[label - 1] += h
    return GraphStats(tuple(r), tuple(H), betti1(graph), automorphism_count(graph))


@lru_cache(maxsize=None)
def _vertex_types(n, weight):
    """All (g_i, D) with g_i + sum(h + 1) == weight and D nonempty."""
    slots = [(label, h) for label in range(1, n + 1) for h in range(weight)]
    out = []

    def extend(start, remaining, acc):
        if acc:
            out.append((remaining, tuple(acc)))
        for i in range(start, len(slots)):
            label, h = slots[i]
            if h + 1 <= remaining:
                acc.append(slots[i])
                extend(i, remaining - h - 1, acc)
                acc.pop()

    extend(0, weight, [])
    return tuple(sorted((g, D) for g, D in out))


def _raw_decorated(n, g):
    """All decorated graphs of genus g, including the unstable cases (0,1) and (0,2)."""
    budget = g + n - 1
    result = []
    if n == 1 and g == 0:
        result.append(DecoratedGraph(1, ()))
    for B in range(1, budget + 1):
        excess = budget - B
        types = []
        for e in range(excess + 1):
            for vt in _vertex_types(n, e + 2):
                types.append((e, vt))
        types.sort(key=lambda t: t[1])

        def choose(start, left, remaining, acc):
            if left == 0:
                if remaining == 0:
                    blacks = tuple(sorted(acc))
                    if _connected(n, [tuple(lab for lab, _ in D) for _, D in blacks]):
                        result.append(DecoratedGraph(n, blacks))
                return
            for i in range(start, len(types)):
                e, vt = types[i]
                if e <= remaining:
                    acc.append(vt)
                    choose(i, left - 1, remaining - e, acc)
                    acc.pop()

        choose(0, B, excess, [])
    return sorted(set(result), key=_canonical_key)


def _canonical_key(graph):
    return (betti1(graph), len(graph.blacks), graph.blacks)


def enumerate_decorated(n, g):
    """The decorated graph set for (n, g), in canonical order; requires 2g - 2 + n > 0."""
    if n < 1 or g < 0 or 2 * g - 2 + n <= 0:
        raise ValueError("need n >= 1, g >= 0 and 2g - 2 + n > 0")
    return _raw_decorated(n, g)


def shadow(graph):
    """Forget decorations and drop univalent black vertices."""
    blacks = tuple(sorted(tuple(lab for lab, _ in D) for _, D in graph.blacks if len(D) >= 2))
    return PlainGraph(graph.n, blacks)


def minimal_order(graph):
    """Lowest hbar power a plain graph contributes: 2 b1 - 2 + n."""
    return 2 * betti1(graph) - 2 + graph.n


def enumerate_plain(n, max_euler):
    """Plain graphs with minimal hbar order <= max_euler, as shadows of decorated graphs."""
    if max_euler < n - 2:
        return []
    found = set()
    g = 0
    while 2 * g - 2 + n <= max_euler:
        for dg in _raw_decorated(n, g):
            pg = shadow(dg)
            if minimal_order(pg) <= max_euler:
                found.add(pg)
        g += 1
    return sorted(found, key=lambda p: (betti1(p), len(p.blacks), p.blacks))


def enumerate_trees(n):
    """Labelled trees in the plain set, enumerated directly.

    Black vertices are subsets of {1..n} of size >= 2; a connected family with
    sum(|I| - 1) = n - 1 is exactly a tree.
    """
    subsets = [c for k in range(2, n + 1) for c in combinations(range(1, n + 1), k)]
    out = []

    def pick(start, need, acc):
        if need == 0:
            if _connected(n, acc):
                out.append(PlainGraph(n, tuple(sorted(acc))))
            return
        for i in range(start, len(subsets)):
            s = subsets[i]
            if len(s) - 1 <= need:
                acc.append(s)
                pick(i + 1, need - len(s) + 1, acc)
                acc.pop()

    if n == 1:
        return [PlainGraph(1, ())]
    pick(0, n - 1, [])
    return sorted(out, key=lambda p: (len(p.blacks), p.blacks))
