"""Level sets, distances, edge weights and the degeneracy exponents omega(a), omega.

omega(a) is a bottleneck quantity: the smallest threshold w such that the
edges of weight <= w carry a cycle with nonzero index.  It is computed by a
Kruskal sweep over a union-find that keeps Z^d offsets to the root, so the
index of each closing cycle is available in near-constant time.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .graph_model import IntVec, OneForm, PeriodicGraphSpec


class OffsetUnionFind:
    """Disjoint sets whose members carry an offset in Z^d relative to their root.

    ``offset(x)`` is the position of ``x`` minus the position of its root; a
    union along edge (u, v) with index t enforces ``pos(v) - pos(u) = t``.
    """

    def __init__(self, elements: Iterable[int], dimension: int):
        self.parent = {x: x for x in elements}
        self.rank = {x: 0 for x in self.parent}
        self.delta = {x: np.zeros(dimension, dtype=np.int64) for x in self.parent}

    def find(self, x: int) -> tuple[int, np.ndarray]:
        path = []
        while self.parent[x] != x:
            path.append(x)
            x = self.parent[x]
        root = x
        # compress, accumulating offsets from the top of the path down
        acc = np.zeros_like(self.delta[root])
        for y in reversed(path):
            acc = acc + self.delta[y]
            self.delta[y] = acc.copy()
            self.parent[y] = root
        return root, (self.delta[path[0]] if path else np.zeros_like(self.delta[root]))

    def union(self, u: int, v: int, t: Sequence[int]) -> np.ndarray | None:
        """Join along an edge; returns None on a merge, else the index of the closed cycle."""
        ru, du = self.find(u)
        rv, dv = self.find(v)
        t = np.asarray(t, dtype=np.int64)
        if ru == rv:
            return t - (dv - du)
        # pos(rv) - pos(ru) = du + t - dv
        shift = du + t - dv
        if self.rank[ru] < self.rank[rv]:
            ru, rv, shift = rv, ru, -shift
        self.parent[rv] = ru
        self.delta[rv] = shift
        if self.rank[ru] == self.rank[rv]:
            self.rank[ru] += 1
        return None


def level_sets(spec: PeriodicGraphSpec) -> dict[float, frozenset[int]]:
    groups: dict[float, set[int]] = {}
    for v in spec.vertices:
        groups.setdefault(spec.Q(v), set()).add(v)
    return {a: frozenset(vs) for a, vs in sorted(groups.items())}


def distances_to_set(spec: PeriodicGraphSpec, targets: Iterable[int]) -> dict[int, int]:
    """Multi-source BFS distances in the quotient graph."""
    targets = set(targets)
    if not targets:
        raise ValueError("target set must be nonempty")
    adj = spec.neighbors()
    dist = {v: 0 for v in targets}
    queue = deque(sorted(targets))
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    if len(dist) < spec.num_vertices:
        raise ValueError("quotient graph is disconnected")
    return {v: dist[v] for v in spec.vertices}


@dataclass(frozen=True)
class WeightAssignment:
    value: float
    vertex_distance: dict[int, int]
    edge_weight: tuple[int, ...]  # aligned with spec.edges


def edge_weights(spec: PeriodicGraphSpec, a: float) -> WeightAssignment:
    level = level_sets(spec)
    if a not in level:
        raise ValueError(f"{a!r} is not a potential value")
    dist = distances_to_set(spec, level[a])
    weights = tuple(dist[e.u] + dist[e.v] for e in spec.edges)
    return WeightAssignment(a, dist, weights)


def _kruskal_order(weights: Sequence[int]) -> list[int]:
    return sorted(range(len(weights)), key=lambda i: (weights[i], i))


def omega_of_value(spec: PeriodicGraphSpec, a: float) -> int:
    w = edge_weights(spec, a).edge_weight
    uf = OffsetUnionFind(spec.vertices, spec.dimension)
    for i in _kruskal_order(w):
        e = spec.edges[i]
        closed = uf.union(e.u, e.v, e.index)
        if closed is not None and closed.any():
            return w[i]
    raise ValueError("no cycle with nonzero index; is the graph valid?")


@dataclass(frozen=True)
class ExponentReport:
    omega_by_value: dict[float, int]
    omega: int
    gamma: int
    n_gamma_plus: int
    level: dict[float, frozenset[int]]


def omega(spec: PeriodicGraphSpec) -> ExponentReport:
    by_value = {a: omega_of_value(spec, a) for a in level_sets(spec)}
    gamma, count = shortest_nontrivial_cycle(spec)
    return ExponentReport(by_value, min(by_value.values()), gamma, count, level_sets(spec))


def cycle_index(spec: PeriodicGraphSpec, path: Sequence[int], form: OneForm | None = None) -> IntVec:
    form = form or spec.index_form
    total = np.zeros(spec.dimension, dtype=np.int64)
    for x, y in zip(path, path[1:]):
        if (x, y) not in form:
            raise ValueError(f"vertices {x} and {y} are not adjacent")
        total += np.asarray(form(x, y))
    return tuple(int(t) for t in total)


def simple_cycles(spec: PeriodicGraphSpec, max_length: int | None = None) -> list[tuple[int, ...]]:
    """All simple cycles (length >= 3), each listed once as a closed vertex tuple.

    A cycle is written from its smallest vertex, in the direction whose second
    vertex is smaller than its last one, so reversals and rotations coincide.
    """
    adj = {v: sorted(nb) for v, nb in spec.neighbors().items()}
    limit = max_length or spec.num_vertices
    out = []

    def extend(path, on_path):
        x = path[-1]
        for y in adj[x]:
            if y == path[0] and len(path) >= 3 and path[1] < path[-1]:
                out.append(tuple(path) + (path[0],))
            elif y > path[0] and y not in on_path and len(path) < limit:
                path.append(y)
                on_path.add(y)
                extend(path, on_path)
                on_path.discard(y)
                path.pop()

    for s in spec.vertices:
        extend([s], {s})
    return out


def nontrivial_cycles(spec: PeriodicGraphSpec, max_length: int | None = None) -> list[tuple[int, ...]]:
    return [c for c in simple_cycles(spec, max_length) if any(cycle_index(spec, c))]


def shortest_nontrivial_cycle(spec: PeriodicGraphSpec) -> tuple[int, int]:
    """(gamma, N_gamma^+): shortest length of a nonzero-index cycle and how many there are.

    Cycles are counted unoriented: a cycle, its reversal and its rotations count once.
    """
    # iterative deepening keeps the enumeration bounded by cycles of length <= gamma
    for length in range(3, spec.num_vertices + 1):
        found = [c for c in nontrivial_cycles(spec, length) if len(c) - 1 == length]
        if found:
            return length, len(found)
    raise ValueError("no cycle with nonzero index; is the graph valid?")


def lifted_girth(spec: PeriodicGraphSpec) -> int:
    """Shortest closed walk with nonzero index, by BFS over (vertex, cell) states.

    A shortest such walk is a simple cycle, so this equals gamma.
    """
    form = spec.index_form
    adj = spec.neighbors()
    nu = spec.num_vertices
    zero = (0,) * spec.dimension
    best = None
    for s in spec.vertices:
        seen = {(s, zero): 0}
        queue = deque([(s, zero)])
        while queue:
            x, cell = queue.popleft()
            depth = seen[(x, cell)]
            if best is not None and depth + 1 >= best or depth >= nu:
                break
            for y in adj[x]:
                nxt = tuple(c + t for c, t in zip(cell, form(x, y)))
                if y == s and nxt != zero:
                    best = depth + 1 if best is None else min(best, depth + 1)
                if (y, nxt) not in seen:
                    seen[(y, nxt)] = depth + 1
                    queue.append((y, nxt))
    if best is None:
        raise ValueError("no cycle with nonzero index; is the graph valid?")
    return best


@dataclass(frozen=True)
class GaugeForm:
    value: float
    tree_edges: frozenset[int]  # edge ids of the minimum spanning tree
    form: OneForm


def mst_gauge(spec: PeriodicGraphSpec, a: float) -> GaugeForm:
    """Re-gauged index form vanishing on a minimum spanning tree for the weights of ``a``."""
    w = edge_weights(spec, a).edge_weight
    uf = OffsetUnionFind(spec.vertices, spec.dimension)
    tree = set()
    for i in _kruskal_order(w):
        e = spec.edges[i]
        if uf.union(e.u, e.v, e.index) is None:
            tree.add(i)
    # offsets along the final tree give every fundamental cycle index
    values = []
    for i, e in enumerate(spec.edges):
        if i in tree:
            values.append((0,) * spec.dimension)
        else:
            _, du = uf.find(e.u)
            _, dv = uf.find(e.v)
            values.append(tuple(int(x) for x in np.asarray(e.index) - (dv - du)))
    form = OneForm(tuple((e.u, e.v) for e in spec.edges), tuple(values))
    return GaugeForm(a, frozenset(tree), form)


def fundamental_cycles(spec: PeriodicGraphSpec, tree_edges: Iterable[int]) -> list[tuple[int, ...]]:
    """Closed vertex paths c_e, one per non-tree edge e = (u, v): u -> v then back through the tree."""
    tree_edges = set(tree_edges)
    adj: dict[int, list[int]] = {v: [] for v in spec.vertices}
    for i in tree_edges:
        e = spec.edges[i]
        adj[e.u].append(e.v)
        adj[e.v].append(e.u)

    def tree_path(src, dst):
        prev = {src: None}
        queue = deque([src])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in prev:
                    prev[y] = x
                    queue.append(y)
        path = [dst]
        while path[-1] != src:
            path.append(prev[path[-1]])
        return path[::-1]

    out = []
    for i, e in enumerate(spec.edges):
        if i not in tree_edges:
            out.append((e.u,) + tuple(tree_path(e.v, e.u)))
    return out
