"""Z^d-periodic graphs described by a finite quotient graph with edge indices.

A periodic graph is given by its quotient: vertices ``1..nu`` carrying a real
potential, and unoriented edges ``{u, v}`` carrying the integer index of the
stored orientation ``(u, v)``.  The reverse orientation always has the negated
index, so antisymmetry holds by construction.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

IntVec = tuple[int, ...]


class GraphFormatError(ValueError):
    """Raised when a graph document cannot be turned into a spec."""


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    index: IntVec


@dataclass(frozen=True)
class OneForm:
    """Antisymmetric map from oriented quotient edges to Z^d.

    Values are stored for the orientation ``(edge.u, edge.v)`` of each edge of
    the underlying spec, in edge order.
    """

    edges: tuple[tuple[int, int], ...]
    values: tuple[IntVec, ...]
    _lookup: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        lookup = {}
        for (u, v), t in zip(self.edges, self.values):
            lookup[(u, v)] = t
            lookup[(v, u)] = tuple(-x for x in t)
        object.__setattr__(self, "_lookup", lookup)

    def __call__(self, u: int, v: int) -> IntVec:
        try:
            return self._lookup[(u, v)]
        except KeyError:
            raise KeyError(f"no edge between {u} and {v}") from None

    def __contains__(self, pair) -> bool:
        return pair in self._lookup

    def oriented(self) -> Iterator[tuple[int, int, IntVec]]:
        """Both orientations of every edge (the doubled edge set)."""
        for (u, v), t in zip(self.edges, self.values):
            yield u, v, t
            yield v, u, tuple(-x for x in t)

    def replace(self, edge_id: int, value: Sequence[int]) -> "OneForm":
        values = list(self.values)
        values[edge_id] = tuple(int(x) for x in value)
        return OneForm(self.edges, tuple(values))


@dataclass(frozen=True)
class PeriodicGraphSpec:
    dimension: int
    potential: tuple[float, ...]
    edges: tuple[Edge, ...]

    @property
    def num_vertices(self) -> int:
        return len(self.potential)

    @property
    def vertices(self) -> range:
        return range(1, self.num_vertices + 1)

    def Q(self, v: int) -> float:
        return self.potential[v - 1]

    @property
    def index_form(self) -> OneForm:
        return OneForm(tuple((e.u, e.v) for e in self.edges), tuple(e.index for e in self.edges))

    def neighbors(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {v: [] for v in self.vertices}
        for e in self.edges:
            adj[e.u].append(e.v)
            adj[e.v].append(e.u)
        return adj

    def degrees(self) -> dict[int, int]:
        return {v: len(nb) for v, nb in self.neighbors().items()}

    def edge_id(self, u: int, v: int) -> int:
        for i, e in enumerate(self.edges):
            if {e.u, e.v} == {u, v}:
                return i
        raise KeyError(f"no edge between {u} and {v}")

    def with_potential(self, potential: Sequence[float]) -> "PeriodicGraphSpec":
        if len(potential) != self.num_vertices:
            raise ValueError(f"expected {self.num_vertices} potential values, got {len(potential)}")
        return PeriodicGraphSpec(self.dimension, tuple(float(q) for q in potential), self.edges)

    def without_edge(self, u: int, v: int) -> "PeriodicGraphSpec":
        i = self.edge_id(u, v)
        return PeriodicGraphSpec(self.dimension, self.potential, self.edges[:i] + self.edges[i + 1:])


def make_spec(dimension: int, potential: Sequence[float],
              edges: Iterable[tuple[int, int, Sequence[int] | int]]) -> PeriodicGraphSpec:
    """Build a spec from ``(u, v, index)`` triples; scalar indices are allowed for d = 1."""
    built = []
    for u, v, t in edges:
        t = (t,) if isinstance(t, (int, np.integer)) else tuple(t)
        built.append(Edge(int(u), int(v), tuple(int(x) for x in t)))
    return PeriodicGraphSpec(int(dimension), tuple(float(q) for q in potential), tuple(built))


# -- JSON documents ---------------------------------------------------------

def parse_graph(source: str | bytes | Mapping) -> PeriodicGraphSpec:
    """Parse a graph document (JSON text or an already decoded mapping)."""
    if isinstance(source, Mapping):
        doc = source
    else:
        try:
            doc = json.loads(source)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, Mapping):
        raise GraphFormatError("top-level document must be an object")
    for key in ("dimension", "vertices", "edges"):
        if key not in doc:
            raise GraphFormatError(f"missing key {key!r}")

    d = doc["dimension"]
    if isinstance(d, bool) or not isinstance(d, int) or d < 1:
        raise GraphFormatError(f"dimension must be a positive integer, got {d!r}")

    potential: dict[int, float] = {}
    for rec in doc["vertices"]:
        try:
            vid, q = rec["id"], rec["potential"]
        except (KeyError, TypeError) as exc:
            raise GraphFormatError(f"bad vertex record {rec!r}") from exc
        if isinstance(vid, bool) or not isinstance(vid, int):
            raise GraphFormatError(f"vertex id must be an integer, got {vid!r}")
        if vid in potential:
            raise GraphFormatError(f"duplicate vertex id {vid}")
        if isinstance(q, bool) or not isinstance(q, (int, float)) or not math.isfinite(q):
            raise GraphFormatError(f"vertex {vid}: potential must be a finite number")
        potential[vid] = float(q)
    nu = len(potential)
    if sorted(potential) != list(range(1, nu + 1)):
        raise GraphFormatError("vertex ids must be the contiguous range 1..nu")

    edges = []
    for rec in doc["edges"]:
        try:
            u, v, t = rec["u"], rec["v"], rec["index"]
        except (KeyError, TypeError) as exc:
            raise GraphFormatError(f"bad edge record {rec!r}") from exc
        for w in (u, v):
            if w not in potential:
                raise GraphFormatError(f"edge {{{u},{v}}} references unknown vertex {w}")
        if not isinstance(t, list) or len(t) != d:
            raise GraphFormatError(f"edge {{{u},{v}}}: index must be a list of length {d}")
        if any(isinstance(x, bool) or not isinstance(x, int) for x in t):
            raise GraphFormatError(f"edge {{{u},{v}}}: index entries must be integers")
        edges.append(Edge(u, v, tuple(t)))

    return PeriodicGraphSpec(d, tuple(potential[i] for i in range(1, nu + 1)), tuple(edges))


def graph_document(spec: PeriodicGraphSpec) -> dict:
    return {
        "dimension": spec.dimension,
        "vertices": [{"id": v, "potential": spec.Q(v)} for v in spec.vertices],
        "edges": [{"u": e.u, "v": e.v, "index": list(e.index)} for e in spec.edges],
    }


def dump_graph(spec: PeriodicGraphSpec) -> str:
    return json.dumps(graph_document(spec), indent=2)


def apply_potential_override(spec: PeriodicGraphSpec, source: str | Mapping) -> PeriodicGraphSpec:
    """Re-use a graph with the potential from an override document ``{"potential": {"1": q, ...}}``."""
    try:
        doc = json.loads(source) if isinstance(source, (str, bytes)) else source
        table = doc["potential"]
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise GraphFormatError("override document needs a 'potential' object") from exc
    q = list(spec.potential)
    for key, value in table.items():
        v = int(key)
        if not 1 <= v <= spec.num_vertices:
            raise GraphFormatError(f"override references unknown vertex {v}")
        q[v - 1] = float(value)
    return spec.with_potential(q)


# -- validation -------------------------------------------------------------

@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def smith_diagonal(rows: Sequence[Sequence[int]], ncols: int) -> list[int]:
    """Elementary divisors (nonzero diagonal of the Smith normal form) of an integer matrix."""
    a = [list(map(int, r)) for r in rows if any(r)]
    divisors = []
    col0 = 0
    while a and col0 < ncols:
        # pivot: smallest nonzero absolute entry
        entries = [(abs(x), i, j) for i, r in enumerate(a) for j, x in enumerate(r) if j >= col0 and x]
        if not entries:
            break
        _, pi, pj = min(entries)
        a[0], a[pi] = a[pi], a[0]
        for r in a:
            r[col0], r[pj] = r[pj], r[col0]
        while True:
            p = a[0][col0]
            done = True
            for r in a[1:]:
                f = r[col0] // p
                if f:
                    for j in range(col0, ncols):
                        r[j] -= f * a[0][j]
                if r[col0]:
                    done = False
            for j in range(col0 + 1, ncols):
                f = a[0][j] // p
                if f:
                    for r in a:
                        r[j] -= f * r[col0]
                if a[0][j]:
                    done = False
            if done:
                # divisibility of the remaining block
                bad = [(i, j) for i, r in enumerate(a[1:], 1) for j in range(col0 + 1, ncols) if r[j] % p]
                if not bad:
                    break
                i, _ = bad[0]
                for j in range(col0, ncols):
                    a[0][j] += a[i][j]
                continue
            entries = [(abs(r[col0]), i, col0) for i, r in enumerate(a) if r[col0]]
            entries += [(abs(a[0][j]), 0, j) for j in range(col0, ncols) if a[0][j]]
            _, pi, pj = min(entries)
            a[0], a[pi] = a[pi], a[0]
            for r in a:
                r[col0], r[pj] = r[pj], r[col0]
        divisors.append(abs(a[0][col0]))
        a = [r for r in a[1:] if any(r[col0 + 1:])]
        col0 += 1
    return divisors


def _components(spec: PeriodicGraphSpec) -> list[set[int]]:
    adj = spec.neighbors()
    seen: set[int] = set()
    comps = []
    for s in spec.vertices:
        if s in seen:
            continue
        comp = {s}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in comp:
                    comp.add(y)
                    queue.append(y)
        seen |= comp
        comps.append(comp)
    return comps


def fundamental_cycle_indices(spec: PeriodicGraphSpec) -> list[IntVec]:
    """Indices of the fundamental cycles of a BFS spanning forest."""
    adj = spec.neighbors()
    form = spec.index_form
    pos: dict[int, np.ndarray] = {}
    tree: set[frozenset] = set()
    for s in spec.vertices:
        if s in pos:
            continue
        pos[s] = np.zeros(spec.dimension, dtype=np.int64)
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in pos:
                    pos[y] = pos[x] + np.asarray(form(x, y))
                    tree.add(frozenset((x, y)))
                    queue.append(y)
    out = []
    for e in spec.edges:
        if frozenset((e.u, e.v)) in tree:
            continue
        out.append(tuple(int(x) for x in np.asarray(e.index) - (pos[e.v] - pos[e.u])))
    return out


def validate(spec: PeriodicGraphSpec) -> ValidationReport:
    problems = []
    if spec.num_vertices == 0:
        return ValidationReport(("graph has no vertices",))
    seen: dict[frozenset, int] = {}
    for i, e in enumerate(spec.edges):
        if len(e.index) != spec.dimension:
            problems.append(f"edge #{i} {{{e.u},{e.v}}}: index has length {len(e.index)}, expected {spec.dimension}")
        if e.u == e.v:
            problems.append(f"edge #{i}: loop at vertex {e.u}")
            continue
        for w in (e.u, e.v):
            if not 1 <= w <= spec.num_vertices:
                problems.append(f"edge #{i}: unknown vertex {w}")
        key = frozenset((e.u, e.v))
        if key in seen:
            problems.append(f"edge #{i}: multiple edge {{{e.u},{e.v}}} (already edge #{seen[key]})")
        else:
            seen[key] = i
    if problems:
        return ValidationReport(tuple(problems))

    comps = _components(spec)
    if len(comps) > 1:
        problems.append(f"quotient graph is disconnected ({len(comps)} components)")

    divisors = smith_diagonal(fundamental_cycle_indices(spec), spec.dimension)
    if len(divisors) < spec.dimension:
        problems.append(f"cycle index lattice has rank {len(divisors)} < d={spec.dimension}")
    elif any(x != 1 for x in divisors):
        problems.append(f"cycle index lattice is a proper sublattice of Z^{spec.dimension} "
                        f"(elementary divisors {divisors})")
    return ValidationReport(tuple(problems))


# -- indices from an embedding ------------------------------------------------

def derive_indices(positions: Mapping[int, Sequence[float]],
                   geometric_edges: Iterable[tuple[Sequence[float], Sequence[float]]],
                   atol: float = 1e-9) -> list[tuple[int, int, IntVec]]:
    """Recover ``(u, v, index)`` triples from an embedding of the periodic graph.

    ``positions`` maps each quotient vertex to its representative in the unit
    cell; each geometric edge is a pair of points of the periodic graph.
    """
    reps = {v: np.asarray(p, dtype=float) for v, p in positions.items()}
    for v, p in reps.items():
        if np.any(p < -atol) or np.any(p >= 1 - atol):
            raise ValueError(f"representative of vertex {v} is not in the unit cell")

    def locate(x):
        x = np.asarray(x, dtype=float)
        cell = np.floor(x + atol)
        frac = x - cell
        for v, p in reps.items():
            if np.allclose(frac, p, atol=atol):
                return v, cell.astype(int)
        raise ValueError(f"point {tuple(x)} matches no vertex representative modulo Z^d")

    out = []
    for x, y in geometric_edges:
        u, cu = locate(x)
        v, cv = locate(y)
        out.append((u, v, tuple(int(t) for t in cv - cu)))
    return out
