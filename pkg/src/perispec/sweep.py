"""Large-coupling experiments: band clusters near mu*a and their decay rates."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import config
from .cycles import distances_to_set, level_sets, shortest_nontrivial_cycle
from .floquet import BandStructure, band_structure, floquet_matrix, spectrum_measure
from .graph_model import PeriodicGraphSpec


class ClusterOverlap(RuntimeError):
    """Bands near different potential values are not separated; increase mu."""

    def __init__(self, message: str, mu: float | None = None):
        super().__init__(message)
        self.mu = mu


@dataclass(frozen=True)
class SpectralCluster:
    value: float
    multiplicity: int
    first_band: int                 # 1-based index of the lowest band of the block
    band_widths: tuple[float, ...]
    span: float                     # max upper endpoint - min lower endpoint

    @property
    def bands(self) -> range:
        return range(self.first_band, self.first_band + self.multiplicity)

    @property
    def width(self) -> float:
        """Widest single band of the block."""
        return max(self.band_widths)


def _ordered_values(spec: PeriodicGraphSpec, mu: float) -> list[tuple[float, int]]:
    level = level_sets(spec)
    return sorted(((a, len(vs)) for a, vs in level.items()), key=lambda p: (mu * p[0], p[0]))


def _separation_radius(spec: PeriodicGraphSpec, mu: float) -> float:
    values = sorted(set(spec.potential))
    if len(values) < 2:
        return math.inf
    return abs(mu) * min(b - a for a, b in zip(values, values[1:])) / 2


def cluster_bands(spec: PeriodicGraphSpec, mu: float, bs: BandStructure) -> list[SpectralCluster]:
    radius = _separation_radius(spec, mu)
    lower, upper = bs.lower, bs.upper
    clusters = []
    start = 0
    for a, m in _ordered_values(spec, mu):
        lo, hi = lower[start:start + m], upper[start:start + m]
        centre = mu * a
        if np.any(np.abs(lo - centre) >= radius) or np.any(np.abs(hi - centre) >= radius):
            raise ClusterOverlap(f"bands {start + 1}..{start + m} are not within {radius:.3g} of "
                                 f"mu*a = {centre:.6g} at mu = {mu:.6g}", mu)
        clusters.append(SpectralCluster(a, m, start + 1, tuple((hi - lo).tolist()),
                                        float(hi.max() - lo.min())))
        start += m
    return clusters


def fit_decay_exponent(points: Sequence[tuple[float, float]]) -> tuple[float, float]:
    """Least-squares slope of ln(width) against ln(mu), with its standard error."""
    if len(points) < 3:
        raise ValueError("need at least 3 points")
    x = np.array([p[0] for p in points], dtype=float)
    y = np.array([p[1] for p in points], dtype=float)
    if np.any(y <= 0) or np.any(x <= 0):
        raise ValueError("widths and mu values must be positive")
    lx, ly = np.log(x), np.log(y)
    dx = lx - lx.mean()
    sxx = dx @ dx
    slope = (dx @ (ly - ly.mean())) / sxx
    resid = ly - ly.mean() - slope * dx
    stderr = np.sqrt(resid @ resid / (len(x) - 2) / sxx)
    return float(slope), float(stderr)


def geometric_grid(mu_min: float, mu_max: float, points: int) -> np.ndarray:
    return np.geomspace(mu_min, mu_max, points)


def _check_geometric(mus: np.ndarray):
    if len(mus) < 4:
        raise ValueError("sweep needs at least 4 mu values")
    if np.any(mus <= 0) or np.any(np.diff(mus) <= 0):
        raise ValueError("mu values must be positive and ascending")
    ratios = mus[1:] / mus[:-1]
    if not np.allclose(ratios, ratios[0], rtol=1e-6):
        raise ValueError("mu values must form a geometric grid")


@dataclass
class SweepResult:
    mus: np.ndarray
    total_measure: np.ndarray
    total_bandwidth: np.ndarray
    cluster_widths: dict[float, np.ndarray]
    clusters: list[list[SpectralCluster]]
    grid: int
    flat: frozenset = field(default_factory=frozenset)

    def slope(self, value: float | None = None, mu_max: float | None = None) -> tuple[float, float]:
        """Fitted decay slope of one cluster (or of the total measure when ``value`` is None)."""
        widths = self.total_measure if value is None else self.cluster_widths[value]
        keep = self.mus <= mu_max * (1 + 1e-12) if mu_max is not None else np.ones(len(self.mus), bool)
        return fit_decay_exponent(list(zip(self.mus[keep], widths[keep])))

    @property
    def cluster_slopes(self) -> dict[float, tuple[float, float] | None]:
        return {a: None if a in self.flat else self.slope(a) for a in self.cluster_widths}


def sweep(spec: PeriodicGraphSpec, mus: Sequence[float], n: int | None = None,
          threads: int | None = None, budget: float = config.DEFAULT_BUDGET) -> SweepResult:
    mus = np.asarray(mus, dtype=float)
    _check_geometric(mus)
    n = n or config.default_grid(spec.dimension)

    def one(mu):
        bs = band_structure(spec, mu, n, budget=budget)
        union, total = spectrum_measure(bs)
        return union.measure, total, cluster_bands(spec, mu, bs)

    with ThreadPoolExecutor(max_workers=threads or config.thread_count()) as pool:
        results = list(pool.map(one, mus))

    values = [c.value for c in results[0][2]]
    widths = {a: np.array([r[2][i].width for r in results]) for i, a in enumerate(values)}
    flat = frozenset(a for a, w in widths.items() if np.all(w < config.FLAT_WIDTH))
    return SweepResult(mus, np.array([r[0] for r in results]), np.array([r[1] for r in results]),
                       widths, [r[2] for r in results], n, flat)


# -- one-dimensional comparison -------------------------------------------------

def last_distances(sequence: Sequence[float]) -> dict[float, int]:
    """Largest gap between consecutive occurrences of each value in the periodic extension."""
    if not sequence:
        raise ValueError("sequence must be nonempty")
    nu = len(sequence)
    positions: dict[float, list[int]] = {}
    for i, q in enumerate(sequence):
        positions.setdefault(q, []).append(i)
    out = {}
    for a, pos in positions.items():
        gaps = [b - a_ for a_, b in zip(pos, pos[1:])] + [pos[0] + nu - pos[-1]]
        out[a] = max(gaps)
    return out


def last_gamma(sequence: Sequence[float]) -> int:
    return min(last_distances(sequence).values())


# -- total-bandwidth lower bound -------------------------------------------------

@dataclass(frozen=True)
class LowerBoundReport:
    mu: float
    bound: float            # unoriented cycle count (recorded convention)
    bound_oriented: float   # cycles and their reversals counted separately
    measured: float         # total bandwidth on the k-grid
    q: float
    kappa: int
    gamma: int
    n_gamma_plus: int

    @property
    def passed(self) -> bool:
        return self.measured >= self.bound


def total_bandwidth_bound(n_cycles: int, gamma: int, q: float, kappa: int, mu: float) -> float:
    return n_cycles * mu ** (1 - gamma) / (gamma * (q + kappa / mu) ** (gamma - 1))


def lower_bound_total_bandwidth(spec: PeriodicGraphSpec, mu: float, n: int | None = None,
                                bs: BandStructure | None = None) -> LowerBoundReport:
    if mu <= 0:
        raise ValueError("mu must be positive")
    gamma, count = shortest_nontrivial_cycle(spec)
    q = max(spec.potential) - min(spec.potential)
    kappa = max(spec.degrees().values())
    bs = bs or band_structure(spec, mu, n)
    return LowerBoundReport(
        mu=mu,
        bound=total_bandwidth_bound(count, gamma, q, kappa, mu),
        bound_oriented=total_bandwidth_bound(2 * count, gamma, q, kappa, mu),
        measured=bs.total_bandwidth,
        q=q, kappa=kappa, gamma=gamma, n_gamma_plus=count,
    )


# -- eigenvector decay ------------------------------------------------------------

@dataclass(frozen=True)
class DecayRow:
    vertex: int
    target: int
    exponent: float
    stderr: float
    amplitudes: tuple[float, ...]


def eigenvector_decay_check(spec: PeriodicGraphSpec, a: float, k: Sequence[float] | None = None,
                            mus: Sequence[float] | None = None) -> list[DecayRow]:
    """Fit |phi(k, v)| ~ eps^p, eps = 1/mu, over the eigenvectors of the a-cluster.

    The amplitude at v is the max over the cluster's eigenvectors.  A vertex
    whose amplitude vanishes to round-off gets exponent +inf.
    """
    level = level_sets(spec)
    if a not in level:
        raise ValueError(f"{a!r} is not a potential value")
    k = config.generic_k(spec.dimension) if k is None else tuple(k)
    mus = np.asarray(mus if mus is not None else [1e2, 1e3, 1e4], dtype=float)
    target = distances_to_set(spec, level[a])

    amps = []
    for mu in mus:
        order = _ordered_values(spec, mu)
        start = 0
        for value, m in order:
            if value == a:
                break
            start += m
        m = len(level[a])
        w, vecs = np.linalg.eigh(floquet_matrix(spec, mu, k))
        radius = _separation_radius(spec, mu)
        if np.any(np.abs(w[start:start + m] - mu * a) >= radius):
            raise ClusterOverlap(f"cluster of a = {a} is not separated at mu = {mu:.6g}", mu)
        amps.append(np.abs(vecs[:, start:start + m]).max(axis=1))
    amps = np.array(amps)  # (len(mus), nu)

    rows = []
    floor = 1e-300
    for v in spec.vertices:
        col = amps[:, v - 1]
        if np.any(col <= floor):
            slope, err = math.inf, math.nan
        else:
            # widths in eps = 1/mu: exponent p means amplitude ~ mu^-p
            s, err = fit_decay_exponent(list(zip(mus, col)))
            slope = -s
        rows.append(DecayRow(v, target[v], slope, err, tuple(col.tolist())))
    return rows
