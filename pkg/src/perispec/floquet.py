"""Floquet matrices, band structures and spectrum measures.

For k in the torus [0, 2pi)^d the Floquet matrix has ``mu * Q(v)`` on the
diagonal and ``exp(i <tau(u, v), k>)`` at (u, v) for each oriented quotient
edge.  Band j is the range of the j-th smallest eigenvalue over k; the
spectrum is the union of the bands.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from . import config
from .cycles import GaugeForm
from .graph_model import OneForm, PeriodicGraphSpec


class BudgetExceeded(RuntimeError):
    pass


def _form_of(spec: PeriodicGraphSpec, form: OneForm | GaugeForm | None) -> OneForm:
    if form is None:
        return spec.index_form
    if isinstance(form, GaugeForm):
        return form.form
    return form


def _edge_arrays(spec, form):
    rows = np.array([u - 1 for u, _ in form.edges], dtype=int)
    cols = np.array([v - 1 for _, v in form.edges], dtype=int)
    tau = np.array(form.values, dtype=float).reshape(len(form.edges), spec.dimension)
    return rows, cols, tau


def floquet_batch(spec: PeriodicGraphSpec, mu: float, ks: np.ndarray,
                  form: OneForm | GaugeForm | None = None) -> np.ndarray:
    """Floquet matrices at every row of ``ks`` (shape (m, d)); returns (m, nu, nu)."""
    form = _form_of(spec, form)
    ks = np.atleast_2d(np.asarray(ks, dtype=float))
    if ks.shape[1] != spec.dimension:
        raise ValueError(f"k must have {spec.dimension} components")
    nu = spec.num_vertices
    h = np.zeros((ks.shape[0], nu, nu), dtype=complex)
    idx = np.arange(nu)
    h[:, idx, idx] = mu * np.asarray(spec.potential)
    if form.edges:
        rows, cols, tau = _edge_arrays(spec, form)
        phase = np.exp(1j * ks @ tau.T)
        h[:, rows, cols] += phase
        h[:, cols, rows] += phase.conj()
    return h


def floquet_matrix(spec: PeriodicGraphSpec, mu: float, k: Sequence[float],
                   form: OneForm | GaugeForm | None = None) -> np.ndarray:
    k = np.asarray(k, dtype=float).ravel()
    if k.size != spec.dimension:
        raise ValueError(f"k must have {spec.dimension} components, got {k.size}")
    return floquet_batch(spec, mu, k[None, :], form)[0]


def hermitian_eigen(m: np.ndarray, tol: float = config.HERMITIAN_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvectors (columns) of a Hermitian matrix."""
    m = np.asarray(m)
    if m.ndim < 2 or m.shape[-1] != m.shape[-2]:
        raise ValueError("expected a square matrix")
    if not np.allclose(m, np.conj(np.swapaxes(m, -1, -2)), rtol=0.0, atol=tol):
        raise ValueError("matrix is not Hermitian")
    return np.linalg.eigh(m)


def k_grid(dimension: int, n: int) -> np.ndarray:
    """Uniform grid {2 pi m / n}^d in grid-index order; shape (n^d, d)."""
    axis = 2 * np.pi * np.arange(n) / n
    return np.array(list(product(axis, repeat=dimension)), dtype=float).reshape(-1, dimension)


@dataclass(frozen=True)
class BandStructure:
    mu: float
    n: int
    dimension: int
    ks: np.ndarray           # (n^d, d)
    eigenvalues: np.ndarray  # (n^d, nu), ascending per row

    @property
    def lower(self) -> np.ndarray:
        return self.eigenvalues.min(axis=0)

    @property
    def upper(self) -> np.ndarray:
        return self.eigenvalues.max(axis=0)

    @property
    def widths(self) -> np.ndarray:
        return self.upper - self.lower

    @property
    def band_intervals(self) -> list[tuple[float, float]]:
        return list(zip(self.lower.tolist(), self.upper.tolist()))

    @property
    def total_bandwidth(self) -> float:
        return float(self.widths.sum())


def _check_budget(spec, n, budget):
    cost = float(n) ** spec.dimension * spec.num_vertices ** 3
    if cost > budget:
        raise BudgetExceeded(f"N^d * nu^3 = {cost:.3g} exceeds the budget {budget:.3g}")


def band_structure(spec: PeriodicGraphSpec, mu: float, n: int | None = None,
                   form: OneForm | GaugeForm | None = None,
                   budget: float = config.DEFAULT_BUDGET, chunk: int = 4096) -> BandStructure:
    n = n or config.default_grid(spec.dimension)
    if n < 2:
        raise ValueError("grid needs at least 2 points per axis")
    _check_budget(spec, n, budget)
    ks = k_grid(spec.dimension, n)
    ev = np.empty((ks.shape[0], spec.num_vertices))
    for start in range(0, ks.shape[0], chunk):
        block = floquet_batch(spec, mu, ks[start:start + chunk], form)
        ev[start:start + chunk] = np.linalg.eigvalsh(block)
    return BandStructure(mu, n, spec.dimension, ks, ev)


@dataclass(frozen=True)
class IntervalUnion:
    intervals: tuple[tuple[float, float], ...]

    @classmethod
    def from_intervals(cls, intervals: Iterable[tuple[float, float]],
                       tol: float = config.MERGE_TOL) -> "IntervalUnion":
        merged: list[list[float]] = []
        for lo, hi in sorted(intervals):
            if lo > hi:
                raise ValueError(f"empty interval [{lo}, {hi}]")
            if merged and lo <= merged[-1][1] + tol:
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        return cls(tuple((a, b) for a, b in merged))

    @property
    def measure(self) -> float:
        return float(sum(b - a for a, b in self.intervals))

    def __contains__(self, x: float) -> bool:
        return any(a <= x <= b for a, b in self.intervals)


def spectrum_measure(bs: BandStructure | Sequence[tuple[float, float]],
                     tol: float = config.MERGE_TOL) -> tuple[IntervalUnion, float]:
    """Merged spectrum and the total bandwidth (sum of band widths, overlaps counted twice)."""
    bands = bs.band_intervals if isinstance(bs, BandStructure) else list(bs)
    total = float(sum(b - a for a, b in bands))
    return IntervalUnion.from_intervals(bands, tol), total


def band_width_bound(spec: PeriodicGraphSpec, mu: float, band: int, n: int | None = None,
                     form: OneForm | GaugeForm | None = None) -> float:
    """Grid maximum of 2 pi d * sum_{tau(e) != 0} |tau(e)| |phi_n(u)| |phi_n(v)|.

    The sum runs over both orientations of each edge with nonzero index;
    ``band`` is 1-based.
    """
    if not 1 <= band <= spec.num_vertices:
        raise ValueError(f"band must be in 1..{spec.num_vertices}")
    form = _form_of(spec, form)
    n = n or config.default_grid(spec.dimension)
    ks = k_grid(spec.dimension, n)
    _, vecs = np.linalg.eigh(floquet_batch(spec, mu, ks, form))
    amp = np.abs(vecs[:, :, band - 1])  # (m, nu)
    total = np.zeros(ks.shape[0])
    for (u, v), t in zip(form.edges, form.values):
        norm = float(np.linalg.norm(t))
        if norm:
            total += 2 * norm * amp[:, u - 1] * amp[:, v - 1]
    return float(2 * np.pi * spec.dimension * total.max())


def gauge_equivalence_check(spec: PeriodicGraphSpec, gauge: OneForm | GaugeForm, mu: float,
                            n: int = 16) -> float:
    """Max over the grid of the sorted-eigenvalue discrepancy between the stored form and ``gauge``."""
    ks = k_grid(spec.dimension, n)
    a = np.linalg.eigvalsh(floquet_batch(spec, mu, ks))
    b = np.linalg.eigvalsh(floquet_batch(spec, mu, ks, gauge))
    return float(np.abs(a - b).max())


def dispersion_rows(bs: BandStructure) -> list[list[float]]:
    return [list(k) + list(ev) for k, ev in zip(bs.ks.tolist(), bs.eigenvalues.tolist())]
