"""Numeric defaults shared by the library and the CLI; echoed into every report."""

from __future__ import annotations

import os

# k-grid points per axis, by lattice dimension
DEFAULT_GRID = {1: 1024, 2: 64, 3: 16}
DEFAULT_GRID_FALLBACK = 8

MU_MIN = 1e2
MU_MAX = 1e4
MU_POINTS = 5

MERGE_TOL = 1e-12          # band intervals closer than this are merged
FLAT_WIDTH = 1e-13         # clusters below this width at every mu are "flat"
HERMITIAN_TOL = 1e-12
DEFAULT_BUDGET = 2e9       # ceiling on N^d * nu^3
GENERIC_K = (0.7, 1.3, 1.9)

THREADS_ENV = "PERISPEC_THREADS"


def default_grid(dimension: int) -> int:
    return DEFAULT_GRID.get(dimension, DEFAULT_GRID_FALLBACK)


def generic_k(dimension: int) -> tuple[float, ...]:
    base = GENERIC_K * (dimension // len(GENERIC_K) + 1)
    return base[:dimension]


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def as_dict() -> dict:
    return {
        "grid_by_dimension": dict(DEFAULT_GRID),
        "mu_min": MU_MIN,
        "mu_max": MU_MAX,
        "mu_points": MU_POINTS,
        "merge_tol": MERGE_TOL,
        "flat_width": FLAT_WIDTH,
        "budget": DEFAULT_BUDGET,
        "generic_k": GENERIC_K,
    }
