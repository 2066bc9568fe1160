"""Exit criteria for the package, one test per criterion.

Each test records a PASS/FAIL line; the lines are printed together at the end
of the pytest run (see conftest.pytest_terminal_summary).
"""

import random
import time

import numpy as np
import pytest

from conftest import random_spec
from oracles import oracle_omega
from perispec.cycles import distances_to_set, level_sets, mst_gauge, omega, omega_of_value
from perispec.fixtures import TABLE1_POTENTIALS, fig1, zline
from perispec.floquet import (
    band_structure,
    band_width_bound,
    floquet_batch,
    gauge_equivalence_check,
    spectrum_measure,
)
from perispec.sweep import eigenvector_decay_check, last_gamma, lower_bound_total_bandwidth, sweep

ROW1, ROW2, ROW3 = (TABLE1_POTENTIALS[r] for r in ("row1", "row2", "row3"))
SWEEP_MUS = np.array([1e2, 10 ** 2.5, 1e3, 10 ** 3.5, 1e4])

RESULTS: list[str] = []


def record(label: str, ok: bool, detail: str):
    line = f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


# Reference values for the six-vertex fixture: potential -> {a: (d_1^a .. d_6^a, omega(a))}
TABLE1 = {
    ROW1: {1: ((0, 0, 0, 1, 2, 2), 0), 0: ((1, 1, 1, 0, 0, 0), 2)},
    ROW2: {1: ((0, 0, 1, 1, 2, 2), 1), 0: ((1, 1, 0, 0, 0, 0), 1)},
    ROW3: {1: ((0, 1, 1, 1, 2, 2), 2), 2: ((1, 0, 1, 1, 2, 2), 2), 3: ((1, 1, 0, 1, 2, 2), 2),
           4: ((1, 1, 1, 0, 1, 1), 2), 0: ((2, 2, 2, 1, 0, 0), 4)},
}
TABLE1_OMEGA = {ROW1: 0, ROW2: 1, ROW3: 2}


def test_c01_table1_exponents():
    start = time.perf_counter()
    got = {q: omega(fig1(q)) for q in TABLE1}
    elapsed = time.perf_counter() - start
    ok = all(
        got[q].omega_by_value == {a: w for a, (_, w) in row.items()} and got[q].omega == TABLE1_OMEGA[q]
        for q, row in TABLE1.items()
    ) and elapsed < 1.0
    detail = "; ".join(f"{q}: omega={got[q].omega} {dict(sorted(got[q].omega_by_value.items()))}" for q in TABLE1)
    record("C1 reference exponents", ok, f"{detail}; {elapsed:.3f}s")


def test_c02_table1_distances():
    mismatches, cells = [], 0
    for q, row in TABLE1.items():
        spec = fig1(q)
        level = level_sets(spec)
        for a, (expected, _) in row.items():
            d = distances_to_set(spec, level[a])
            cells += 6
            if tuple(d[v] for v in spec.vertices) != expected:
                mismatches.append((q, a))
    record("C2 reference distances", not mismatches, f"{cells} cells checked, mismatches={mismatches}")


def test_c03_example1_cycles():
    rep = omega(fig1())
    record("C3 shortest nontrivial cycles", (rep.gamma, rep.n_gamma_plus) == (3, 4),
           f"gamma={rep.gamma}, N_gamma_plus={rep.n_gamma_plus} (unoriented count)")


def test_c04_oracle_equivalence():
    rng = random.Random(404)
    start = time.perf_counter()
    bad, checked = [], 0
    for _ in range(200):
        spec = random_spec(rng, max_vertices=8, max_edges=14, dims=(1, 2), values=range(4))
        for a in level_sets(spec):
            checked += 1
            if omega_of_value(spec, a) != oracle_omega(spec, a):
                bad.append((spec, a))
    elapsed = time.perf_counter() - start
    record("C4 union-find omega(a) == exhaustive enumeration", not bad and elapsed < 60,
           f"200 specs, {checked} values, {len(bad)} mismatches, {elapsed:.1f}s")


def test_c05_last_reduction():
    rng = random.Random(505)
    bad = []
    for _ in range(100):
        seq = [rng.randint(0, 3) for _ in range(rng.randint(3, 8))]
        if last_gamma(seq) - 1 != omega(zline(len(seq), seq)).omega:
            bad.append(seq)
    record("C5 one-dimensional reduction", not bad, f"100 sequences, mismatches={bad}")


def test_c06_gauge_invariance():
    worst = 0.0
    for q in TABLE1:
        spec = fig1(q)
        for a in level_sets(spec):
            worst = max(worst, gauge_equivalence_check(spec, mst_gauge(spec, a), 10.0, 16))
    spec = fig1()
    g = mst_gauge(spec, 0.0)
    i = next(i for i, t in enumerate(g.form.values) if any(t))
    corrupted = g.form.replace(i, np.asarray(g.form.values[i]) + (1, 0))
    control = gauge_equivalence_check(spec, corrupted, 10.0, 16)
    record("C6 gauge invariance", worst <= 1e-10 and control > 1e-6,
           f"max discrepancy {worst:.2e} (<= 1e-10), corrupted control {control:.2e} (> 1e-6)")


def test_c07_flat_band():
    details, ok = [], True
    for q in TABLE1:
        for mu in (10.0, 100.0):
            bs = band_structure(fig1(q), mu, 64)
            hits = [(lo, hi) for lo, hi in bs.band_intervals
                    if abs(lo + 1) <= 1e-10 and abs(hi + 1) <= 1e-10 and hi - lo <= 1e-12]
            ok &= bool(hits)
            details.append(f"{q}@{mu:g}:{'yes' if hits else 'no'}")
    record("C7 flat band at -1", ok, ", ".join(details))


@pytest.fixture(scope="module")
def sweeps():
    start = time.perf_counter()
    out = {q: sweep(fig1(q), SWEEP_MUS, 64) for q in TABLE1}
    out["elapsed"] = time.perf_counter() - start
    return out


def test_c08_decay_slopes(sweeps):
    checks = []

    def check(name, value, lo, hi):
        checks.append((name, value, lo <= value <= hi, lo, hi))

    check("row2 total", sweeps[ROW2].slope()[0], -1.3, -0.7)
    for a in (1.0, 2.0, 3.0, 4.0):
        check(f"row3 a={a:g}", sweeps[ROW3].slope(a)[0], -2.3, -1.7)
    check("row3 a=0 (mu<=1e3)", sweeps[ROW3].slope(0.0, mu_max=1e3)[0], -4.5, -3.5)
    check("row1 a=1", sweeps[ROW1].slope(1.0)[0], -0.3, 0.3)
    check("row1 a=0", sweeps[ROW1].slope(0.0)[0], -2.3, -1.7)
    ok = all(c[2] for c in checks) and sweeps["elapsed"] < 300
    detail = "; ".join(f"{n}={v:.3f} in [{lo}, {hi}]" for n, v, _, lo, hi in checks)
    record("C8 large-coupling decay slopes", ok, f"{detail}; sweeps {sweeps['elapsed']:.1f}s")


def test_c09_band_width_bound():
    spec = fig1(ROW3)
    worst = -np.inf
    for mu in (10.0, 1000.0):
        bs = band_structure(spec, mu, 64)
        for n in range(1, spec.num_vertices + 1):
            worst = max(worst, bs.widths[n - 1] - band_width_bound(spec, mu, n, 64))
    record("C9 band-width bound", worst <= 1e-6, f"max(width - bound) = {worst:.3e} (<= 1e-6)")


def test_c10_lower_bound(sweeps):
    spec = fig1(ROW3)
    lines, ok = [], True
    for i, mu in enumerate(SWEEP_MUS):
        rep = lower_bound_total_bandwidth(spec, mu, 64)
        assert rep.measured == pytest.approx(sweeps[ROW3].total_bandwidth[i], rel=1e-12)
        ok &= rep.passed
        lines.append(f"mu={mu:.3g}: {rep.measured:.3e} >= {rep.bound:.3e} "
                     f"(oriented count: {rep.bound_oriented:.3e}, {'ok' if rep.measured >= rep.bound_oriented else 'below'})")
    record("C10 total-bandwidth lower bound", ok, "; ".join(lines))


def test_c11_eigenvector_decay():
    rows = eigenvector_decay_check(fig1(ROW3), 0.0, mus=[1e2, 1e3, 1e4])
    targets = [r.target for r in rows]
    ok = targets == [2, 2, 2, 1, 0, 0] and all(r.exponent >= r.target - 0.3 for r in rows)
    record("C11 eigenvector decay", ok,
           ", ".join(f"v{r.vertex}: {r.exponent:.3f} (target {r.target})" for r in rows))


def test_c12_property_suite(random_specs):
    specs = [fig1(q) for q in TABLE1] + [zline(3), zline(6, [0, 1, 0, 2, 3, 1])] + list(random_specs)
    rng = np.random.default_rng(12)
    fails = {"hermitian": 0, "k->-k": 0, "refinement": 0, "measure<=total": 0, "shift": 0}
    for spec in specs:
        ks = rng.uniform(0, 2 * np.pi, (16, spec.dimension))
        mu = float(rng.uniform(0.5, 20))
        h = floquet_batch(spec, mu, ks)
        fails["hermitian"] += not np.array_equal(h, np.conj(np.swapaxes(h, 1, 2)))
        sym = np.abs(np.linalg.eigvalsh(h) - np.linalg.eigvalsh(floquet_batch(spec, mu, -ks))).max()
        fails["k->-k"] += not sym <= 1e-10

        n = 32 if spec.dimension > 1 else 256
        coarse, fine = band_structure(spec, mu, n), band_structure(spec, mu, 2 * n)
        fails["refinement"] += not (np.all(fine.lower <= coarse.lower + 1e-9)
                                    and np.all(fine.upper >= coarse.upper - 1e-9))
        union, total = spectrum_measure(fine)
        fails["measure<=total"] += not union.measure <= total + 1e-12

        const = spec.with_potential([1.25] * spec.num_vertices)
        b0, b1 = band_structure(const, 0.0, 16), band_structure(const, mu, 16)
        shift_err = np.abs(b1.eigenvalues - b0.eigenvalues - 1.25 * mu).max()
        m_err = abs(spectrum_measure(b1)[0].measure - spectrum_measure(b0)[0].measure)
        fails["shift"] += not (shift_err < 1e-10 and m_err < 1e-10)
    record("C12 property suite", not any(fails.values()),
           f"{len(specs)} specs, failures per property {fails}")
