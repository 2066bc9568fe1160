"""Command-line entry point: ``perispec <subcommand> <graph.json> [options]``.

Exit codes: 0 success, 2 invalid graph, 3 numeric-contract violation
(cluster overlap, compute budget), 4 I/O failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import config
from .cycles import level_sets, mst_gauge, omega
from .fixtures import FIXTURE_NAMES, emit_fixture
from .floquet import BudgetExceeded, band_structure, dispersion_rows, spectrum_measure
from .graph_model import GraphFormatError, apply_potential_override, parse_graph, validate
from .report import ReportDocument
from .sweep import ClusterOverlap, eigenvector_decay_check, geometric_grid, lower_bound_total_bandwidth, sweep

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4
SUBCOMMANDS = ("validate", "omega", "bands", "sweep", "decay", "bound", "fixture")


@dataclass
class RunConfig:
    subcommand: str
    graph: str | None = None
    potential: str | None = None
    mu: float = 1.0
    mu_min: float = config.MU_MIN
    mu_max: float = config.MU_MAX
    points: int = config.MU_POINTS
    grid: int | None = None
    gauge: float | None = None
    value: float | None = None
    k: tuple[float, ...] | None = None
    random_k: bool = False
    seed: int = 0
    dump_dispersion: bool = False
    format: str = "text"
    output: str | None = None
    budget: float = config.DEFAULT_BUDGET
    threads: int = field(default_factory=config.thread_count)

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise ValueError(f"unknown subcommand {self.subcommand!r}")
        if self.grid is not None and self.grid < 2:
            raise ValueError("grid must be at least 2")
        if self.budget <= 0:
            raise ValueError("budget must be positive")
        if self.mu <= 0:
            raise ValueError("mu must be positive")
        if self.subcommand == "sweep" and not 0 < self.mu_min < self.mu_max:
            raise ValueError("need 0 < mu-min < mu-max")


class InputError(Exception):
    pass


def _load(cfg: RunConfig):
    try:
        if cfg.graph.startswith("fixture:"):
            text = emit_fixture(cfg.graph.split(":", 1)[1])
        else:
            text = Path(cfg.graph).read_text(encoding="utf-8")
        spec = parse_graph(text)
        if cfg.potential:
            spec = apply_potential_override(spec, Path(cfg.potential).read_text(encoding="utf-8"))
    except (OSError, KeyError) as exc:
        raise InputError(str(exc)) from exc
    return spec


def _echo(cfg: RunConfig, spec, doc: ReportDocument):
    doc.inputs.update({
        "subcommand": cfg.subcommand,
        "graph": cfg.graph,
        "dimension": spec.dimension,
        "vertices": spec.num_vertices,
        "edges": len(spec.edges),
        "potential": " ".join(f"{q:g}" for q in spec.potential),
        "grid": cfg.grid or config.default_grid(spec.dimension),
        "merge_tol": config.MERGE_TOL,
        "flat_width": config.FLAT_WIDTH,
        "budget": cfg.budget,
    })


def _value(spec, a: float) -> float:
    if a not in level_sets(spec):
        raise GraphFormatError(f"{a:g} is not a potential value of the graph")
    return a


def _omega_doc(spec, doc):
    rep = omega(spec)
    doc.add("omega by value", ["a", "level_set", "omega_a"],
            [[a, " ".join(f"v{v}" for v in sorted(rep.level[a])), w] for a, w in rep.omega_by_value.items()])
    doc.add("exponents", ["omega", "gamma", "N_gamma_plus"], [[rep.omega, rep.gamma, rep.n_gamma_plus]])


def _bands_doc(cfg, spec, doc):
    form = mst_gauge(spec, _value(spec, cfg.gauge)) if cfg.gauge is not None else None
    bs = band_structure(spec, cfg.mu, cfg.grid, form, budget=cfg.budget)
    union, total = spectrum_measure(bs)
    doc.inputs["mu"] = cfg.mu
    if cfg.gauge is not None:
        doc.inputs["gauge"] = cfg.gauge
    doc.add("bands", ["j", "lower", "upper", "width"],
            [[j, lo, hi, hi - lo] for j, (lo, hi) in enumerate(bs.band_intervals, 1)])
    doc.add("spectrum", ["left", "right"], [list(iv) for iv in union.intervals])
    doc.add("measure", ["measure", "total_bandwidth"], [[union.measure, total]])
    if cfg.dump_dispersion:
        header = [f"k{i + 1}" for i in range(spec.dimension)] + [f"lambda{j}" for j in range(1, spec.num_vertices + 1)]
        doc.add("dispersion", header, dispersion_rows(bs))


def _sweep_doc(cfg, spec, doc):
    mus = geometric_grid(cfg.mu_min, cfg.mu_max, cfg.points)
    res = sweep(spec, mus, cfg.grid, threads=cfg.threads, budget=cfg.budget)
    rep = omega(spec)
    values = list(res.cluster_widths)
    doc.inputs.update({"mu_min": cfg.mu_min, "mu_max": cfg.mu_max, "points": cfg.points})
    doc.add("sweep", ["mu", "total_measure", "total_bandwidth"] + [f"width_a={a:g}" for a in values],
            [[float(mu), float(res.total_measure[i]), float(res.total_bandwidth[i])]
             + [float(res.cluster_widths[a][i]) for a in values] for i, mu in enumerate(res.mus)])
    rows = []
    for a, fit in res.cluster_slopes.items():
        if fit is None:
            rows.append([f"a={a:g}", "flat", "", -rep.omega_by_value[a]])
        else:
            rows.append([f"a={a:g}", fit[0], fit[1], -rep.omega_by_value[a]])
    slope, err = res.slope()
    rows.append(["total", slope, err, -rep.omega])
    doc.add("slopes", ["series", "slope", "stderr", "predicted"], rows)


def _decay_doc(cfg, spec, doc):
    a = _value(spec, cfg.value)
    k = cfg.k
    if cfg.random_k:
        k = tuple(np.random.default_rng(cfg.seed).uniform(0, 2 * np.pi, spec.dimension))
    k = k or config.generic_k(spec.dimension)
    rows = eigenvector_decay_check(spec, a, k)
    doc.inputs.update({"value": a, "k": " ".join(f"{x:.17g}" for x in k)})
    doc.add("decay", ["vertex", "target", "exponent", "stderr"],
            [[f"v{r.vertex}", r.target, r.exponent, r.stderr] for r in rows])


def _bound_doc(cfg, spec, doc):
    rep = lower_bound_total_bandwidth(spec, cfg.mu, cfg.grid)
    doc.inputs["mu"] = cfg.mu
    doc.add("lower bound", ["mu", "q", "kappa", "gamma", "N_gamma_plus", "bound", "bound_oriented",
                            "total_bandwidth", "pass"],
            [[rep.mu, rep.q, rep.kappa, rep.gamma, rep.n_gamma_plus, rep.bound, rep.bound_oriented,
              rep.measured, rep.passed]])


def run(cfg: RunConfig) -> tuple[int, ReportDocument, str]:
    """Execute one subcommand; returns (exit status, report, error message)."""
    doc = ReportDocument()
    if cfg.subcommand == "fixture":
        return EXIT_OK, doc, ""
    try:
        spec = _load(cfg)
    except InputError as exc:
        return EXIT_IO, doc, f"error: {exc}"
    except GraphFormatError as exc:
        doc.add("violations", ["violation"], [[str(exc)]])
        return EXIT_INVALID, doc, f"invalid graph: {exc}"

    _echo(cfg, spec, doc)
    report = validate(spec)
    if cfg.subcommand == "validate" or not report.ok:
        doc.add("validation", ["ok"], [[report.ok]])
        if report.violations:
            doc.add("violations", ["violation"], [[v] for v in report.violations])
        return (EXIT_OK if report.ok else EXIT_INVALID), doc, ""

    handlers = {
        "omega": lambda: _omega_doc(spec, doc),
        "bands": lambda: _bands_doc(cfg, spec, doc),
        "sweep": lambda: _sweep_doc(cfg, spec, doc),
        "decay": lambda: _decay_doc(cfg, spec, doc),
        "bound": lambda: _bound_doc(cfg, spec, doc),
    }
    try:
        handlers[cfg.subcommand]()
    except GraphFormatError as exc:
        return EXIT_INVALID, doc, f"invalid input: {exc}"
    except (ClusterOverlap, BudgetExceeded) as exc:
        return EXIT_NUMERIC, doc, f"numeric contract violated: {exc}"
    return EXIT_OK, doc, ""


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="perispec", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="subcommand", required=True)

    def common(sp):
        sp.add_argument("graph", help="graph JSON file, or fixture:<name>")
        sp.add_argument("--potential", help="potential override JSON file")
        sp.add_argument("--format", choices=("text", "csv"), default="text")
        sp.add_argument("--output", "-o", help="write the report here instead of stdout")
        sp.add_argument("--grid", type=int, help="k-points per axis")
        sp.add_argument("--budget", type=float, default=config.DEFAULT_BUDGET, help="ceiling on N^d * nu^3")

    common(sub.add_parser("validate", help="check simplicity, connectivity and the cycle index lattice"))
    common(sub.add_parser("omega", help="degeneracy exponents omega(a), omega, gamma, N_gamma^+"))

    sp = sub.add_parser("bands", help="band intervals, spectrum and its measure")
    common(sp)
    sp.add_argument("--mu", type=float, default=1.0)
    sp.add_argument("--gauge", type=float, help="use the MST gauge of this potential value")
    sp.add_argument("--dump-dispersion", action="store_true", help="emit eigenvalues at every k")

    sp = sub.add_parser("sweep", help="band widths over a geometric mu grid with fitted slopes")
    common(sp)
    sp.add_argument("--mu-min", type=float, default=config.MU_MIN)
    sp.add_argument("--mu-max", type=float, default=config.MU_MAX)
    sp.add_argument("--points", type=int, default=config.MU_POINTS)

    sp = sub.add_parser("decay", help="eigenvector decay exponents for one cluster")
    common(sp)
    sp.add_argument("--value", type=float, required=True, help="potential value a")
    sp.add_argument("--k", type=float, nargs="+", help="quasimomentum (default: fixed generic point)")
    sp.add_argument("--random-k", action="store_true")
    sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("bound", help="total-bandwidth lower bound versus the measured value")
    common(sp)
    sp.add_argument("--mu", type=float, required=True)

    sp = sub.add_parser("fixture", help="write a bundled graph document")
    sp.add_argument("name", help="one of: " + ", ".join(FIXTURE_NAMES))
    sp.add_argument("--output", "-o")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.subcommand == "fixture":
        try:
            text = emit_fixture(args.name)
        except KeyError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INVALID
        return _write(text, args.output)

    fields = {k: v for k, v in vars(args).items() if v is not None}
    fields = {k.replace("-", "_"): v for k, v in fields.items()}
    if "k" in fields:
        fields["k"] = tuple(fields["k"])
    try:
        cfg = RunConfig(**fields)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    status, doc, message = run(cfg)
    if message:
        print(message, file=sys.stderr)
    written = _write(doc.render(cfg.format), cfg.output)
    return status if written == EXIT_OK else written


def _write(text: str, path: str | None) -> int:
    if path is None:
        sys.stdout.write(text)
        return EXIT_OK
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
