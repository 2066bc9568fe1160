"""Bundled example graphs and negative controls."""

from __future__ import annotations

import re
from importlib import resources
from typing import Sequence

from .graph_model import Edge, PeriodicGraphSpec, dump_graph, make_spec, parse_graph

FIG1_POTENTIAL = (1, 2, 3, 4, 0, 0)

# rows of the worked example: potential -> {a: omega(a)}
TABLE1_POTENTIALS = {
    "row1": (1, 1, 1, 0, 0, 0),
    "row2": (1, 1, 0, 0, 0, 0),
    "row3": (1, 2, 3, 4, 0, 0),
}


def fig1(potential: Sequence[float] = FIG1_POTENTIAL) -> PeriodicGraphSpec:
    """Six-vertex Z^2-periodic graph; {v3, v1} and {v4, v2} cross the cell boundary."""
    return make_spec(2, potential, [
        (1, 2, (0, 0)), (2, 3, (0, 0)), (3, 4, (0, 0)), (4, 1, (0, 0)),
        (4, 5, (0, 0)), (4, 6, (0, 0)), (5, 6, (0, 0)),
        (3, 1, (1, 0)), (4, 2, (0, 1)),
    ])


def zline(nu: int, potential: Sequence[float] | None = None) -> PeriodicGraphSpec:
    """The nu-cycle quotient of Z: edges {i, i+1} with index 0, {nu, 1} with index 1."""
    if nu < 3:
        raise ValueError("a simple quotient cycle needs at least 3 vertices")
    potential = [0.0] * nu if potential is None else list(potential)
    if len(potential) != nu:
        raise ValueError(f"expected {nu} potential values")
    edges = tuple(Edge(i, i + 1, (0,)) for i in range(1, nu)) + (Edge(nu, 1, (1,)),)
    return PeriodicGraphSpec(1, tuple(float(q) for q in potential), edges)


def _named(name: str) -> PeriodicGraphSpec:
    if name == "fig1":
        return fig1()
    if name in TABLE1_POTENTIALS:
        return fig1(TABLE1_POTENTIALS[name])
    if name == "fig1-no-v4v2":
        return fig1().without_edge(4, 2)
    if name == "fig1-double-index":
        # index lattice 2Z x Z: proper sublattice
        spec = fig1()
        return PeriodicGraphSpec(2, spec.potential, tuple(
            Edge(e.u, e.v, (2 * e.index[0], e.index[1])) for e in spec.edges))
    m = re.fullmatch(r"zline\(?(\d+)\)?", name)
    if m:
        return zline(int(m.group(1)))
    raise KeyError(f"unknown fixture {name!r}")


FIXTURE_NAMES = ("fig1", "row1", "row2", "row3", "fig1-no-v4v2", "fig1-double-index", "zline(N)")


def fixture_spec(name: str) -> PeriodicGraphSpec:
    return _named(name)


def emit_fixture(name: str) -> str:
    """JSON document of a bundled fixture."""
    if name == "fig1":
        return resources.files(__package__).joinpath("data/fig1.json").read_text()
    return dump_graph(_named(name))


def load_fixture(name: str) -> PeriodicGraphSpec:
    return parse_graph(emit_fixture(name))
