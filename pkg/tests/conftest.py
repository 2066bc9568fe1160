import random

import pytest

from perispec.fixtures import TABLE1_POTENTIALS, fig1, zline
from perispec.graph_model import make_spec, validate


def random_spec(rng: random.Random, max_vertices=8, max_edges=14, dims=(1, 2), values=range(4)):
    """Random valid spec: a spanning tree plus extra edges with indices in {-1, 0, 1}."""
    while True:
        nu = rng.randint(3, max_vertices)
        d = rng.choice(dims)
        pairs = [(rng.randint(1, v - 1), v) for v in range(2, nu + 1)]
        others = [(u, v) for u in range(1, nu + 1) for v in range(u + 1, nu + 1) if (u, v) not in pairs]
        rng.shuffle(others)
        pairs += others[:rng.randint(d, max(d, min(len(others), max_edges - len(pairs))))]
        edges = []
        for u, v in pairs:
            if rng.random() < 0.5:
                u, v = v, u
            edges.append((u, v, tuple(rng.choice((-1, 0, 0, 1)) for _ in range(d))))
        rng.shuffle(edges)
        spec = make_spec(d, [rng.choice(list(values)) for _ in range(nu)], edges)
        if len(spec.edges) <= max_edges and validate(spec).ok:
            return spec


@pytest.fixture
def fig1_spec():
    return fig1()


@pytest.fixture(params=sorted(TABLE1_POTENTIALS))
def table1_row(request):
    return fig1(TABLE1_POTENTIALS[request.param])


@pytest.fixture
def ring3():
    return zline(3)


@pytest.fixture(scope="session")
def random_specs():
    rng = random.Random(20240518)
    return [random_spec(rng) for _ in range(20)]


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
