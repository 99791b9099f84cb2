import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from graphpde.generators import random_connected_graph, random_interior
from graphpde.graph import boundary_of

settings.register_profile(
    "default", max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")
    config._criteria = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    table = item.config._criteria
    entry = table.setdefault(number, {"title": title, "passed": True, "seen": False})
    if rep.when == "call" or rep.failed:
        entry["seen"] = True
        if rep.failed:
            entry["passed"] = False


def pytest_terminal_summary(terminalreporter, config):
    table = getattr(config, "_criteria", {})
    if not table:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(table):
        entry = table[number]
        status = "PASS" if entry["passed"] and entry["seen"] else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {status}  {entry['title']}")


seeds = st.integers(min_value=0, max_value=2**32 - 1)


@st.composite
def graphs(draw, min_n=2, max_n=12, weighted=True, lengths=False):
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    return random_connected_graph(n, draw(seeds), p=draw(st.floats(0.0, 0.6)),
                                  weighted=weighted, lengths=lengths)


@st.composite
def dirichlet_setups(draw, min_n=3, max_n=12):
    """A connected graph and an interior whose components all touch a nonempty boundary."""
    g = draw(graphs(min_n=min_n, max_n=max_n))
    interior = random_interior(g, draw(seeds))
    return g, boundary_of(g, interior)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
