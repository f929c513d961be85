import os

import pytest

import netaccess as na

BENCH_PATH = os.environ.get(
    "NETACCESS_BENCH_EDGELIST",
    os.path.join(os.path.dirname(__file__), "..", "data", "bench1133.edges"),
)

_ACCEPTANCE_LINES: list[str] = []


def record_acceptance(line: str) -> None:
    _ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def bench_graph():
    if not os.path.exists(BENCH_PATH):
        pytest.skip(
            f"benchmark graph not found at {BENCH_PATH}; "
            "generate it with scripts/make_benchmark_graph.py --seed 1"
        )
    g = na.largest_connected_component(na.load_edge_list(BENCH_PATH))
    assert g.n == 1133 and g.m == 5451, "unexpected benchmark graph"
    return g
