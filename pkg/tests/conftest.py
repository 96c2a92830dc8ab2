import random

import pytest
from hypothesis import settings

from dkergm.graph import Graph

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

TRIANGLE = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
PATH = Graph.from_edges(3, [(0, 1), (1, 2)])
EDGE3 = Graph.from_edges(3, [(0, 1)])
EMPTY3 = Graph(3, 0)
# a-b, b-c, b-d, c-d with a..d -> 0..3: degrees 1, 3, 2, 2
KITE4 = Graph.from_edges(4, [(0, 1), (1, 2), (1, 3), (2, 3)])


def all_graphs(n):
    return [Graph(n, m) for m in range(1 << (n * (n - 1) // 2))]


def random_graph(rng: random.Random, n: int, p: float = 0.5) -> Graph:
    return Graph.from_edges(n, [(i, j) for j in range(n) for i in range(j) if rng.random() < p])


@pytest.fixture
def rng():
    return random.Random(20240611)


ACCEPTANCE_LINES = []


def record_acceptance(number, title, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title}" + (f" ({detail})" if detail else "")
    ACCEPTANCE_LINES.append((number, line))
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
