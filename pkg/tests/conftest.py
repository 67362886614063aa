import sys

import numpy as np
import pytest

from softmapper.filters import FilterValues
from softmapper.mapper import MapperGraph, MapperNode
from softmapper.persistence import map_pers_filtration


def make_filtered_graph(values, edges):
    """Filtered graph with one singleton node per value and the given edges."""
    values = np.asarray(values, dtype=float)
    nodes = tuple(MapperNode(i, 1, (i,)) for i in range(values.size))
    graph = MapperGraph(nodes, {(min(u, v), max(u, v)): 1 for u, v in edges})
    fv = FilterValues(values, np.zeros((values.size, 0)))
    return map_pers_filtration(graph, fv)


def random_filtered_graph(rng, max_nodes=30, edge_prob=0.15):
    n = int(rng.integers(1, max_nodes + 1))
    values = rng.standard_normal(n)
    edges = [
        (u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < edge_prob
    ]
    return make_filtered_graph(values, edges)


@pytest.fixture
def rng():
    return np.random.default_rng(20260826)


def pytest_terminal_summary(terminalreporter):
    """Echo the one-line acceptance statuses after the test summary."""
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "REPORT_LINES", None) if mod else None
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
