from __future__ import annotations

import functools

import pytest

from terwpoly import graph_oracle as go


@functools.lru_cache(maxsize=None)
def graph_bundle(family: str, *params: int):
    """(graph, distance matrix, recovered array), cached across tests."""
    g = go.build(family, params)
    dist = go.distance_matrix(g)
    return g, dist, go.check_distance_regular(g, dist)


@pytest.fixture(scope="session")
def halved7():
    return graph_bundle("halved-cube", 7)


@pytest.fixture(scope="session")
def halved9():
    return graph_bundle("halved-cube", 9)


@pytest.fixture(scope="session")
def folded_j12():
    return graph_bundle("folded-johnson", 6)


@pytest.fixture(scope="session")
def folded_halved14():
    return graph_bundle("folded-halved-cube", 14)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
