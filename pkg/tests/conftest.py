"""Shared fixtures and brute-force oracles used to cross-check the solvers."""

from __future__ import annotations

import itertools
import os

import networkx as nx
import pytest
from hypothesis import HealthCheck, settings

from heightlab.planar import Triangulation

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=50, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def nx_graph(tri: Triangulation) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(tri.n))
    g.add_edges_from(tri.edges)
    return g


def brute_pathwidth(n: int, edges) -> int:
    """Vertex separation number over all orderings (equals pathwidth)."""
    adj = [set() for _ in range(n)]
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    best = n
    for perm in itertools.permutations(range(n)):
        pos = {v: i for i, v in enumerate(perm)}
        width = 0
        for i in range(n):
            # vertices placed at or before i with a neighbour after i
            vs = sum(1 for v in perm[: i + 1] if any(pos[u] > i for u in adj[v]))
            width = max(width, vs)
            if width >= best:
                break
        best = min(best, width)
    return best


def bfs_outerplanarity(tri: Triangulation) -> int:
    """For a triangulation the peeling layers are BFS levels from the outer face."""
    g = nx_graph(tri)
    best = tri.n
    for face in tri.faces:
        dist = nx.multi_source_dijkstra_path_length(g, set(face))
        best = min(best, 1 + max(dist.values()))
    return best


@pytest.fixture
def k4_tri():
    from heightlab.planar import k4

    return k4()


@pytest.fixture
def fig1():
    from heightlab import families

    return families.fig1_graph()


# one summary line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE: dict[int, str] = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[criterion] = f"criterion {criterion}: {'PASS' if ok else 'FAIL'} | {detail}"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
