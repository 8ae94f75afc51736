import math

import pytest
from hypothesis import given, settings, strategies as st

from heightlab import families
from heightlab.parameters import (
    PathDecomposition,
    PeelingCertificate,
    TooLarge,
    check_path_decomposition,
    check_peeling,
    grid_outerplanarity_check,
    outerplanarity,
    pathwidth_exact,
)
from heightlab.planar import enumerate_stacked_triangulations, k3, k4

from conftest import bfs_outerplanarity, brute_pathwidth


# oracle sanity first: the brute-force helpers agree with textbook values
def test_oracles_on_known_graphs():
    assert brute_pathwidth(4, [(0, 1), (1, 2), (2, 3)]) == 1
    assert brute_pathwidth(4, [(a, b) for a in range(4) for b in range(a + 1, 4)]) == 3
    assert bfs_outerplanarity(k3()) == 1
    assert bfs_outerplanarity(k4()) == 2


def test_outerplanarity_small():
    assert outerplanarity(k3())[0] == 1
    assert outerplanarity(k4())[0] == 2
    assert outerplanarity(families.nested_triangles(3))[0] == 2


def test_pathwidth_small():
    assert pathwidth_exact(k3())[0] == 2
    assert pathwidth_exact(k4())[0] == 3


@pytest.mark.parametrize("t", [2, 3, 4])
def test_nested_triangles_pathwidth(t):
    w, dec = pathwidth_exact(families.nested_triangles(t))
    assert w == 3
    assert check_path_decomposition(families.nested_triangles(t), dec) is None


@given(n=st.integers(5, 8), seed=st.integers(0, 10_000))
@settings(max_examples=25)
def test_pathwidth_matches_brute_force(n, seed):
    (t,) = enumerate_stacked_triangulations(n, seed=seed, count=1)
    w, dec = pathwidth_exact(t)
    assert w == brute_pathwidth(t.n, t.edges)
    assert dec.width == w
    assert check_path_decomposition(t, dec) is None


@given(n=st.integers(4, 14), seed=st.integers(0, 10_000))
@settings(max_examples=40)
def test_outerplanarity_matches_bfs_levels(n, seed):
    (t,) = enumerate_stacked_triangulations(n, seed=seed, count=1)
    value, cert = outerplanarity(t)
    assert value == bfs_outerplanarity(t)
    assert cert.value == value
    assert check_peeling(t, cert) is None


def test_peeling_rejects_wrong_layers():
    t = k4()
    _, cert = outerplanarity(t)
    bad = PeelingCertificate(cert.outer_face, (frozenset(range(4)),))
    assert check_peeling(t, bad) is not None


def test_decomposition_rejects_missing_edge():
    t = k4()
    bad = PathDecomposition((frozenset({0, 1, 2}), frozenset({1, 2, 3})))
    assert check_path_decomposition(t, bad) is not None


def test_pathwidth_cap():
    n = 30
    with pytest.raises(TooLarge):
        pathwidth_exact((n, [(i, i + 1) for i in range(n - 1)]), cap=24)


def test_pathwidth_on_plain_graphs():
    n, edges, _ = families.binary_tree(3)
    assert pathwidth_exact((n, edges))[0] == 2


@pytest.mark.parametrize("h,w,expected", [(4, 10, 2), (1, 5, 1), (5, 5, 3)])
def test_grid_outerplanarity_examples(h, w, expected):
    assert grid_outerplanarity_check(h, w) == expected


def test_grid_outerplanarity_formula():
    for w in range(1, 9):
        for h in range(1, w + 1):
            assert grid_outerplanarity_check(h, w) == math.ceil(h / 2)
