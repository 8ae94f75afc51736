import math

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from heightlab import families
from heightlab.families import Edge, materialize, parallel, random_sp, series, sp_gridrep, sp_height
from heightlab.gridrep import check_labels
from heightlab.parameters import outerplanarity, pathwidth_exact
from heightlab.planar import distance
from heightlab.solvers import shh_exact

from conftest import nx_graph


def test_nested_sizes():
    t = families.nested_triangles(2)
    assert (t.n, t.m) == (6, 12)
    assert outerplanarity(families.nested_triangles(3))[0] == 2


def test_nested_is_not_octahedron():
    assert not nx.is_isomorphic(nx_graph(families.nested_triangles(2)), nx.octahedral_graph())


@pytest.mark.parametrize("d", range(1, 7))
def test_apex_tree_outerplanarity(d):
    assert outerplanarity(families.apex_tree(d))[0] == 2


def test_apex_tree_pathwidth_dominates_tree():
    t = families.apex_tree(3)
    n, edges, _ = families.binary_tree(3)
    assert pathwidth_exact(t)[0] >= pathwidth_exact((n, edges))[0] == 2


def test_apex_tree_depth1():
    t = families.apex_tree(1)
    assert t.n == 4 and nx.is_isomorphic(nx_graph(t), nx.complete_graph(4))


@pytest.mark.parametrize("n", range(5, 17, 2))
def test_apex_strip_distance(n):
    t = families.apex_strip(n)
    info = families.apex_strip_info(n)
    assert t.n == n
    assert distance(t, info.a, info.b, {info.apex}) == (n - 3) // 2


def test_apex_strip_growth():
    ks = [shh_exact(families.apex_strip(n))[0] for n in (7, 9, 11)]
    assert ks == sorted(ks)
    assert ks[1] >= math.ceil((9 - 5) / 4) + 1


def test_apex_strip_rejects_even():
    with pytest.raises(ValueError):
        families.apex_strip(8)


def test_sp_single_edge():
    g = random_sp(1)
    assert g.edges == ((0, 1),)
    assert sp_gridrep(g).labels == ((0,), (1,))


def test_sp_triangle():
    g = materialize(parallel(Edge(), series(Edge(), Edge())))
    rep = sp_gridrep(g, check=True)
    assert rep.height <= 2 * math.ceil(math.log2(3)) + 2 == 6
    assert check_labels(g.n, g.edges, rep, require_simple=True, exact=False) is None


def test_sp_rejects_double_edge():
    with pytest.raises(ValueError):
        parallel(Edge(), Edge())


def test_sp_deterministic():
    assert random_sp(5, seed=7) == random_sp(5, seed=7)


@pytest.mark.parametrize("m,bound", [(100, 16), (1000, 22)])
def test_sp_bound_examples(m, bound):
    g = random_sp(m, seed=m)
    rep = sp_gridrep(g)
    assert sp_height(m) == bound
    assert rep.height <= bound
    assert check_labels(g.n, g.edges, rep, require_simple=True, exact=False) is None


@given(m=st.integers(1, 300), seed=st.integers(0, 10_000))
@settings(max_examples=60)
def test_sp_property(m, seed):
    g = random_sp(m, seed)
    assert g.m == m
    rep = sp_gridrep(g, check=True)
    assert rep.height <= sp_height(m)
    assert check_labels(g.n, g.edges, rep, require_simple=True, exact=False) is None


def test_fig1_pieces():
    t = families.fig1_graph()
    assert t.n == 5 and t.m == 9
    assert families.fig1_gridrep().height == 4
