import numpy as np
from hypothesis import given, settings, strategies as st

from heightlab import families
from heightlab import homotopy as hm
from heightlab.convert import (
    columns_spell_curves,
    diff_move,
    gridrep_to_homotopy,
    homotopy_to_gridrep,
    round_trip_height,
    width_ok,
)
from heightlab.gridrep import GridRep, validate_gridrep
from heightlab.homotopy import validate_homotopy
from heightlab.planar import enumerate_stacked_triangulations, k3, k4
from heightlab.solvers import hh_exact, shh_exact


def test_fig1_homotopy_to_grid():
    t = families.fig1_graph()
    h = families.fig1_homotopy()
    rep, trace = homotopy_to_gridrep(t, h)
    assert rep.height == 4
    assert validate_gridrep(t, rep, require_simple=True) is None
    assert columns_spell_curves(rep, h, trace) and width_ok(rep, trace)


def test_k4_optimal_round_trip():
    t = k4()
    k, h = shh_exact(t)
    rep, _ = homotopy_to_gridrep(t, h)
    assert k == 3 and rep.height == 3
    assert validate_gridrep(t, rep, True) is None
    back, _ = gridrep_to_homotopy(t, rep)
    assert back.height == 3
    assert validate_homotopy(t, back) is None


def test_edge_slide_makes_one_column_with_one_change():
    t = families.fig1_graph()
    h = families.fig1_homotopy()
    rep, trace = homotopy_to_gridrep(t, h)
    i = next(j for j, m in enumerate(h.moves) if m.kind == hm.SLIDE)
    first, last = trace.move_columns[i]
    assert first == last
    a = rep.array()
    assert np.count_nonzero(a[:, last] != a[:, last - 1]) >= 1
    # exactly one run changes label
    before, after = h.curves[i], h.curves[i + 1]
    assert sum(x != y for x, y in zip(before, after)) == 1


def test_fig1_grid_to_homotopy():
    t = families.fig1_graph()
    h, trace = gridrep_to_homotopy(t, families.fig1_gridrep())
    assert h.simple and h.height <= 4
    assert validate_homotopy(t, h) is None
    assert len([g for g in trace.column_moves if g is not None]) == len(h.moves)


def test_two_same_direction_corners_rejected_by_validator():
    # label 0 forms a U shape in column 1: not x-monotone, so simple validation stops it first
    t = k4()
    rep = GridRep(((0, 0, 0, 0), (0, 1, 2, 2), (0, 1, 3, 3), (0, 0, 0, 0)))
    assert validate_gridrep(t, rep, require_simple=True) is not None


def test_k3():
    t = k3()
    k, h = shh_exact(t)
    rep, _ = homotopy_to_gridrep(t, h)
    assert rep.height == k == 2
    assert validate_gridrep(t, rep, True) is None
    assert round_trip_height(t, h) <= 2


def test_general_homotopy_to_grid():
    t = families.nested_triangles(2)
    k, h = hh_exact(t)
    rep, trace = homotopy_to_gridrep(t, h)
    assert rep.height == k
    assert validate_gridrep(t, rep) is None
    assert width_ok(rep, trace)


def test_diff_move_examples():
    assert diff_move((0, 1), (0, 3, 1)) == hm.face_flip(0, 3, 1, 0, "insert")
    assert diff_move((0, 3, 1), (0, 1)) == hm.face_flip(0, 3, 1, 0, "remove")
    assert diff_move((0, 3, 1), (0, 2, 1)) == hm.edge_slide(3, 2, 1)
    assert diff_move((0,), (0, 1)).kind == hm.BOUNDARY
    assert diff_move((0, 1), (2, 1)).kind == hm.BSLIDE
    assert diff_move((0, 1), (0, 3, 0, 1)) == hm.spike(0, 3, 0)
    assert diff_move((0, 1), (2, 3)) is None


@given(n=st.integers(5, 8), seed=st.integers(0, 10_000))
@settings(max_examples=25)
def test_simple_round_trip(n, seed):
    (t,) = enumerate_stacked_triangulations(n, seed=seed, count=1)
    k, h = shh_exact(t)
    rep, trace = homotopy_to_gridrep(t, h)
    assert rep.height == k
    assert validate_gridrep(t, rep, True) is None
    assert columns_spell_curves(rep, h, trace) and width_ok(rep, trace)
    back, _ = gridrep_to_homotopy(t, rep)
    assert back.height <= k
    assert validate_homotopy(t, back) is None


@given(n=st.integers(5, 7), seed=st.integers(0, 10_000), mirror=st.booleans(), flip=st.booleans())
@settings(max_examples=20)
def test_grid_symmetries_convert(n, seed, mirror, flip):
    """Mirror images of a valid grid are valid grids, and each still yields a homotopy."""
    (t,) = enumerate_stacked_triangulations(n, seed=seed, count=1)
    k, h = shh_exact(t)
    rep, _ = homotopy_to_gridrep(t, h)
    if mirror:
        rep = rep.mirrored()
    if flip:
        rep = rep.flipped()
    back, _ = gridrep_to_homotopy(t, rep)
    assert back.height <= k
    assert validate_homotopy(t, back) is None
