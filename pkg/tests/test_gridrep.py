import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from heightlab import families
from heightlab.gridrep import (
    GridRep,
    NormalizationFailed,
    collapse,
    from_contact,
    normalize_contact,
    normalize_gridrep,
    to_contact,
    validate_gridrep,
)
from heightlab.planar import build_triangulation, k3, k4

# K4 with vertex 0 wrapping the top, left and bottom sides; not simple
WRAP = GridRep(((0, 0, 0, 0), (0, 1, 2, 2), (0, 1, 3, 3), (0, 0, 0, 0)))


def test_k3_contact():
    c = to_contact(GridRep(((0, 1), (2, 2))))
    assert len(c.polygons) == 3
    assert c.contact_graph() == {(0, 1), (0, 2), (1, 2)}
    assert validate_gridrep(k3(), c.grid, True) is None


def test_two_unit_squares():
    c = to_contact(GridRep(((0, 1),)))
    assert c.polygons == {0: frozenset({(0, 0)}), 1: frozenset({(0, 1)})}
    assert c.contact_graph() == {(0, 1)}


def test_fig1_contact():
    r = families.fig1_gridrep()
    c = to_contact(r)
    assert r.height == 4 and len(c.polygons) == 5
    assert c.x_monotone() and c.above_below_consistent()
    assert all(len(j.labels) <= 3 for j in c.junctions if j.interior)
    assert from_contact(c) == r


def test_fig1_validates():
    r = families.fig1_gridrep()
    assert r.is_simple()
    assert validate_gridrep(families.fig1_graph(), r, require_simple=True) is None


def test_mutation_breaks_exactness():
    t = families.fig1_graph()
    a = families.fig1_gridrep().array()
    # u and y are not adjacent
    assert not t.has_edge(0, 4)
    a[3, 2] = 4
    v = validate_gridrep(t, GridRep.from_array(a))
    assert v is not None and v.condition.startswith("condition")


def test_exactness_flag():
    t = families.fig1_graph()
    a = families.fig1_gridrep().array()
    # stretch y along its row until it meets u past the end of x
    a[2, 5] = a[2, 6] = 4
    assert not t.has_edge(0, 4)
    v = validate_gridrep(t, GridRep.from_array(a))
    assert v is not None and v.condition == "condition 3 exactness"


def test_simplicity_violation():
    t = k4()
    assert validate_gridrep(t, WRAP) is None
    v = validate_gridrep(t, WRAP, require_simple=True)
    assert v is not None and v.condition == "simplicity"
    assert not WRAP.is_simple()


def test_conditions_1_and_2():
    t = k4()
    v = validate_gridrep(t, GridRep(((0, 1), (2, 2))))
    assert v is not None and v.condition == "condition 1"
    a = WRAP.array()
    a[1:3, 0] = 1
    a[1, 1] = 0
    v = validate_gridrep(t, GridRep.from_array(a))
    assert v is not None


def test_normalize_removes_interior_vertical_junction():
    c = to_contact(WRAP)
    assert len(c.interior_vertical_junctions()) == 1
    n = normalize_contact(c, "general")
    assert n.interior_vertical_junctions() == []
    assert n.height == c.height
    assert n.contact_graph() == c.contact_graph()


def test_normalize_wrapped_boundary():
    n = normalize_contact(to_contact(WRAP), "general")
    b = n.boundary_vertices()
    every = b["left"] | b["right"] | b["top"] | b["bottom"]
    assert 2 <= len(every) <= 3
    assert len(b["left"]) == len(b["right"]) == 1 and b["left"] != b["right"]


def test_normalize_idempotent_on_normal_input():
    r = families.fig1_gridrep()
    out, log = normalize_gridrep(families.fig1_graph(), r, "simple")
    dedup = lambda cols: [c for i, c in enumerate(cols) if i == 0 or cols[i - 1] != c]
    assert dedup(out.columns()) == dedup(r.columns())
    again, _ = normalize_gridrep(families.fig1_graph(), out, "simple")
    assert again == out


def test_normalize_output_properties():
    t = families.fig1_graph()
    out, _ = normalize_gridrep(t, families.fig1_gridrep().mirrored(), "simple")
    c = to_contact(out)
    assert out.height == 4
    assert validate_gridrep(t, out, True) is None
    assert c.interior_vertical_junctions() == []
    b = c.boundary_vertices()
    assert len(b["left"] | b["right"] | b["top"] | b["bottom"]) == 3


def test_normalize_rejects_invalid_input():
    with pytest.raises(NormalizationFailed):
        normalize_gridrep(k3(), GridRep(((0, 1),)), "simple")


def test_bad_mode():
    with pytest.raises(ValueError):
        normalize_gridrep(k3(), GridRep(((0, 1), (2, 2))), "fancy")


def test_collapse():
    assert collapse([1, 1, 2, 2, 2, 1]) == (1, 2, 1)
    assert collapse([]) == ()


@given(st.lists(st.integers(0, 4), min_size=1, max_size=30))
def test_collapse_idempotent(seq):
    c = collapse(seq)
    assert collapse(c) == c
    assert all(x != y for x, y in zip(c, c[1:]))


@given(st.integers(0, 3), st.booleans(), st.booleans())
def test_symmetries_preserve_validity(k, mirror, flip):
    t = families.fig1_graph()
    r = families.fig1_gridrep()
    a = r.array()
    # duplicate column k: still a valid representation
    a = np.insert(a, k, a[:, k], axis=1)
    r = GridRep.from_array(a)
    if mirror:
        r = r.mirrored()
    if flip:
        r = r.flipped()
    assert validate_gridrep(t, r, True) is None
