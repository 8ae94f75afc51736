import re
import xml.etree.ElementTree as ET

from heightlab import families, render
from heightlab.gridrep import GridRep, to_contact
from heightlab.planar import k4
from heightlab.solvers import shh_exact

NS = {"s": "http://www.w3.org/2000/svg"}


def parse(svg: str) -> ET.Element:
    return ET.fromstring(svg)


def test_k3_cells_and_colours():
    svg = render.render_svg(GridRep(((0, 1), (2, 2))))
    root = parse(svg)
    cells = root.findall(".//s:g[@class='cells']/s:rect", NS)
    assert len(cells) == 4
    assert len({c.get("fill") for c in cells}) == 3


def test_fig1_grid_rows():
    svg = render.render_svg(families.fig1_gridrep())
    cells = parse(svg).findall(".//s:g[@class='cells']/s:rect", NS)
    ys = sorted({float(c.get("y")) for c in cells})
    assert len(ys) == 4 and len(cells) == 32
    assert {float(c.get("width")) for c in cells} == {24.0}


def test_fig1_contact_polygons():
    svg = render.render_svg(to_contact(families.fig1_gridrep()))
    root = parse(svg)
    polys = root.findall(".//s:path[@class='polygon']", NS)
    assert len(polys) == 5
    frame = root.find(".//s:rect[@class='frame']", NS)
    assert float(frame.get("height")) == 4 * 24


def test_outline_segments_merge():
    import numpy as np

    a = np.array([[0, 0, 1], [0, 0, 1]])
    segs = render._outline_segments(a, 0)
    # a 2x2 square has four merged sides
    assert sorted(segs) == sorted([((0, 0), (2, 0)), ((0, 2), (2, 2)), ((0, 0), (0, 2)), ((2, 0), (2, 2))])


def test_deterministic():
    r = families.fig1_gridrep()
    assert render.render_svg(r) == render.render_svg(r)
    t = families.fig1_graph()
    assert render.render_svg(t) == render.render_svg(t)


def test_homotopy_panels():
    t = k4()
    _, h = shh_exact(t)
    root = parse(render.render_svg((t, h)))
    assert len(root.findall(".//s:g[@class='panel']", NS)) == len(h.curves)


def test_tutte_inside_outer_triangle():
    t = families.nested_triangles(3)
    pos = render.tutte_layout(t)
    assert ((pos >= -1e-9) & (pos <= 1 + 1e-9)).all()
    # interior vertices are barycentres of their neighbours
    outer = set(t.faces[0])
    for v in range(t.n):
        if v not in outer:
            nb = list(t.adjacency[v])
            assert abs(pos[nb].mean(axis=0) - pos[v]).max() < 1e-9


def test_cell_size_option():
    svg = render.render_gridrep(GridRep(((0, 1),)), render.RenderOptions(cell=10, margin=0))
    assert 'width="20"' in svg and 'height="10"' in svg


def test_palette():
    svg = render.render_gridrep(GridRep(((0, 1),)), render.RenderOptions(palette=("#111111", "#222222")))
    assert re.findall(r'fill="(#\d+)"', svg)[:2] == ["#111111", "#222222"]
