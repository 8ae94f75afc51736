"""Static SVG output for grids, contact layouts, triangulations and homotopies.

Coordinates grow downward; one grid unit is ``cell`` pixels.
"""

from __future__ import annotations

import colorsys
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .gridrep import ContactRep, GridRep, to_contact
from .homotopy import Homotopy
from .planar import Triangulation

SVG_NS = "http://www.w3.org/2000/svg"


@dataclass(frozen=True)
class RenderOptions:
    cell: int = 24
    margin: int = 8
    palette: Optional[tuple[str, ...]] = None
    labels: bool = True


def color(label: int, palette: Optional[Sequence[str]] = None) -> str:
    if palette:
        return palette[label % len(palette)]
    # golden-angle hue walk keeps neighbouring labels apart
    hue = (label * 0.618033988749895) % 1.0
    r, g, b = colorsys.hls_to_rgb(hue, 0.72, 0.55)
    return "#{:02x}{:02x}{:02x}".format(round(r * 255), round(g * 255), round(b * 255))


def _root(w: float, h: float) -> ET.Element:
    return ET.Element("svg", xmlns=SVG_NS, width=_n(w), height=_n(h), viewBox=f"0 0 {_n(w)} {_n(h)}")


def _n(x: float) -> str:
    # stable number formatting so output is byte-identical across runs
    s = f"{x:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("", "-0") else s


def _text(parent: ET.Element, x: float, y: float, s: str, size: float) -> None:
    t = ET.SubElement(parent, "text", x=_n(x), y=_n(y), attrib={"font-size": _n(size), "text-anchor": "middle",
                                                                  "dominant-baseline": "central", "font-family": "sans-serif"})
    t.text = s


def _dump(root: ET.Element) -> str:
    ET.indent(root)
    return ET.tostring(root, encoding="unicode") + "\n"


# ---------------------------------------------------------------------------

def _grid_group(parent: ET.Element, rep: GridRep, ox: float, oy: float, opt: RenderOptions) -> None:
    a = rep.array()
    c = opt.cell
    g = ET.SubElement(parent, "g", attrib={"class": "cells"})
    for r in range(a.shape[0]):
        for j in range(a.shape[1]):
            lab = int(a[r, j])
            ET.SubElement(g, "rect", x=_n(ox + j * c), y=_n(oy + r * c), width=_n(c), height=_n(c),
                          fill=color(lab, opt.palette), stroke="#ffffff", attrib={"stroke-width": "0.5",
                                                                                  "data-label": str(lab)})
            if opt.labels:
                _text(g, ox + (j + 0.5) * c, oy + (r + 0.5) * c, str(lab), c * 0.45)
    _outlines(parent, a, ox, oy, opt)


def _outline_segments(a: np.ndarray, lab: int) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """Boundary of the cells labelled ``lab``, collinear unit edges merged. Points are (x, y)."""
    h, w = a.shape
    mask = np.zeros((h + 2, w + 2), dtype=bool)
    mask[1:-1, 1:-1] = a == lab
    segs = []
    # horizontal edges: between row r-1 and r, at y = r
    hor = mask[:-1, 1:-1] != mask[1:, 1:-1]
    for y in range(h + 1):
        x = 0
        while x < w:
            if hor[y, x]:
                x0 = x
                while x < w and hor[y, x]:
                    x += 1
                segs.append(((x0, y), (x, y)))
            else:
                x += 1
    ver = mask[1:-1, :-1] != mask[1:-1, 1:]
    for x in range(w + 1):
        y = 0
        while y < h:
            if ver[y, x]:
                y0 = y
                while y < h and ver[y, x]:
                    y += 1
                segs.append(((x, y0), (x, y)))
            else:
                y += 1
    return segs


def _outlines(parent: ET.Element, a: np.ndarray, ox: float, oy: float, opt: RenderOptions) -> None:
    c = opt.cell
    g = ET.SubElement(parent, "g", attrib={"class": "polygons", "fill": "none", "stroke": "#000000",
                                           "stroke-width": "1.5"})
    for lab in sorted(int(x) for x in np.unique(a)):
        d = " ".join(f"M{_n(ox + p[0] * c)} {_n(oy + p[1] * c)}L{_n(ox + q[0] * c)} {_n(oy + q[1] * c)}"
                     for p, q in _outline_segments(a, lab))
        ET.SubElement(g, "path", d=d, attrib={"class": "polygon", "data-label": str(lab)})


def render_gridrep(rep: GridRep, opt: RenderOptions = RenderOptions()) -> str:
    c, m = opt.cell, opt.margin
    root = _root(rep.width * c + 2 * m, rep.height * c + 2 * m)
    _grid_group(root, rep, m, m, opt)
    return _dump(root)


def render_contact(cr: ContactRep, opt: RenderOptions = RenderOptions()) -> str:
    """Polygons only: one filled merged outline per vertex inside the bounding rectangle."""
    a = cr.grid.array()
    c, m = opt.cell, opt.margin
    h, w = a.shape
    root = _root(w * c + 2 * m, h * c + 2 * m)
    fills = ET.SubElement(root, "g", attrib={"class": "fills", "stroke": "none"})
    for lab in sorted(cr.polygons):
        # fill via the cells, drawn without seams
        for r, j in sorted(cr.polygons[lab]):
            ET.SubElement(fills, "rect", x=_n(m + j * c), y=_n(m + r * c), width=_n(c), height=_n(c),
                          fill=color(lab, opt.palette))
    _outlines(root, a, m, m, opt)
    if opt.labels:
        g = ET.SubElement(root, "g", attrib={"class": "names"})
        for lab in sorted(cr.polygons):
            cells = sorted(cr.polygons[lab])
            r, j = cells[len(cells) // 2]
            _text(g, m + (j + 0.5) * c, m + (r + 0.5) * c, str(lab), c * 0.45)
    ET.SubElement(root, "rect", x=_n(m), y=_n(m), width=_n(w * c), height=_n(h * c), fill="none",
                  stroke="#000000", attrib={"stroke-width": "2", "class": "frame"})
    return _dump(root)


# ---------------------------------------------------------------------------

def tutte_layout(tri: Triangulation, outer: Optional[int] = None) -> np.ndarray:
    """Barycentric coordinates in [0,1]^2 with the outer face pinned to a triangle."""
    n = tri.n
    if outer is None:
        outer = tri.outer_face if tri.outer_face is not None else 0
    a, b, c = tri.faces[outer]
    pos = np.zeros((n, 2))
    pinned = {a: (0.5, 0.0), b: (0.0, 1.0), c: (1.0, 1.0)}
    # keep the outer triangle's orientation consistent with the embedding (y down)
    if n > 3 and tri.dart_face.get((a, b)) == outer:
        pinned = {a: (0.5, 0.0), b: (1.0, 1.0), c: (0.0, 1.0)}
    free = [v for v in range(n) if v not in pinned]
    for v, p in pinned.items():
        pos[v] = p
    if free:
        idx = {v: i for i, v in enumerate(free)}
        L = np.zeros((len(free), len(free)))
        rhs = np.zeros((len(free), 2))
        for v in free:
            i = idx[v]
            for u in tri.adjacency[v]:
                L[i, i] += 1
                if u in idx:
                    L[i, idx[u]] -= 1
                else:
                    rhs[i] += pos[u]
        pos[free] = np.linalg.solve(L, rhs)
    return pos


def _graph_group(parent: ET.Element, tri: Triangulation, pos: np.ndarray, ox: float, oy: float, size: float,
                 opt: RenderOptions, curve: Sequence[int] = ()) -> None:
    pts = ox + pos * size
    pts[:, 1] = oy + pos[:, 1] * size
    g = ET.SubElement(parent, "g", attrib={"class": "graph"})
    for x, y in tri.edges:
        ET.SubElement(g, "line", x1=_n(pts[x, 0]), y1=_n(pts[x, 1]), x2=_n(pts[y, 0]), y2=_n(pts[y, 1]),
                      stroke="#999999", attrib={"stroke-width": "1"})
    if len(curve) > 1:
        d = "M" + "L".join(f"{_n(pts[v, 0])} {_n(pts[v, 1])}" for v in curve)
        ET.SubElement(g, "path", d=d, fill="none", stroke="#d62728", attrib={"stroke-width": "3", "class": "curve"})
    r = max(opt.cell * 0.3, 4)
    for v in range(tri.n):
        ET.SubElement(g, "circle", cx=_n(pts[v, 0]), cy=_n(pts[v, 1]), r=_n(r), fill=color(v, opt.palette),
                      stroke="#000000")
        if opt.labels:
            _text(g, pts[v, 0], pts[v, 1], str(v), r * 1.2)


def render_triangulation(tri: Triangulation, opt: RenderOptions = RenderOptions()) -> str:
    size = opt.cell * max(6, tri.n)
    m = opt.margin + opt.cell
    root = _root(size + 2 * m, size + 2 * m)
    _graph_group(root, tri, tutte_layout(tri), m, m, size, opt)
    return _dump(root)


def render_homotopy(tri: Triangulation, h: Homotopy, opt: RenderOptions = RenderOptions()) -> str:
    """One panel per curve, left to right, each curve drawn over the Tutte layout."""
    size = opt.cell * 6
    m = opt.margin + opt.cell // 2
    panel = size + 2 * m
    root = _root(panel * len(h.curves), panel + opt.cell)
    pos = tutte_layout(tri, h.anchor.outer_index)
    for i, curve in enumerate(h.curves):
        g = ET.SubElement(root, "g", attrib={"class": "panel", "data-index": str(i)})
        _graph_group(g, tri, pos, i * panel + m, m, size, opt, curve)
        _text(g, i * panel + panel / 2, panel + opt.cell / 2, " ".join(map(str, curve)), opt.cell * 0.5)
    return _dump(root)


Artifact = Union[GridRep, ContactRep, Triangulation, tuple]


def render_svg(artifact: Artifact, opt: RenderOptions = RenderOptions()) -> str:
    """Dispatch on type; homotopies are passed as ``(triangulation, homotopy)``."""
    if isinstance(artifact, GridRep):
        return render_gridrep(artifact, opt)
    if isinstance(artifact, ContactRep):
        return render_contact(artifact, opt)
    if isinstance(artifact, Triangulation):
        return render_triangulation(artifact, opt)
    if isinstance(artifact, tuple) and len(artifact) == 2 and isinstance(artifact[1], Homotopy):
        return render_homotopy(artifact[0], artifact[1], opt)
    raise TypeError(f"cannot render {type(artifact).__name__}")


def contact_svg(rep: GridRep, opt: RenderOptions = RenderOptions()) -> str:
    return render_contact(to_contact(rep), opt)
