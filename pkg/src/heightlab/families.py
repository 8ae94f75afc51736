"""Graph families: nested triangles, apex trees, apex strips, series-parallel graphs."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from . import homotopy as hm
from .gridrep import GridRep
from .homotopy import Homotopy
from .planar import OuterAnchor, Triangulation, build_triangulation


def nested_triangles(t: int) -> Triangulation:
    """t triangles stacked inside each other.

    Vertex i of a ring is joined to vertex i of the next ring. Quads 0 and 1
    take the diagonal a_i b_{i+1}, quad 2 the other one; using the same
    diagonal in all three quads would give the octahedron at t=2 (pathwidth 4).
    """
    if t < 2:
        raise ValueError("need t >= 2")
    faces = [(0, 1, 2), (3 * (t - 1), 3 * (t - 1) + 1, 3 * (t - 1) + 2)]
    for j in range(t - 1):
        for i in range(3):
            a0, a1 = 3 * j + i, 3 * j + (i + 1) % 3
            b0, b1 = 3 * (j + 1) + i, 3 * (j + 1) + (i + 1) % 3
            if i < 2:
                faces += [(a0, a1, b1), (a0, b1, b0)]
            else:
                faces += [(a0, a1, b0), (a1, b1, b0)]
    return build_triangulation(faces, name=f"nested_triangles({t})")


def binary_tree(depth: int) -> tuple[int, list[tuple[int, int]], list[int]]:
    """Complete binary tree in heap numbering: (n, edges, preorder)."""
    n = 2 ** (depth + 1) - 1
    edges = [((i - 1) // 2, i) for i in range(1, n)]
    order: list[int] = []
    stack = [0]
    while stack:
        v = stack.pop()
        order.append(v)
        for c in (2 * v + 2, 2 * v + 1):
            if c < n:
                stack.append(c)
    return n, edges, order


def _fan_triangulate(poly: list[int], chords: set[frozenset[int]], depth: dict[int, int]) -> list[tuple[int, int, int]]:
    if len(poly) == 3:
        return [tuple(poly)]
    k = len(poly)
    for i in range(k):
        for j in range(i + 2, k):
            if i == 0 and j == k - 1:
                continue
            if frozenset((poly[i], poly[j])) in chords:
                return (_fan_triangulate(poly[i: j + 1], chords, depth)
                        + _fan_triangulate(poly[j:] + poly[: i + 1], chords, depth))
    r = min(range(k), key=lambda i: (depth[poly[i]], poly[i]))
    rot = poly[r:] + poly[:r]
    return [(rot[0], rot[i], rot[i + 1]) for i in range(1, k - 1)]


def apex_tree(depth: int) -> Triangulation:
    """Complete binary tree made maximal outerplanar by fans, plus an apex on every edge."""
    if depth < 1:
        raise ValueError("need depth >= 1")
    n, edges, order = binary_tree(depth)
    dep = {v: int(math.log2(v + 1)) for v in range(n)}
    chords = {frozenset(e) for e in edges}
    inner = _fan_triangulate(order, chords, dep)
    apex = n
    faces = list(inner)
    for i in range(n):
        a, b = order[i], order[(i + 1) % n]
        faces.append((apex, a, b))
    return build_triangulation(faces, name=f"apex_tree({depth})")


@dataclass(frozen=True)
class StripInfo:
    a: int
    b: int
    apex: int


def apex_strip(n: int) -> Triangulation:
    """Zigzag strip z_0..z_{n-2} (edges i,i+1 and i,i+2) plus an apex adjacent to all."""
    if n < 5 or n % 2 == 0:
        raise ValueError("need odd n >= 5")
    m = n - 1
    faces = [(i, i + 1, i + 2) for i in range(m - 2)]
    cycle = list(range(0, m, 2)) + list(range(m - 1, 0, -2))
    x = m
    for i in range(m):
        faces.append((x, cycle[i], cycle[(i + 1) % m]))
    return build_triangulation(faces, name=f"apex_strip({n})")


def apex_strip_info(n: int) -> StripInfo:
    m = n - 1
    return StripInfo(a=0, b=m - 2, apex=m)


def fig1_graph() -> Triangulation:
    """The five-vertex example: u=0, v=1, w=2, x=3, y=4 with outer face u,v,w."""
    u, v, w, x, y = range(5)
    tri = build_triangulation([(u, v, x), (v, x, y), (v, y, w), (x, y, w), (u, x, w), (u, v, w)], name="fig1")
    # orient so that the sweep from u to w below is positive
    if tri.dart_face[(u, w)] == tri.face_index((u, v, w)):
        tri = tri.reflected()
    return tri


def fig1_homotopy() -> Homotopy:
    """Face flip at {u,v,x}, boundary moves, an edge slide at (v,y); height four."""
    tri = fig1_graph()
    u, v, w, x, y = range(5)
    anchor = OuterAnchor.for_face(tri, tri.face_index((u, v, w)), u, w)
    moves = [
        hm.boundary_move(u, v, hm.FINISH, "extend"),
        hm.face_flip(u, x, v, 0),
        hm.boundary_move(v, w, hm.FINISH, "extend"),
        hm.edge_slide(v, y, 2),
        hm.face_flip(x, y, w, 1, "remove"),
        hm.face_flip(u, x, w, 0, "remove"),
        hm.boundary_move(u, w, hm.START, "retract"),
    ]
    return hm.replay(tri, anchor, moves)


def fig1_gridrep() -> GridRep:
    """A simple height-4 representation of the five-vertex example, one column per curve."""
    u, v, w, x, y = range(5)
    cols = [
        (u, u, u, u),
        (u, u, v, v),
        (u, x, v, v),
        (u, x, v, w),
        (u, x, y, w),
        (u, x, w, w),
        (u, u, w, w),
        (w, w, w, w),
    ]
    return GridRep.from_columns(cols)


# ---------------------------------------------------------------------------
# series-parallel graphs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Edge:
    m: int = 1


@dataclass(frozen=True)
class Series:
    left: "SPNode"
    right: "SPNode"
    m: int


@dataclass(frozen=True)
class Parallel:
    left: "SPNode"
    right: "SPNode"
    m: int


SPNode = Union[Edge, Series, Parallel]


def _has_st(node: SPNode) -> bool:
    if isinstance(node, Edge):
        return True
    if isinstance(node, Parallel):
        return _has_st(node.left) or _has_st(node.right)
    return False


def series(a: SPNode, b: SPNode) -> Series:
    return Series(a, b, a.m + b.m)


def parallel(a: SPNode, b: SPNode) -> Parallel:
    if _has_st(a) and _has_st(b):
        raise ValueError("parallel combination would duplicate the s-t edge")
    return Parallel(a, b, a.m + b.m)


@dataclass(frozen=True)
class SPGraph:
    root: SPNode
    n: int
    edges: tuple[tuple[int, int], ...]
    s: int = 0
    t: int = 1
    # terminals of every node, keyed by id(node) order of a preorder walk
    terminals: tuple[tuple[int, int], ...] = ()

    @property
    def m(self) -> int:
        return len(self.edges)


def _walk(node: SPNode, s: int, t: int, nxt: list[int], edges: list, terms: list) -> None:
    terms.append((s, t))
    if isinstance(node, Edge):
        edges.append((s, t))
    elif isinstance(node, Parallel):
        _walk(node.left, s, t, nxt, edges, terms)
        _walk(node.right, s, t, nxt, edges, terms)
    else:
        x = nxt[0]
        nxt[0] += 1
        _walk(node.left, s, x, nxt, edges, terms)
        _walk(node.right, x, t, nxt, edges, terms)


def materialize(root: SPNode) -> SPGraph:
    edges: list[tuple[int, int]] = []
    terms: list[tuple[int, int]] = []
    nxt = [2]
    _walk(root, 0, 1, nxt, edges, terms)
    if len({frozenset(e) for e in edges}) != len(edges):
        raise ValueError("series-parallel graph has a repeated edge")
    return SPGraph(root, nxt[0], tuple(edges), 0, 1, tuple(terms))


def random_sp(m: int, seed: Optional[int] = 0) -> SPGraph:
    """Uniform random split of the edge count; parallel only where no s-t edge doubles."""
    if m < 1:
        raise ValueError("need m >= 1")
    rng = random.Random(seed)

    def build(k: int) -> SPNode:
        if k == 1:
            return Edge()
        k1 = rng.randint(1, k - 1)
        a, b = build(k1), build(k - k1)
        if rng.random() < 0.5 and not (_has_st(a) and _has_st(b)):
            return Parallel(a, b, k)
        return Series(a, b, k)

    return materialize(build(m))


def sp_height(m: int) -> int:
    return 2 * math.ceil(math.log2(m)) + 2 if m > 1 else 2


def _pad(a: np.ndarray, h: int) -> np.ndarray:
    if a.shape[0] >= h:
        return a
    extra = np.repeat(a[:1], h - a.shape[0], axis=0)
    return np.concatenate([extra, a], axis=0)


class _SPBuilder:
    def __init__(self, g: SPGraph, check: bool):
        self.g = g
        self.check = check
        self.i = 0
        self.levels_checked = 0

    def _terms(self) -> tuple[int, int]:
        st = self.g.terminals[self.i]
        self.i += 1
        return st

    def build(self, node: SPNode, top_is_s: bool) -> np.ndarray:
        # must visit nodes in the same preorder as materialize()
        s, t = self._terms()
        top, bottom = (s, t) if top_is_s else (t, s)
        if isinstance(node, Edge):
            return np.array([[top], [bottom]], dtype=np.int64)
        H = sp_height(node.m)
        if isinstance(node, Parallel):
            g1 = self.build(node.left, top_is_s)
            g2 = self.build(node.right, top_is_s)
            if node.right.m > node.left.m:
                g1, g2 = g2, g1
            g1 = _pad(g1, H)
            g2 = _pad(g2, H - 2)
            w2 = g2.shape[1]
            right = np.concatenate([np.full((1, w2), top), g2, np.full((1, w2), bottom)], axis=0)
            out = np.concatenate([g1, right], axis=1)
        else:
            x = self.g.terminals[self.i][1]
            left = self.build(node.left, top_is_s)
            right = self.build(node.right, top_is_s)
            # `near` holds the top terminal, `far` the bottom one
            near, far = (left, right) if top_is_s else (right, left)
            m_near, m_far = (node.left.m, node.right.m) if top_is_s else (node.right.m, node.left.m)
            if m_far <= m_near:
                out = _series_layout(near, far, top, x, H)
            else:
                # mirror: lay out with the roles of top and bottom swapped, then flip
                out = _series_layout(far[::-1], near[::-1], bottom, x, H)[::-1]
        if self.check:
            _check_corners(out, top, bottom)
            self.levels_checked += 1
        return out


def _series_layout(g1: np.ndarray, g2: np.ndarray, top: int, x: int, H: int) -> np.ndarray:
    """g1 spans top..x, g2 spans x..bottom; g2 sits under an s row and an x row."""
    g1 = _pad(g1, H)
    g2 = _pad(g2, H - 2)
    gap = np.full((H, 1), x)
    gap[0, 0] = top
    w2 = g2.shape[1]
    right = np.concatenate([np.full((1, w2), top), np.full((1, w2), x), g2], axis=0)
    return np.concatenate([g1, gap, right], axis=1)


def _check_corners(a: np.ndarray, top: int, bottom: int) -> None:
    if a[0, -1] != top or a[-1, -1] != bottom:
        raise AssertionError("corner labels broken")
    has_top = (a == top).any(axis=0)
    has_bottom = (a == bottom).any(axis=0)
    if (a[0, has_top] != top).any() or (a[-1, has_bottom] != bottom).any():
        raise AssertionError("terminal column condition broken")


def sp_gridrep(g: SPGraph, check: bool = False) -> GridRep:
    """Simple representation of height at most 2 ceil(log2 m) + 2."""
    b = _SPBuilder(g, check)
    a = b.build(g.root, True)
    return GridRep.from_array(_pad(a, 2))
