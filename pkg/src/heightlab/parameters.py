"""Outer-planarity by peeling, and exact pathwidth for small graphs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .planar import Triangulation

PATHWIDTH_CAP = 24


class TooLarge(ValueError):
    def __init__(self, n: int, cap: int):
        super().__init__(f"n={n} exceeds the exact pathwidth cap {cap}")
        self.n = n
        self.cap = cap


@dataclass(frozen=True)
class PeelingCertificate:
    outer_face: int
    layers: tuple[frozenset[int], ...]

    @property
    def value(self) -> int:
        return len(self.layers)


@dataclass(frozen=True)
class PathDecomposition:
    bags: tuple[frozenset[int], ...]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1


# ---------------------------------------------------------------------------
# peeling
# ---------------------------------------------------------------------------

def trace_faces(rotation: dict[int, Sequence[int]]) -> list[tuple[int, ...]]:
    """Faces of a plane graph given its counter-clockwise rotation system.

    Each face is the vertex cycle of the face lying to the left of its darts.
    """
    pos = {v: {w: i for i, w in enumerate(nbrs)} for v, nbrs in rotation.items()}
    seen: set[tuple[int, int]] = set()
    faces = []
    for a in sorted(rotation):
        for b in rotation[a]:
            if (a, b) in seen:
                continue
            cycle = []
            x, y = a, b
            while (x, y) not in seen:
                seen.add((x, y))
                cycle.append(x)
                nbrs = rotation[y]
                z = nbrs[(pos[y][x] - 1) % len(nbrs)]
                x, y = y, z
            faces.append(tuple(cycle))
    return faces


def peel(n: int, faces: Sequence[Sequence[int]], outer: int) -> tuple[frozenset[int], ...]:
    """Run the outer-face removal process and return the removed layers.

    Every connected component of the remaining graph has its own outer
    boundary peeled in the same round.
    """
    edges: dict[frozenset[int], list[int]] = {}
    incident: list[set[int]] = [set() for _ in range(n)]
    adj: list[set[int]] = [set() for _ in range(n)]
    for i, f in enumerate(faces):
        for j, a in enumerate(f):
            b = f[(j + 1) % len(f)]
            incident[a].add(i)
            if a != b:
                edges.setdefault(frozenset((a, b)), []).append(i)
                adj[a].add(b)
                adj[b].add(a)

    remaining = set(range(n))
    layers = []
    while remaining:
        layer: set[int] = set()
        for comp in _components(adj, remaining):
            region = {outer}
            stack = [outer]
            while stack:
                f = stack.pop()
                cyc = faces[f]
                for j, a in enumerate(cyc):
                    b = cyc[(j + 1) % len(cyc)]
                    if a in comp and b in comp:
                        continue
                    for g in edges.get(frozenset((a, b)), ()):
                        if g not in region:
                            region.add(g)
                            stack.append(g)
            layer |= {v for v in comp if incident[v] & region or not incident[v]}
        if not layer:
            raise RuntimeError("peeling made no progress")
        layers.append(frozenset(layer))
        remaining -= layer
    return tuple(layers)


def _components(adj: Sequence[set[int]], alive: set[int]) -> list[set[int]]:
    out = []
    left = set(alive)
    while left:
        start = min(left)
        comp = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w in left and w not in comp:
                    comp.add(w)
                    stack.append(w)
        left -= comp
        out.append(comp)
    return out


def op_for_face(tri: Triangulation, face: int) -> PeelingCertificate:
    return PeelingCertificate(face, peel(tri.n, tri.faces, face))


def outerplanarity(tri: Triangulation) -> tuple[int, PeelingCertificate]:
    best: Optional[PeelingCertificate] = None
    for i in range(len(tri.faces)):
        cert = op_for_face(tri, i)
        if best is None or cert.value < best.value:
            best = cert
    return best.value, best


def check_peeling(tri: Triangulation, cert: PeelingCertificate) -> Optional[str]:
    """Replay a peeling certificate; ``None`` when it is consistent."""
    if not 0 <= cert.outer_face < len(tri.faces):
        return f"outer face {cert.outer_face} out of range"
    expected = peel(tri.n, tri.faces, cert.outer_face)
    if tuple(cert.layers) != expected:
        return "layers differ from the replayed peeling"
    covered = set().union(*cert.layers) if cert.layers else set()
    if covered != set(range(tri.n)):
        return "layers do not cover every vertex"
    return None


def grid_outerplanarity_check(h: int, w: int) -> int:
    """Peeling count of the h x w grid graph in its straight-line embedding."""
    if not 1 <= h <= w:
        raise ValueError("need 1 <= h <= w")
    if h == 1 and w == 1:
        return 1

    def vid(r: int, c: int) -> int:
        return r * w + c

    rotation: dict[int, list[int]] = {}
    for r in range(h):
        for c in range(w):
            # counter-clockwise with y pointing up (row 0 at the top): E, N, W, S
            nbrs = []
            if c + 1 < w:
                nbrs.append(vid(r, c + 1))
            if r > 0:
                nbrs.append(vid(r - 1, c))
            if c > 0:
                nbrs.append(vid(r, c - 1))
            if r + 1 < h:
                nbrs.append(vid(r + 1, c))
            rotation[vid(r, c)] = nbrs
    faces = trace_faces(rotation)

    def signed_area(cyc: Sequence[int]) -> float:
        pts = [(v % w, -(v // w)) for v in cyc]
        return sum(x0 * y1 - x1 * y0 for (x0, y0), (x1, y1) in zip(pts, pts[1:] + pts[:1])) / 2

    outer = min(range(len(faces)), key=lambda i: signed_area(faces[i]))
    return len(peel(h * w, faces, outer))


# ---------------------------------------------------------------------------
# pathwidth
# ---------------------------------------------------------------------------

def _as_graph(graph) -> tuple[int, list[tuple[int, int]]]:
    if isinstance(graph, Triangulation):
        return graph.n, list(graph.edges)
    n, edges = graph
    return n, list(edges)


def pathwidth_exact(graph, cap: int = PATHWIDTH_CAP) -> tuple[int, PathDecomposition]:
    """Exact pathwidth via a subset DP on the vertex separation number.

    ``graph`` is a :class:`Triangulation` or a pair ``(n, edges)``.
    """
    n, edges = _as_graph(graph)
    if n > cap:
        raise TooLarge(n, cap)
    if n == 0:
        return -1, PathDecomposition(())
    nbr = [0] * n
    for a, b in edges:
        nbr[a] |= 1 << b
        nbr[b] |= 1 << a

    size = 1 << n
    masks = np.arange(size, dtype=np.int64)
    bsize = np.zeros(size, dtype=np.uint8)
    for v in range(n):
        has_v = (masks >> v) & 1
        leaks = (np.int64(nbr[v]) & ~masks) != 0
        bsize += (has_v.astype(bool) & leaks).astype(np.uint8)

    popcount = np.zeros(size, dtype=np.uint8)
    for v in range(n):
        popcount += ((masks >> v) & 1).astype(np.uint8)
    order = np.argsort(popcount, kind="stable")
    bounds = np.searchsorted(popcount[order], np.arange(n + 2))

    f = np.zeros(size, dtype=np.uint8)
    for k in range(1, n + 1):
        level = order[bounds[k]:bounds[k + 1]]
        best = np.full(level.shape, 255, dtype=np.uint8)
        for v in range(n):
            bit = np.int64(1 << v)
            sel = (level & bit) != 0
            prev = f[level[sel] ^ bit]
            best[sel] = np.minimum(best[sel], prev)
        f[level] = np.maximum(bsize[level], best)

    value = int(f[size - 1])
    seq = []
    s = size - 1
    while s:
        for v in range(n):
            if s >> v & 1 and f[s ^ (1 << v)] <= f[s]:
                seq.append(v)
                s ^= 1 << v
                break
    seq.reverse()
    cert = decomposition_from_order(n, edges, seq)
    assert cert.width <= value, (cert.width, value)
    return cert.width, cert


def decomposition_from_order(n: int, edges: Iterable[tuple[int, int]], order: Sequence[int]) -> PathDecomposition:
    """Bags ``boundary(prefix) + {next vertex}`` along a vertex layout."""
    adj = [set() for _ in range(n)]
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    placed: set[int] = set()
    bags = []
    for v in order:
        boundary = {x for x in placed if adj[x] - placed}
        bags.append(frozenset(boundary | {v}))
        placed.add(v)
    return PathDecomposition(tuple(bags))


def greedy_decomposition(graph) -> PathDecomposition:
    """Min-degree-first layout; a cheap upper bound used in tests."""
    n, edges = _as_graph(graph)
    deg = [0] * n
    for a, b in edges:
        deg[a] += 1
        deg[b] += 1
    return decomposition_from_order(n, edges, sorted(range(n), key=lambda v: (deg[v], v)))


def check_path_decomposition(graph, dec: PathDecomposition) -> Optional[str]:
    n, edges = _as_graph(graph)
    where: dict[int, list[int]] = {}
    for i, bag in enumerate(dec.bags):
        for v in bag:
            if not 0 <= v < n:
                return f"bag {i} holds unknown vertex {v}"
            where.setdefault(v, []).append(i)
    for v in range(n):
        idx = where.get(v)
        if not idx:
            return f"vertex {v} is in no bag"
        if idx[-1] - idx[0] + 1 != len(idx):
            return f"bags holding vertex {v} are not consecutive"
    for a, b in edges:
        if not any(a in bag and b in bag for bag in dec.bags):
            return f"edge ({a},{b}) is in no bag"
    return None


def ceil_half(h: int) -> int:
    return math.ceil(h / 2)
