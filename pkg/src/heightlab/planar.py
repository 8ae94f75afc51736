"""Triangulated planar graphs with a fixed combinatorial embedding.

Vertices are dense integer ids ``0..n-1``. Every face is stored as an
oriented triple ``(a, b, c)`` rotated so that its smallest vertex comes
first; the orientation is counter-clockwise, so the face lies to the left
of each of its directed edges ``a->b``, ``b->c``, ``c->a``.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence


class TriangulationError(ValueError):
    """Base class for rejected face lists."""


class NonTriangular(TriangulationError):
    pass


class NonPlanar(TriangulationError):
    pass


class NotSimple(TriangulationError):
    pass


class Disconnected(TriangulationError):
    pass


class InvalidVertex(ValueError):
    pass


def _rotate_min_first(face: Sequence[int]) -> tuple[int, int, int]:
    a, b, c = face
    if b < a and b < c:
        return (b, c, a)
    if c < a and c < b:
        return (c, a, b)
    return (a, b, c)


@dataclass(frozen=True, eq=False)
class Triangulation:
    """An embedded maximal planar graph.

    Use :func:`build_triangulation` to construct one from a face list; the
    constructor itself performs no validation.
    """

    n: int
    faces: tuple[tuple[int, int, int], ...]
    outer_face: Optional[int] = None
    name: str = field(default="", compare=False)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Triangulation):
            return NotImplemented
        return (self.n, self.faces, self.outer_face) == (other.n, other.faces, other.outer_face)

    def __hash__(self) -> int:
        return hash((self.n, self.faces, self.outer_face))

    @cached_property
    def dart_face(self) -> dict[tuple[int, int], int]:
        """Map directed edge ``(a, b)`` to the face lying to its left."""
        out = {}
        for i, (a, b, c) in enumerate(self.faces):
            out[(a, b)] = i
            out[(b, c)] = i
            out[(c, a)] = i
        return out

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        nbrs: list[set[int]] = [set() for _ in range(self.n)]
        for a, b in self.dart_face:
            nbrs[a].add(b)
        return tuple(frozenset(s) for s in nbrs)

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted((a, b) for (a, b) in self.dart_face if a < b))

    @cached_property
    def rotation(self) -> tuple[tuple[int, ...], ...]:
        """Counter-clockwise neighbour order around each vertex."""
        succ: list[dict[int, int]] = [dict() for _ in range(self.n)]
        for a, b, c in self.faces:
            succ[a][b] = c
            succ[b][c] = a
            succ[c][a] = b
        rot = []
        for v in range(self.n):
            if not succ[v]:
                rot.append(())
                continue
            start = min(succ[v])
            seq = [start]
            nxt = succ[v][start]
            while nxt != start:
                seq.append(nxt)
                nxt = succ[v][nxt]
            rot.append(tuple(seq))
        return tuple(rot)

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, a: int, b: int) -> bool:
        return b in self.adjacency[a]

    def face_left_of(self, a: int, b: int) -> int:
        return self.dart_face[(a, b)]

    def faces_of_edge(self, a: int, b: int) -> tuple[int, int]:
        """The two faces incident to edge ``ab``: (left of a->b, left of b->a)."""
        return self.dart_face[(a, b)], self.dart_face[(b, a)]

    def third_vertex(self, face: int, a: int, b: int) -> int:
        (c,) = set(self.faces[face]) - {a, b}
        return c

    def face_index(self, triple: Iterable[int]) -> int:
        """Index of a face given by its vertices (first match for K3)."""
        target = set(triple)
        for i, f in enumerate(self.faces):
            if set(f) == target:
                return i
        raise KeyError(f"no face with vertices {sorted(target)}")

    def with_outer_face(self, index: Optional[int]) -> "Triangulation":
        return Triangulation(self.n, self.faces, index, self.name)

    def reflected(self) -> "Triangulation":
        """Mirror image: every face orientation reversed."""
        faces = tuple(sorted(_rotate_min_first((a, c, b)) for a, b, c in self.faces))
        outer = None
        if self.outer_face is not None:
            a, b, c = self.faces[self.outer_face]
            outer = faces.index(_rotate_min_first((a, c, b)))
        return Triangulation(self.n, faces, outer, self.name)


def build_triangulation(
    face_list: Iterable[Sequence[int]],
    outer_face: Optional[int] = None,
    name: str = "",
) -> Triangulation:
    """Validate a face list and return the embedded triangulation.

    Faces may be given in any orientation; they are re-oriented
    consistently starting from the first face, whose order is kept.
    ``outer_face`` indexes into the *input* list.
    """
    raw = [tuple(f) for f in face_list]
    if not raw:
        raise NonTriangular("empty face list")
    for i, f in enumerate(raw):
        if len(f) != 3:
            raise NonTriangular(f"face {i} has {len(f)} vertices, expected 3")
        if any(not isinstance(x, int) or x < 0 for x in f):
            raise NonTriangular(f"face {i} has a non-integer or negative vertex id")
        if len(set(f)) != 3:
            raise NotSimple(f"face {i} {list(f)} repeats a vertex (loop)")

    n = max(max(f) for f in raw) + 1
    seen = {v for f in raw for v in f}
    if len(seen) != n:
        missing = min(set(range(n)) - seen)
        raise Disconnected(f"vertex {missing} lies on no face")

    edge_faces: dict[frozenset[int], list[int]] = {}
    for i, f in enumerate(raw):
        for j in range(3):
            e = frozenset((f[j], f[(j + 1) % 3]))
            edge_faces.setdefault(e, []).append(i)
    for e, fs in sorted(edge_faces.items(), key=lambda kv: sorted(kv[0])):
        if len(fs) == 1:
            raise NonTriangular(f"edge {sorted(e)} bounds a single face (non-triangular hole)")
        if len(fs) > 2:
            raise NonPlanar(f"edge {sorted(e)} is shared by {len(fs)} faces")

    oriented: list[Optional[tuple[int, int, int]]] = [None] * len(raw)
    oriented[0] = raw[0]
    queue = deque([0])
    while queue:
        i = queue.popleft()
        a, b, c = oriented[i]
        for x, y in ((a, b), (b, c), (c, a)):
            for j in edge_faces[frozenset((x, y))]:
                if j == i:
                    continue
                p, q, r = raw[j]
                darts = {(p, q), (q, r), (r, p)}
                want = raw[j] if (y, x) in darts else (p, r, q)
                if oriented[j] is None:
                    oriented[j] = want
                    queue.append(j)
                elif oriented[j] != want:
                    raise NonPlanar(f"faces {i} and {j} cannot be oriented consistently")
    if any(f is None for f in oriented):
        j = oriented.index(None)
        raise Disconnected(f"face {j} is not reachable from face 0")

    darts: set[tuple[int, int]] = set()
    for f in oriented:
        a, b, c = f
        for d in ((a, b), (b, c), (c, a)):
            if d in darts:
                raise NonPlanar(f"directed edge {d} used twice")
            darts.add(d)

    succ: list[dict[int, int]] = [dict() for _ in range(n)]
    for a, b, c in oriented:
        succ[a][b] = c
        succ[b][c] = a
        succ[c][a] = b
    for v in range(n):
        start = next(iter(succ[v]))
        length, cur = 1, succ[v][start]
        while cur != start:
            length += 1
            cur = succ[v][cur]
        if length != len(succ[v]):
            raise NonPlanar(f"faces around vertex {v} do not form a single disk")

    n_edges = len(edge_faces)
    if n - n_edges + len(raw) != 2:
        raise NonPlanar(f"Euler characteristic {n - n_edges + len(raw)} != 2")

    canon = [_rotate_min_first(f) for f in oriented]
    order = sorted(range(len(canon)), key=lambda i: canon[i])
    faces = tuple(canon[i] for i in order)
    outer = None if outer_face is None else order.index(outer_face)
    tri = Triangulation(n, faces, outer, name)

    if n >= 4 and not is_three_connected(tri):
        raise Disconnected("graph is not 3-connected")
    return tri


def _connected_without(adj: Sequence[frozenset[int]], removed: set[int]) -> bool:
    rest = [v for v in range(len(adj)) if v not in removed]
    if not rest:
        return True
    seen = {rest[0]}
    stack = [rest[0]]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in removed and w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(rest)


def is_three_connected(tri: Triangulation) -> bool:
    adj = tri.adjacency
    if not _connected_without(adj, set()):
        return False
    for a in range(tri.n):
        for b in range(a + 1, tri.n):
            if not _connected_without(adj, {a, b}):
                return False
    return True


def distance(tri: Triangulation, a: int, b: int, forbidden: Iterable[int] = ()) -> Optional[int]:
    """Hop distance from ``a`` to ``b`` avoiding ``forbidden``; ``None`` if unreachable."""
    forbidden = set(forbidden)
    for v in (a, b):
        if not 0 <= v < tri.n:
            raise InvalidVertex(f"vertex {v} out of range 0..{tri.n - 1}")
        if v in forbidden:
            raise InvalidVertex(f"vertex {v} is forbidden")
    dist = {a: 0}
    queue = deque([a])
    while queue:
        v = queue.popleft()
        if v == b:
            return dist[v]
        for w in sorted(tri.adjacency[v]):
            if w not in dist and w not in forbidden:
                dist[w] = dist[v] + 1
                queue.append(w)
    return None


K4_FACES = ((0, 1, 2), (0, 3, 1), (1, 3, 2), (0, 2, 3))


def k3() -> Triangulation:
    return build_triangulation([(0, 1, 2), (0, 2, 1)], name="K3")


def k4() -> Triangulation:
    return build_triangulation(K4_FACES, name="K4")


def stack_vertex(faces: list[tuple[int, int, int]], index: int, new: int) -> list[tuple[int, int, int]]:
    a, b, c = faces[index]
    out = faces[:index] + faces[index + 1:]
    out += [(a, b, new), (b, c, new), (c, a, new)]
    return out


def enumerate_stacked_triangulations(n: int, seed: int = 0, count: int = 1) -> list[Triangulation]:
    """``count`` random stacked triangulations on ``n`` vertices.

    Each one starts from K4 and repeatedly inserts a vertex into a face
    chosen uniformly at random.
    """
    if n < 4:
        raise ValueError("stacked triangulations need n >= 4")
    rng = random.Random(seed)
    out = []
    for k in range(count):
        faces = list(K4_FACES)
        for v in range(4, n):
            faces = stack_vertex(faces, rng.randrange(len(faces)), v)
        out.append(build_triangulation(faces, name=f"stacked-n{n}-s{seed}-{k}"))
    return out


@dataclass(frozen=True)
class OuterAnchor:
    """Outer face (or doubled outer edge) with the two sweep endpoints.

    ``s_path`` and ``t_path`` both run from ``u`` to ``v``. Curves start on
    ``s_path`` and end on ``t_path``. ``s_faces[i]`` / ``t_faces[i]`` is the
    inner face next to the i-th boundary step. Orientation follows the
    convention ``u, t(uv), v, s(vu)`` clockwise: the inner face of an
    s-step ``a->b`` lies to the left of ``a->b`` and that of a t-step to
    its right.
    """

    kind: str
    u: int
    v: int
    outer: tuple[int, ...]
    s_path: tuple[int, ...]
    t_path: tuple[int, ...]
    s_faces: tuple[int, ...]
    t_faces: tuple[int, ...]
    outer_index: Optional[int] = None

    @classmethod
    def for_face(cls, tri: Triangulation, face: int, u: int, v: int) -> "OuterAnchor":
        f = tri.faces[face]
        if u == v or u not in f or v not in f:
            raise ValueError(f"({u},{v}) are not two distinct vertices of face {list(f)}")
        (w,) = set(f) - {u, v}
        if tri.dart_face[(u, v)] == face:
            t_path, s_path = (u, v), (u, w, v)
        else:
            s_path, t_path = (u, v), (u, w, v)
        s_faces = tuple(tri.dart_face[(a, b)] for a, b in zip(s_path, s_path[1:]))
        t_faces = tuple(tri.dart_face[(b, a)] for a, b in zip(t_path, t_path[1:]))
        return cls("face", u, v, tuple(f), s_path, t_path, s_faces, t_faces, face)

    @classmethod
    def for_edge(cls, tri: Triangulation, u: int, v: int) -> "OuterAnchor":
        if not tri.has_edge(u, v):
            raise ValueError(f"({u},{v}) is not an edge")
        return cls(
            "edge", u, v, (u, v), (u, v), (u, v),
            (tri.dart_face[(u, v)],), (tri.dart_face[(v, u)],),
        )

    def inner_faces(self, tri: Triangulation) -> frozenset[int]:
        return frozenset(i for i in range(len(tri.faces)) if i != self.outer_index)

    def is_boundary_edge(self, a: int, b: int) -> bool:
        if self.kind == "edge":
            return {a, b} == {self.u, self.v}
        return a in self.outer and b in self.outer

    def sector_after_gap(self, tri: Triangulation, x: int) -> int:
        """Rotation index at ``x`` of the first neighbour counter-clockwise past the outer gap."""
        rot = tri.rotation[x]
        k = len(rot)
        if self.kind == "edge":
            other = self.v if x == self.u else self.u
            return (rot.index(other) + 1) % k
        for i in range(k):
            if tri.dart_face[(x, rot[i])] == self.outer_index:
                return (i + 1) % k
        raise ValueError(f"vertex {x} is not on the outer face")

    def gap_end(self, tri: Triangulation, x: int) -> int:
        """Rotation index at ``x`` just before the outer gap (exclusive end of a sector)."""
        rot = tri.rotation[x]
        if self.kind == "edge":
            other = self.v if x == self.u else self.u
            return rot.index(other)
        for i in range(len(rot)):
            if tri.dart_face[(x, rot[i])] == self.outer_index:
                return (i + 1) % len(rot)
        raise ValueError(f"vertex {x} is not on the outer face")


def face_anchors(tri: Triangulation) -> list[OuterAnchor]:
    out = []
    for i, f in enumerate(tri.faces):
        for u in f:
            for v in f:
                if u != v:
                    out.append(OuterAnchor.for_face(tri, i, u, v))
    return out


def edge_anchors(tri: Triangulation) -> list[OuterAnchor]:
    out = []
    for a, b in tri.edges:
        out.append(OuterAnchor.for_edge(tri, a, b))
        out.append(OuterAnchor.for_edge(tri, b, a))
    return out
