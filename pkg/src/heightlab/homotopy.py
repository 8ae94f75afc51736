"""Curves, discrete homotopy moves, and homotopy validation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .planar import OuterAnchor, Triangulation
from .violation import Violation

Curve = tuple[int, ...]

FLIP = "face_flip"
SLIDE = "edge_slide"
BOUNDARY = "boundary_move"
BSLIDE = "boundary_edge_slide"
SPIKE = "spike"
UNSPIKE = "unspike"
MOVE_KINDS = (FLIP, SLIDE, BOUNDARY, BSLIDE, SPIKE, UNSPIKE)

START, FINISH = "start", "finish"


class IllegalMove(ValueError):
    pass


@dataclass(frozen=True)
class Move:
    """One elementary move.

    Parameters per kind:

    * face_flip: ``vertices=(x, z, y)``, ``position`` = index of x, ``direction``
      "insert" (x,y -> x,z,y) or "remove" (x,z,y -> x,y).
    * edge_slide: ``vertices=(x, y)``, ``position`` = index of x; z,x,t -> z,y,t.
    * boundary_move: ``vertices=(a, b)`` the outer edge from the old endpoint a
      to the new endpoint b, ``end`` start/finish, ``direction`` extend/retract.
    * boundary_edge_slide: ``vertices=(x, y)``, ``end``; the endpoint x next to
      z becomes y next to z.
    * spike / unspike: ``vertices=(x, y)``, ``position`` = index of (first) x.
    """

    kind: str
    vertices: tuple[int, ...]
    position: int = 0
    end: str = ""
    direction: str = ""

    def to_dict(self) -> dict:
        d: dict = {"kind": self.kind, "vertices": list(self.vertices)}
        if self.kind in (FLIP, SLIDE, SPIKE, UNSPIKE):
            d["position"] = self.position
        if self.kind in (BOUNDARY, BSLIDE):
            d["end"] = self.end
        if self.kind in (FLIP, BOUNDARY):
            d["direction"] = self.direction
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Move":
        return cls(d["kind"], tuple(d["vertices"]), d.get("position", 0), d.get("end", ""), d.get("direction", ""))


def face_flip(x: int, z: int, y: int, position: int, direction: str = "insert") -> Move:
    return Move(FLIP, (x, z, y), position, direction=direction)


def edge_slide(x: int, y: int, position: int) -> Move:
    return Move(SLIDE, (x, y), position)


def boundary_move(a: int, b: int, end: str, direction: str) -> Move:
    return Move(BOUNDARY, (a, b), end=end, direction=direction)


def boundary_edge_slide(x: int, y: int, end: str) -> Move:
    return Move(BSLIDE, (x, y), end=end)


def spike(x: int, y: int, position: int) -> Move:
    return Move(SPIKE, (x, y), position)


def unspike(x: int, y: int, position: int) -> Move:
    return Move(UNSPIKE, (x, y), position)


@dataclass(frozen=True)
class MoveResult:
    curve: Curve
    flips: dict[int, int] = field(default_factory=dict)


def _face_of(tri: Triangulation, a: int, b: int, c: int, inner=frozenset(), prefer: Optional[tuple[int, int]] = None) -> int:
    """Face on edge ab with third vertex c.

    Only K3 has two faces on the same vertices; there the inner face wins,
    then the one left of the dart ``prefer``.
    """
    cands = [f for f in (tri.dart_face.get((a, b)), tri.dart_face.get((b, a))) if f is not None and c in tri.faces[f]]
    if not cands or c in (a, b):
        raise IllegalMove(f"{{{a},{b},{c}}} is not a face")
    cands.sort(key=lambda f: (f not in inner, prefer is None or tri.dart_face.get(prefer) != f))
    return cands[0]


def _sign(tri: Triangulation, face: int, a: int, b: int) -> int:
    """+1 when ``face`` lies to the left of ``a -> b``, i.e. to the right of ``b -> a``."""
    return 1 if tri.dart_face.get((a, b)) == face else -1


def _boundary_step(path: Sequence[int], a: int, b: int) -> Optional[int]:
    """Index i with {path[i], path[i+1]} == {a, b}, if any."""
    for i in range(len(path) - 1):
        if {path[i], path[i + 1]} == {a, b}:
            return i
    return None


def apply_move(tri: Triangulation, curve: Sequence[int], move: Move, anchor: OuterAnchor) -> MoveResult:
    """Rewrite ``curve`` by ``move``; raises IllegalMove when the pattern does not match."""
    c = tuple(curve)
    inner = anchor.inner_faces(tri)
    k = move.kind
    p = move.position

    def need(cond: bool, why: str) -> None:
        if not cond:
            raise IllegalMove(f"{k}: {why}")

    need(k in MOVE_KINDS, "unknown move kind")
    arity = 3 if k == FLIP else 2
    need(len(move.vertices) == arity, f"needs {arity} vertices")
    if k == FLIP:
        x, z, y = move.vertices
        if move.direction == "insert":
            f = _face_of(tri, x, y, z, inner, (y, x))
        else:
            f = _face_of(tri, x, y, z, inner, (z, x))
        need(f in inner, "face is not inner")
        if move.direction == "insert":
            need(p + 1 < len(c) and c[p] == x and c[p + 1] == y, f"expected {x},{y} at {p}")
            return MoveResult(c[: p + 1] + (z,) + c[p + 1:], {f: _sign(tri, f, y, x)})
        need(move.direction == "remove", "direction must be insert or remove")
        need(p + 2 < len(c) and c[p: p + 3] == (x, z, y), f"expected {x},{z},{y} at {p}")
        return MoveResult(c[: p + 1] + c[p + 2:], {f: _sign(tri, f, z, x)})

    if k == SLIDE:
        x, y = move.vertices
        need(0 < p < len(c) - 1 and c[p] == x, f"expected interior {x} at {p}")
        z, t = c[p - 1], c[p + 1]
        need(tri.has_edge(x, y), "not an edge")
        f1, f2 = _face_of(tri, x, y, z, inner, (x, z)), _face_of(tri, x, y, t, inner, (t, x))
        need(f1 != f2, "the two faces coincide")
        need(f1 in inner and f2 in inner, "faces are not inner")
        return MoveResult(c[:p] + (y,) + c[p + 1:], {f1: _sign(tri, f1, x, z), f2: _sign(tri, f2, t, x)})

    if k == BOUNDARY:
        a, b = move.vertices
        path = anchor.s_path if move.end == START else anchor.t_path
        need(move.end in (START, FINISH), "end must be start or finish")
        need(_boundary_step(path, a, b) is not None, "edge is not on the boundary path")
        if move.direction == "extend":
            if move.end == START:
                need(c[0] == a, f"curve does not start at {a}")
                return MoveResult((b,) + c)
            need(c[-1] == a, f"curve does not end at {a}")
            return MoveResult(c + (b,))
        need(move.direction == "retract", "direction must be extend or retract")
        need(len(c) >= 2, "cannot retract a single vertex")
        if move.end == START:
            need(c[0] == a and c[1] == b, f"curve does not start with {a},{b}")
            return MoveResult(c[1:])
        need(c[-1] == a and c[-2] == b, f"curve does not end with {b},{a}")
        return MoveResult(c[:-1])

    if k == BSLIDE:
        x, y = move.vertices
        need(len(c) >= 2, "curve too short")
        if move.end == START:
            path, faces = anchor.s_path, anchor.s_faces
            need(c[0] == x, f"curve does not start at {x}")
            z = c[1]
        else:
            need(move.end == FINISH, "end must be start or finish")
            path, faces = anchor.t_path, anchor.t_faces
            need(c[-1] == x, f"curve does not end at {x}")
            z = c[-2]
        i = _boundary_step(path, x, y)
        need(i is not None, "edge is not on the boundary path")
        f = faces[i]
        need(z in tri.faces[f] and z not in (x, y), "face is not the inner face of that boundary edge")
        if move.end == START:
            return MoveResult((y,) + c[1:], {f: _sign(tri, f, z, x)})
        return MoveResult(c[:-1] + (y,), {f: _sign(tri, f, x, z)})

    if k == SPIKE:
        x, y = move.vertices
        need(0 <= p < len(c) and c[p] == x, f"expected {x} at {p}")
        need(tri.has_edge(x, y), "not an edge")
        return MoveResult(c[:p] + (x, y, x) + c[p + 1:])

    if k == UNSPIKE:
        x, y = move.vertices
        need(p + 2 < len(c) and c[p: p + 3] == (x, y, x), f"expected {x},{y},{x} at {p}")
        return MoveResult(c[: p + 1] + c[p + 3:])

    raise IllegalMove(f"unknown move kind {k!r}")


def inverse(move: Move) -> Move:
    """The move undoing ``move`` on the curve it produced."""
    k = move.kind
    if k == FLIP:
        return Move(FLIP, move.vertices, move.position, direction="remove" if move.direction == "insert" else "insert")
    if k == SLIDE:
        x, y = move.vertices
        return Move(SLIDE, (y, x), move.position)
    if k == BOUNDARY:
        a, b = move.vertices
        back = "retract" if move.direction == "extend" else "extend"
        return Move(BOUNDARY, (b, a), end=move.end, direction=back)
    if k == BSLIDE:
        x, y = move.vertices
        return Move(BSLIDE, (y, x), end=move.end)
    if k == SPIKE:
        return Move(UNSPIKE, move.vertices, move.position)
    if k == UNSPIKE:
        return Move(SPIKE, move.vertices, move.position)
    raise IllegalMove(f"unknown move kind {k!r}")


@dataclass(frozen=True)
class Homotopy:
    anchor: OuterAnchor
    curves: tuple[Curve, ...]
    moves: tuple[Move, ...]
    simple: bool = True

    @property
    def height(self) -> int:
        return homotopy_height(self)

    def flip_numbers(self, tri: Triangulation) -> dict[int, int]:
        total = {f: 0 for f in self.anchor.inner_faces(tri)}
        for c, m in zip(self.curves, self.moves):
            for f, d in apply_move(tri, c, m, self.anchor).flips.items():
                total[f] = total.get(f, 0) + d
        return total


def homotopy_height(h: Homotopy) -> int:
    return max(len(c) for c in h.curves)


def replay(tri: Triangulation, anchor: OuterAnchor, moves: Sequence[Move], simple: bool = True) -> Homotopy:
    """Build a homotopy from u by applying ``moves`` in order."""
    curves = [(anchor.u,)]
    for m in moves:
        curves.append(apply_move(tri, curves[-1], m, anchor).curve)
    return Homotopy(anchor, tuple(curves), tuple(moves), simple)


def count_composite_boundary_slides(h: Homotopy) -> int:
    """Face flips immediately followed by a boundary retract that together act as a boundary edge slide."""
    count = 0
    for m1, m2 in zip(h.moves, h.moves[1:]):
        if m1.kind == FLIP and m1.direction == "insert" and m2.kind == BOUNDARY and m2.direction == "retract":
            x, _, y = m1.vertices
            if m2.end == START and m1.position == 0 and m2.vertices[0] == x:
                count += 1
            elif m2.end == FINISH and m2.vertices[0] == y:
                count += 1
    return count


def boundary_slide_forms(h: Homotopy) -> dict[str, int]:
    """Count boundary edge slides written atomically and as extend + face removal."""
    out = {"atomic": 0, "two_step": 0}
    for i, m in enumerate(h.moves):
        if m.kind == BSLIDE:
            out["atomic"] += 1
        elif m.kind == BOUNDARY and m.direction == "extend" and i + 1 < len(h.moves):
            nxt = h.moves[i + 1]
            if nxt.kind != FLIP or nxt.direction != "remove":
                continue
            c = h.curves[i + 1]
            at_end = nxt.position == 0 if m.end == START else nxt.position == len(c) - 3
            if at_end and nxt.vertices[1] == m.vertices[0]:
                out["two_step"] += 1
    return out


def validate_homotopy(tri: Triangulation, h: Homotopy) -> Optional[Violation]:
    """Return the first violated condition, or None when ``h`` is a valid homotopy."""
    a = h.anchor
    if len(h.curves) != len(h.moves) + 1:
        return Violation("need exactly one more curve than moves", None, "shape", subject=(len(h.curves), len(h.moves)))
    if h.curves[0] != (a.u,):
        return Violation(f"first curve must be the trivial curve at {a.u}", 0, "endpoints")
    if h.curves[-1] != (a.v,):
        return Violation(f"last curve must be the trivial curve at {a.v}", len(h.curves) - 1, "endpoints")
    if h.simple and a.u == a.v:
        return Violation("a simple homotopy needs two distinct endpoints", None, "endpoints", subject=(a.u, a.v))

    for i, c in enumerate(h.curves):
        if not c:
            return Violation("empty curve", i, "curve")
        if any(not 0 <= x < tri.n for x in c):
            return Violation("unknown vertex", i, "curve")
        if any(not tri.has_edge(p, q) for p, q in zip(c, c[1:])):
            return Violation("consecutive vertices are not adjacent", i, "curve")
        if c[0] not in a.s_path:
            return Violation("curve does not start on s", i, "boundary")
        if c[-1] not in a.t_path:
            return Violation("curve does not end on t", i, "boundary")
        if h.simple and len(set(c)) != len(c):
            return Violation("curve is not a simple path", i, "simple")

    flips = {f: 0 for f in a.inner_faces(tri)}
    for i, (c, m) in enumerate(zip(h.curves, h.moves)):
        if h.simple and m.kind in (SPIKE, UNSPIKE):
            return Violation("spikes are not allowed in a simple homotopy", i, "moves")
        try:
            res = apply_move(tri, c, m, a)
        except IllegalMove as e:
            return Violation(str(e), i, "moves")
        if res.curve != h.curves[i + 1]:
            return Violation("move does not produce the next curve", i, "moves")
        for f, d in res.flips.items():
            flips[f] += d

    if h.simple:
        first: dict[int, int] = {}
        last: dict[int, int] = {}
        for i, c in enumerate(h.curves):
            for x in c:
                first.setdefault(x, i)
                last[x] = i
        for x in first:
            for i in range(first[x], last[x] + 1):
                if x not in h.curves[i]:
                    return Violation(f"vertex {x} leaves and re-enters the curve", i, "condition 4")

    for f in sorted(flips):
        if flips[f] != 1:
            return Violation(f"face {f} has flip number {flips[f]}", None, "non-trivial", subject=(f,))
    return None
