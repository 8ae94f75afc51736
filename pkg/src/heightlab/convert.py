"""Conversions between homotopies and grid-major representations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import homotopy as hm
from .gridrep import GridRep, NormalizationFailed, collapse, normalize_gridrep, validate_gridrep
from .homotopy import Homotopy, Move, validate_homotopy
from .planar import OuterAnchor, Triangulation


class ConversionError(ValueError):
    pass


@dataclass
class ConversionTrace:
    # homotopy -> grid: (first column, last column) produced by each move
    move_columns: list[tuple[int, int]] = field(default_factory=list)
    # (move index, number of staircase columns) for every insertion
    staircases: list[tuple[int, int]] = field(default_factory=list)
    # grid -> homotopy: for each gap index, the move emitted there (or None)
    column_moves: list[Optional[int]] = field(default_factory=list)
    normalization: list[tuple[str, int]] = field(default_factory=list)
    width_bound: Optional[int] = None

    def to_dict(self) -> dict:
        return {
            "move_columns": [list(x) for x in self.move_columns],
            "staircases": [list(x) for x in self.staircases],
            "column_moves": list(self.column_moves),
            "normalization": [list(x) for x in self.normalization],
            "width_bound": self.width_bound,
        }


# ---------------------------------------------------------------------------
# homotopy -> grid
# ---------------------------------------------------------------------------

class _Runs:
    """A column as a list of [label, length] runs from top to bottom."""

    def __init__(self, label: int, k: int):
        self.runs = [[label, k]]
        self.columns: list[list[int]] = []
        self.emit()

    def emit(self) -> None:
        col: list[int] = []
        for lab, ln in self.runs:
            col.extend([lab] * ln)
        self.columns.append(col)

    def labels(self) -> tuple[int, ...]:
        return tuple(r[0] for r in self.runs)

    def _donor(self, lo: int, hi: int) -> int:
        """Nearest run with a spare cell to the index range [lo, hi]; upward wins ties."""
        best = None
        for d, (_, ln) in enumerate(self.runs):
            if ln < 2:
                continue
            dist = lo - d if d < lo else (d - hi if d > hi else 0)
            key = (dist, 0 if d <= lo else 1, abs(d - lo))
            if best is None or key < best[0]:
                best = (key, d)
        if best is None:
            raise ConversionError("no spare cell; the homotopy exceeds its stated height")
        return best[1]

    def bring(self, target: int, exclude_self: bool = False) -> int:
        """Move one spare cell into run ``target`` by a staircase; returns columns used."""
        lo = hi = target
        if exclude_self:
            cands = [d for d, r in enumerate(self.runs) if r[1] >= 2 and d != target]
            if not cands:
                raise ConversionError("no spare cell for a spike")
            d = min(cands, key=lambda d: (abs(d - target), 0 if d < target else 1))
        else:
            d = self._donor(lo, hi)
        used = 0
        if d < target:
            for i in range(d, target):
                self.runs[i][1] -= 1
                self.runs[i + 1][1] += 1
                self.emit()
                used += 1
        elif d > target:
            for i in range(d, target, -1):
                self.runs[i][1] -= 1
                self.runs[i - 1][1] += 1
                self.emit()
                used += 1
        return used

    def insert_between(self, p: int, label: int) -> int:
        """New one-cell run between runs p and p+1 (p = -1 or len-1 for the ends)."""
        n = len(self.runs)
        used = 0
        if p < 0:
            src = 0
        elif p >= n - 1:
            src = n - 1
        elif self.runs[p][1] >= 2:
            src = p
        elif self.runs[p + 1][1] >= 2:
            src = p + 1
        else:
            src = p if self._donor(p, p + 1) < p else p + 1
        if self.runs[src][1] < 2:
            used = self.bring(src)
        self.runs[src][1] -= 1
        self.runs.insert(p + 1, [label, 1])
        self.emit()
        return used


def homotopy_to_gridrep(tri: Triangulation, h: Homotopy, check: bool = True) -> tuple[GridRep, ConversionTrace]:
    if check:
        bad = validate_homotopy(tri, h)
        if bad is not None:
            raise ConversionError(f"invalid homotopy: {bad}")
    k = max(len(c) for c in h.curves)
    col = _Runs(h.curves[0][0], k)
    trace = ConversionTrace()
    for i, (c, m) in enumerate(zip(h.curves, h.moves)):
        if col.labels() != c:
            raise ConversionError(f"column {len(col.columns) - 1} does not spell curve {i}")
        start = len(col.columns)
        runs = col.runs
        kind = m.kind
        if kind == hm.SLIDE:
            runs[m.position][0] = m.vertices[1]
            col.emit()
        elif kind == hm.BSLIDE:
            runs[0 if m.end == hm.START else -1][0] = m.vertices[1]
            col.emit()
        elif kind == hm.FLIP and m.direction == "remove":
            p = m.position
            runs[p][1] += runs[p + 1][1]
            del runs[p + 1]
            col.emit()
        elif kind == hm.BOUNDARY and m.direction == "retract":
            if m.end == hm.START:
                runs[1][1] += runs[0][1]
                del runs[0]
            else:
                runs[-2][1] += runs[-1][1]
                del runs[-1]
            col.emit()
        elif kind == hm.UNSPIKE:
            p = m.position
            runs[p][1] += runs[p + 1][1] + runs[p + 2][1]
            del runs[p + 1: p + 3]
            col.emit()
        elif kind == hm.FLIP:
            used = col.insert_between(m.position, m.vertices[1])
            trace.staircases.append((i, used))
        elif kind == hm.BOUNDARY:
            p = -1 if m.end == hm.START else len(runs) - 1
            used = col.insert_between(p, m.vertices[1])
            trace.staircases.append((i, used))
        elif kind == hm.SPIKE:
            p = m.position
            used = 0
            while runs[p][1] < 3:
                used += col.bring(p, exclude_self=True)
            lab, ln = runs[p]
            a = (ln - 1) // 2
            runs[p: p + 1] = [[lab, a], [m.vertices[1], 1], [lab, ln - 1 - a]]
            col.emit()
            trace.staircases.append((i, used))
        else:
            raise ConversionError(f"unknown move {kind}")
        trace.move_columns.append((start, len(col.columns) - 1))
    if col.labels() != h.curves[-1]:
        raise ConversionError("final column does not spell the last curve")
    rep = GridRep.from_columns(col.columns)
    trace.width_bound = len(h.moves) * (2 * k + 2) + 1
    return rep, trace


# ---------------------------------------------------------------------------
# grid -> homotopy
# ---------------------------------------------------------------------------

def diff_move(a: tuple[int, ...], b: tuple[int, ...]) -> Optional[Move]:
    """The single move turning curve ``a`` into curve ``b``, if one exists."""
    if a == b:
        return None
    la, lb = len(a), len(b)
    k = 0
    while k < min(la, lb) and a[k] == b[k]:
        k += 1
    if lb == la + 1 and a[k:] == b[k + 1:]:
        y = b[k]
        if k == 0:
            return hm.boundary_move(a[0], y, hm.START, "extend")
        if k == la:
            return hm.boundary_move(a[-1], y, hm.FINISH, "extend")
        return hm.face_flip(a[k - 1], y, a[k], k - 1, "insert")
    if lb == la - 1 and a[k + 1:] == b[k:]:
        if k == 0:
            return hm.boundary_move(a[0], a[1], hm.START, "retract")
        if k == lb:
            return hm.boundary_move(a[-1], a[-2], hm.FINISH, "retract")
        return hm.face_flip(a[k - 1], a[k], a[k + 1], k - 1, "remove")
    if lb == la and a[k + 1:] == b[k + 1:]:
        if k == 0:
            return hm.boundary_edge_slide(a[0], b[0], hm.START)
        if k == la - 1:
            return hm.boundary_edge_slide(a[-1], b[-1], hm.FINISH)
        return hm.edge_slide(a[k], b[k], k)
    if lb == la + 2 and k >= 1 and b[k + 1] == a[k - 1] and a[k:] == b[k + 2:]:
        return hm.spike(a[k - 1], b[k], k - 1)
    if lb == la - 2 and k >= 1 and a[k + 1] == b[k - 1] and a[k + 2:] == b[k:]:
        return hm.unspike(b[k - 1], a[k], k - 1)
    return None


def _extract(tri: Triangulation, rep: GridRep, simple: bool) -> tuple[Homotopy, list[Optional[int]]]:
    a = rep.array()
    u = int(a[0, 0])
    v = int(a[0, -1])
    if len(set(a[:, 0].tolist())) != 1 or len(set(a[:, -1].tolist())) != 1:
        raise NormalizationFailed("extract", "left or right boundary holds more than one vertex")
    top = collapse(a[0].tolist())
    bottom = collapse(a[-1].tolist())
    boundary = set(top) | set(bottom)
    if len(boundary) == 3:
        anchor = OuterAnchor.for_face(tri, tri.face_index(tuple(boundary)), u, v)
    elif len(boundary) == 2 and not simple:
        anchor = OuterAnchor.for_edge(tri, u, v)
    else:
        raise NormalizationFailed("extract", f"boundary holds {len(boundary)} vertices")
    if anchor.s_path != top or anchor.t_path != bottom:
        raise NormalizationFailed("extract", "top and bottom rows do not match the anchor paths")
    curves = [collapse(col) for col in a.T.tolist()]
    moves: list[Move] = []
    out_curves = [curves[0]]
    gap_moves: list[Optional[int]] = []
    for j in range(len(curves) - 1):
        m = diff_move(curves[j], curves[j + 1])
        if m is None:
            if curves[j] != curves[j + 1]:
                raise NormalizationFailed("extract", f"columns {j},{j + 1} differ by more than one move")
            gap_moves.append(None)
            continue
        gap_moves.append(len(moves))
        moves.append(m)
        out_curves.append(curves[j + 1])
    return Homotopy(anchor, tuple(out_curves), tuple(moves), simple), gap_moves


def gridrep_to_homotopy(tri: Triangulation, rep: GridRep, simple: Optional[bool] = None) -> tuple[Homotopy, ConversionTrace]:
    """Sweep a normalized representation column by column.

    ``simple`` defaults to whether ``rep`` is simple. The representation (or
    its mirror image) is normalized first; whichever orientation matches the
    stored embedding yields the homotopy.
    """
    if simple is None:
        simple = rep.is_simple()
    bad = validate_gridrep(tri, rep, simple)
    if bad is not None:
        raise ConversionError(f"invalid representation: {bad}")
    mode = "simple" if simple else "general"
    errors = []
    for variant in (rep, rep.flipped()):
        norm, log = normalize_gridrep(tri, variant, mode)
        try:
            h, gaps = _extract(tri, norm, simple)
        except NormalizationFailed as e:
            errors.append(str(e))
            continue
        why = validate_homotopy(tri, h)
        if why is None:
            trace = ConversionTrace(column_moves=gaps, normalization=log.steps)
            return h, trace
        errors.append(str(why))
    raise NormalizationFailed("extract", "; ".join(errors))


def round_trip_height(tri: Triangulation, h: Homotopy) -> int:
    rep, _ = homotopy_to_gridrep(tri, h)
    back, _ = gridrep_to_homotopy(tri, rep, h.simple)
    return back.height


def columns_spell_curves(rep: GridRep, h: Homotopy, trace: ConversionTrace) -> bool:
    """Each move's last column, collapsed, is the curve after the move."""
    cols = rep.columns()
    if collapse(cols[0]) != h.curves[0]:
        return False
    for i, (_, last) in enumerate(trace.move_columns):
        if collapse(cols[last]) != h.curves[i + 1]:
            return False
    return True


def width_ok(rep: GridRep, trace: ConversionTrace) -> bool:
    return trace.width_bound is None or rep.width <= trace.width_bound


__all__ = [
    "ConversionError",
    "ConversionTrace",
    "homotopy_to_gridrep",
    "gridrep_to_homotopy",
    "diff_move",
    "round_trip_height",
    "columns_spell_curves",
    "width_ok",
]
