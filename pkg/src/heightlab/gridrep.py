"""Grid-major representations and their contact-representation view."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .planar import Triangulation
from .violation import Violation


class NormalizationFailed(RuntimeError):
    def __init__(self, step: str, detail: str = ""):
        super().__init__(f"normalization step {step} failed{': ' + detail if detail else ''}")
        self.step = step


@dataclass(frozen=True)
class GridRep:
    """Row-major labels; row 0 is the top row."""

    labels: tuple[tuple[int, ...], ...]

    @property
    def height(self) -> int:
        return len(self.labels)

    @property
    def width(self) -> int:
        return len(self.labels[0]) if self.labels else 0

    @classmethod
    def from_array(cls, a) -> "GridRep":
        arr = np.asarray(a, dtype=np.int64)
        return cls(tuple(map(tuple, arr.tolist())))

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[int]]) -> "GridRep":
        return cls.from_array(np.array(cols, dtype=np.int64).T)

    def array(self) -> np.ndarray:
        return np.array(self.labels, dtype=np.int64).reshape(self.height, self.width)

    def columns(self) -> list[tuple[int, ...]]:
        return [tuple(int(x) for x in col) for col in self.array().T]

    def is_simple(self) -> bool:
        return _first_nonsimple(self.array()) is None

    def mirrored(self) -> "GridRep":
        return GridRep.from_array(self.array()[:, ::-1])

    def flipped(self) -> "GridRep":
        return GridRep.from_array(self.array()[::-1, :])

    def to_dict(self) -> dict:
        return {"height": self.height, "width": self.width, "labels": [list(r) for r in self.labels]}


def collapse(seq: Sequence[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in seq:
        if not out or out[-1] != x:
            out.append(int(x))
    return tuple(out)


def _first_nonsimple(a: np.ndarray) -> Optional[tuple[int, int]]:
    if a.shape[0] < 2:
        return None
    # a column is simple iff its number of runs equals its number of distinct labels
    runs = 1 + np.count_nonzero(a[1:] != a[:-1], axis=0)
    s = np.sort(a, axis=0)
    distinct = 1 + np.count_nonzero(s[1:] != s[:-1], axis=0)
    bad = np.flatnonzero(runs != distinct)
    if not len(bad):
        return None
    c = int(bad[0])
    seen: set[int] = set()
    prev = None
    for r, x in enumerate(a[:, c].tolist()):
        if x != prev and x in seen:
            return (r, c)
        seen.add(x)
        prev = x
    return None


def contact_pairs(a: np.ndarray) -> np.ndarray:
    """Distinct unordered label pairs that meet across a grid edge, shape (k, 2)."""
    pairs = []
    if a.shape[1] > 1:
        pairs.append(np.stack([a[:, :-1].ravel(), a[:, 1:].ravel()], axis=1))
    if a.shape[0] > 1:
        pairs.append(np.stack([a[:-1, :].ravel(), a[1:, :].ravel()], axis=1))
    if not pairs:
        return np.zeros((0, 2), dtype=np.int64)
    p = np.concatenate(pairs)
    p = p[p[:, 0] != p[:, 1]]
    lo, hi = np.minimum(p[:, 0], p[:, 1]), np.maximum(p[:, 0], p[:, 1])
    base = int(hi.max()) + 1 if len(hi) else 1
    keys = np.unique(lo * base + hi)
    return np.stack([keys // base, keys % base], axis=1)


def validate_gridrep(tri: Triangulation, rep: GridRep, require_simple: bool = False) -> Optional[Violation]:
    """Conditions (1)-(3) with exact contacts, plus simplicity when asked."""
    return check_labels(tri.n, tri.edges, rep, require_simple)


def check_labels(n: int, edges, rep: GridRep, require_simple: bool = False, exact: bool = True) -> Optional[Violation]:
    """Same checks as :func:`validate_gridrep` against an explicit edge list.

    With ``exact=False`` contacts between non-adjacent labels are allowed.
    """
    if rep.height < 1 or any(len(r) != rep.width for r in rep.labels) or rep.width < 1:
        return Violation("labels must form a non-empty rectangle", None, "shape", subject=(rep.height, rep.width))
    a = rep.array()
    bad = np.argwhere((a < 0) | (a >= n))
    if len(bad):
        r, c = bad[0]
        return Violation(f"label {a[r, c]} is not a vertex, cell ({r},{c})", None, "labels", cell=(int(r), int(c)))

    present = np.zeros(n, dtype=bool)
    present[np.unique(a)] = True
    if not present.all():
        missing = int(np.flatnonzero(~present)[0])
        return Violation(f"vertex {missing} appears nowhere", None, "condition 1", subject=(missing,))

    h, w = a.shape
    idx = np.arange(h * w).reshape(h, w)
    rows, cols = [], []
    same = a[:, :-1] == a[:, 1:]
    rows.append(idx[:, :-1][same])
    cols.append(idx[:, 1:][same])
    same = a[:-1, :] == a[1:, :]
    rows.append(idx[:-1, :][same])
    cols.append(idx[1:, :][same])
    r_ = np.concatenate(rows)
    c_ = np.concatenate(cols)
    g = coo_matrix((np.ones(len(r_), dtype=np.int8), (r_, c_)), shape=(h * w, h * w))
    ncomp, comp = connected_components(g, directed=False)
    if ncomp != n:
        flat = a.ravel()
        first_comp = {}
        for cell in range(h * w):
            lab = int(flat[cell])
            if lab in first_comp and first_comp[lab] != comp[cell]:
                return Violation(f"cells of vertex {lab} are disconnected, cell ({cell // w},{cell % w})", None,
                                 "condition 2", cell=(cell // w, cell % w), subject=(lab,))
            first_comp.setdefault(lab, comp[cell])

    pairs = contact_pairs(a)
    e = np.array(edges, dtype=np.int64).reshape(-1, 2)
    e = np.sort(e, axis=1)
    ekeys = np.unique(e[:, 0] * n + e[:, 1])
    pkeys = pairs[:, 0] * n + pairs[:, 1] if len(pairs) else np.zeros(0, dtype=np.int64)
    if exact and len(pkeys):
        ok = np.isin(pkeys, ekeys)
        if not ok.all():
            x, y = (int(t) for t in pairs[np.flatnonzero(~ok)[0]])
            cell = _find_contact(a, x, y)
            return Violation(f"labels {x},{y} touch but are not adjacent, cell {cell}", None, "condition 3 exactness",
                             cell=(int(cell[0]), int(cell[1])), subject=(x, y))
    missing = ~np.isin(ekeys, pkeys)
    if missing.any():
        key = int(ekeys[np.flatnonzero(missing)[0]])
        return Violation(f"edge ({key // n},{key % n}) is not realized", None, "condition 3", subject=(key // n, key % n))

    if require_simple:
        where = _first_nonsimple(a)
        if where is not None:
            return Violation(f"column {where[1]} is not contiguous, cell {where}", None, "simplicity",
                             cell=(int(where[0]), int(where[1])))
    return None


def _find_contact(a: np.ndarray, x: int, y: int) -> tuple[int, int]:
    h, w = a.shape
    for r in range(h):
        for c in range(w):
            if a[r, c] in (x, y):
                for dr, dc in ((0, 1), (1, 0)):
                    rr, cc = r + dr, c + dc
                    if rr < h and cc < w and {int(a[r, c]), int(a[rr, cc])} == {x, y}:
                        return (r, c)
    return (-1, -1)


# ---------------------------------------------------------------------------
# contact representation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Junction:
    point: tuple[int, int]  # lattice point (i, j): between rows i-1,i and columns j-1,j
    labels: frozenset[int]
    interior: bool
    orientation: str  # "horizontal" or "vertical"
    sides: int


@dataclass(frozen=True)
class ContactRep:
    grid: GridRep
    polygons: dict[int, frozenset[tuple[int, int]]] = field(compare=False)
    junctions: tuple[Junction, ...] = field(compare=False)
    corners: tuple[tuple[int, int], ...] = field(compare=False)

    @property
    def height(self) -> int:
        return self.grid.height

    def contact_graph(self) -> set[tuple[int, int]]:
        return {(int(x), int(y)) for x, y in contact_pairs(self.grid.array())}

    def interior_vertical_junctions(self) -> list[Junction]:
        return [j for j in self.junctions if j.interior and j.orientation == "vertical"]

    def boundary_vertices(self) -> dict[str, frozenset[int]]:
        a = self.grid.array()
        return {
            "left": frozenset(int(x) for x in a[:, 0]),
            "right": frozenset(int(x) for x in a[:, -1]),
            "top": frozenset(int(x) for x in a[0, :]),
            "bottom": frozenset(int(x) for x in a[-1, :]),
        }

    def x_monotone(self) -> bool:
        return self.grid.is_simple()

    def above_below_consistent(self) -> bool:
        a = self.grid.array()
        up = a[:-1, :].ravel()
        down = a[1:, :].ravel()
        m = up != down
        seen = set(zip(up[m].tolist(), down[m].tolist()))
        return not any((y, x) in seen for x, y in seen)


def _point_dirs(a: np.ndarray, i: int, j: int) -> tuple[bool, bool, bool, bool]:
    """Boundary segments (up, down, left, right) leaving lattice point (i, j)."""
    h, w = a.shape

    def cell(r: int, c: int) -> int:
        return int(a[r, c]) if 0 <= r < h and 0 <= c < w else -1

    nw, ne, sw, se = cell(i - 1, j - 1), cell(i - 1, j), cell(i, j - 1), cell(i, j)
    up = i > 0 and nw != ne
    down = i < h and sw != se
    left = j > 0 and nw != sw
    right = j < w and ne != se
    return up, down, left, right


def to_contact(rep: GridRep) -> ContactRep:
    a = rep.array()
    h, w = a.shape
    polys: dict[int, set[tuple[int, int]]] = {}
    for r in range(h):
        for c in range(w):
            polys.setdefault(int(a[r, c]), set()).add((r, c))
    junctions = []
    corners = []
    for i in range(h + 1):
        for j in range(w + 1):
            up, down, left, right = _point_dirs(a, i, j)
            n = up + down + left + right
            rect_corner = i in (0, h) and j in (0, w)
            if rect_corner:
                corners.append((i, j))
                continue
            if n >= 3:
                interior = 0 < i < h and 0 < j < w
                labels = frozenset(
                    int(a[r, c]) for r in (i - 1, i) for c in (j - 1, j) if 0 <= r < h and 0 <= c < w
                )
                orient = "vertical" if (up and down) and not (left and right) else "horizontal"
                junctions.append(Junction((i, j), labels, interior, orient, n))
            elif n == 2 and not (up and down) and not (left and right):
                corners.append((i, j))
    return ContactRep(rep, {k: frozenset(v) for k, v in polys.items()}, tuple(junctions), tuple(corners))


def from_contact(c: ContactRep) -> GridRep:
    h, w = c.grid.height, c.grid.width
    a = np.full((h, w), -1, dtype=np.int64)
    for lab, cells in c.polygons.items():
        for r, col in cells:
            a[r, col] = lab
    return GridRep.from_array(a)


# ---------------------------------------------------------------------------
# normalization
# ---------------------------------------------------------------------------

@dataclass
class NormalizationLog:
    steps: list[tuple[str, int]] = field(default_factory=list)


class _Normalizer:
    def __init__(self, n: int, edges, rep: GridRep, simple: bool):
        self.n = n
        self.edges = list(edges)
        self.simple = simple
        self.cols = [np.array(c, dtype=np.int64) for c in rep.columns()]
        self.height = rep.height
        self.cap = rep.width * (n + rep.height) + 8
        self.log = NormalizationLog()

    def grid(self, cols=None) -> GridRep:
        return GridRep.from_array(np.stack(cols if cols is not None else self.cols, axis=1))

    def ok(self, cols) -> bool:
        return check_labels(self.n, self.edges, self.grid(cols), self.simple) is None

    def commit(self, cols, step: str, where: int) -> bool:
        if len(cols) > self.cap:
            raise NormalizationFailed(step, f"width exceeded cap {self.cap}")
        if not self.ok(cols):
            return False
        self.cols = cols
        self.log.steps.append((step, where))
        return True

    def insert(self, j: int, col: np.ndarray) -> list[np.ndarray]:
        return self.cols[: j + 1] + [col] + self.cols[j + 1:]

    # claims 0 and 1: four-sided and vertical interior junctions
    def fix_junctions(self) -> None:
        guard = 0
        while True:
            found = self._find_bad_junction()
            if found is None:
                return
            guard += 1
            if guard > self.cap:
                raise NormalizationFailed("junctions", "no progress")
            i, j = found  # between rows i-1,i and columns j,j+1
            left, right = self.cols[j], self.cols[j + 1]
            top_left = np.concatenate([left[:i], right[i:]])
            top_right = np.concatenate([right[:i], left[i:]])
            for cand in (top_left, top_right):
                if self.commit(self.insert(j, cand), "claim1", j):
                    break
            else:
                raise NormalizationFailed("claim1", f"junction at row {i}, gap {j}")

    def _find_bad_junction(self) -> Optional[tuple[int, int]]:
        a = np.stack(self.cols, axis=1)
        h, w = a.shape
        for j in range(w - 1):
            l, r = a[:, j], a[:, j + 1]
            for i in range(1, h):
                up = l[i - 1] != r[i - 1]
                down = l[i] != r[i]
                if not (up and down):
                    continue
                lft = l[i - 1] != l[i]
                rgt = r[i - 1] != r[i]
                if lft or rgt:
                    return i, j
        return None

    # claim 2: one vertical side per gap
    def split_sides(self) -> None:
        j = 0
        while j < len(self.cols) - 1:
            sides = _sides(self.cols[j], self.cols[j + 1])
            if len(sides) <= 1:
                j += 1
                continue
            a, b = sides[-1]
            new = self.cols[j + 1].copy()
            new[a: b + 1] = self.cols[j][a: b + 1]
            if not self.commit(self.insert(j, new), "claim2", j):
                raise NormalizationFailed("claim2", f"gap {j}")
            # the gap (j, new) now holds one side fewer; stay on it

    def trim_single_side(self, from_right: bool) -> None:
        cols = self.cols[::-1] if from_right else self.cols
        first = cols[0]
        if len(np.unique(first)) != 1:
            return
        u = first[0]
        k = next((i for i, c in enumerate(cols) if (c != u).any()), None)
        if k is None:
            return
        cand = cols[k:]
        if from_right:
            cand = cand[::-1]
        if not self.commit(list(cand), "claim3", k):
            # u wraps around: trimming would split it; fine in general mode if others reach the boundary
            if not self.simple and len(self.boundary()) >= 2:
                self.log.steps.append(("claim3-kept", k))
                return
            raise NormalizationFailed("claim3", "right" if from_right else "left")

    def boundary(self) -> set[int]:
        a = np.stack(self.cols, axis=1)
        return set(a[0].tolist()) | set(a[-1].tolist()) | set(a[:, 0].tolist()) | set(a[:, -1].tolist())

    def reduce_to_three(self) -> None:
        b = self.boundary()
        if len(b) > 3:
            raise NormalizationFailed("claim4", f"{len(b)} vertices on the boundary")
        if len(b) == 3:
            return
        k = next((i for i, c in enumerate(self.cols) if set(c.tolist()) - b), None)
        if k is None:
            raise NormalizationFailed("claim4", "no interior vertex")
        if not self.commit(self.cols[k:], "claim4", k):
            if self.simple:
                raise NormalizationFailed("claim4", "deleting the left part breaks the representation")

    def singletons(self) -> None:
        a = np.stack(self.cols, axis=1)
        h = a.shape[0]
        lb = list(dict.fromkeys(a[:, 0].tolist()))
        rb = list(dict.fromkeys(a[:, -1].tolist()))
        if len(lb) == 1 and len(rb) == 1 and lb != rb:
            return
        if len(lb) >= 3:
            v = next(x for x in lb if x not in (a[0, 0], a[h - 1, 0]))
            w = next(x for x in rb if x != v)
        elif len(rb) >= 3:
            w = next(x for x in rb if x not in (a[0, -1], a[h - 1, -1]))
            v = next(x for x in lb if x != w)
        else:
            v = lb[0]
            w = next((x for x in rb if x != v), None)
            if w is None:
                v = lb[-1]
                w = next((x for x in rb if x != v), None)
            if w is None:
                raise NormalizationFailed("claim5", "left and right boundary hold the same single vertex")
        cols = [np.full(h, v, dtype=np.int64)] + self.cols + [np.full(h, w, dtype=np.int64)]
        if not self.commit(cols, "claim5", 0):
            raise NormalizationFailed("claim5", f"columns of {v} and {w}")

    def run(self) -> GridRep:
        if not self.ok(self.cols):
            raise NormalizationFailed("input", str(check_labels(self.n, self.edges, self.grid(), self.simple)))
        self.fix_junctions()
        self.split_sides()
        self.trim_single_side(False)
        self.trim_single_side(True)
        self.fix_junctions()
        self.split_sides()
        self.reduce_to_three()
        self.singletons()
        self.fix_junctions()
        self.split_sides()
        return self.grid()


def _sides(left: np.ndarray, right: np.ndarray) -> list[tuple[int, int]]:
    """Maximal row runs where two adjacent columns differ."""
    diff = left != right
    out = []
    i = 0
    n = len(diff)
    while i < n:
        if diff[i]:
            k = i
            while k + 1 < n and diff[k + 1]:
                k += 1
            out.append((i, k))
            i = k + 1
        else:
            i += 1
    return out


def normalize_gridrep(tri: Triangulation, rep: GridRep, mode: str = "simple") -> tuple[GridRep, NormalizationLog]:
    if mode not in ("simple", "general"):
        raise ValueError("mode must be simple or general")
    norm = _Normalizer(tri.n, tri.edges, rep, mode == "simple")
    out = norm.run()
    if out.height != rep.height:
        raise NormalizationFailed("height", "changed")
    return out, norm.log


def normalize_contact(c: ContactRep, mode: str = "simple") -> ContactRep:
    """Normalize against the representation's own contact graph."""
    if mode not in ("simple", "general"):
        raise ValueError("mode must be simple or general")
    n = int(c.grid.array().max()) + 1
    norm = _Normalizer(n, sorted(c.contact_graph()), c.grid, mode == "simple")
    return to_contact(norm.run())
