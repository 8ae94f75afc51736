"""Exact homotopy height by iterative deepening, a grid oracle, and the chain check."""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from typing import Iterator, Optional

from . import homotopy as hm
from .gridrep import GridRep, validate_gridrep
from .homotopy import Homotopy, Move, validate_homotopy
from .parameters import outerplanarity, pathwidth_exact
from .planar import OuterAnchor, Triangulation, edge_anchors, face_anchors

DEFAULT_BUDGET = 5_000_000
log = logging.getLogger(__name__)


class BudgetExceeded(RuntimeError):
    """Search budget ran out; ``bound``/``cert`` is the best homotopy found so far."""

    def __init__(self, bound: Optional[int], cert: Optional[Homotopy], lower: int):
        super().__init__(f"budget exceeded; best upper bound {bound}, proven lower bound {lower}")
        self.bound = bound
        self.cert = cert
        self.lower = lower


class ChainViolation(AssertionError):
    pass


def threads() -> int:
    try:
        return max(1, int(os.environ.get("HEIGHTLAB_THREADS", "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# monotone state-space search
# ---------------------------------------------------------------------------

class _Counter:
    def __init__(self, budget: int):
        self.budget = budget
        self.left = budget

    @property
    def used(self) -> int:
        return self.budget - self.left

    def tick(self) -> None:
        self.left -= 1
        if self.left < 0:
            raise _OutOfBudget()


class _OutOfBudget(Exception):
    pass


class _Searcher:
    """Positive-only sweep from u to v for one anchor."""

    def __init__(self, tri: Triangulation, anchor: OuterAnchor, simple: bool):
        self.tri = tri
        self.a = anchor
        self.simple = simple
        inner = sorted(anchor.inner_faces(tri))
        self.bit = {f: 1 << i for i, f in enumerate(inner)}
        self.full = (1 << len(inner)) - 1
        self.spos = {x: i for i, x in enumerate(anchor.s_path)}
        self.tpos = {x: i for i, x in enumerate(anchor.t_path)}
        self.fverts = [frozenset(f) for f in tri.faces]
        self.rot_index = [{w: i for i, w in enumerate(r)} for r in tri.rotation]

    def third(self, f: int, a: int, b: int) -> int:
        (z,) = self.fverts[f] - {a, b}
        return z

    def free(self, f: Optional[int], swept: int) -> bool:
        b = self.bit.get(f)
        return b is not None and not swept & b

    def touched(self, curve: tuple[int, ...], swept: int) -> set[int]:
        out = {self.a.u}
        out.update(self.a.s_path[: self.spos[curve[0]] + 1])
        out.update(self.a.t_path[: self.tpos[curve[-1]] + 1])
        for f, b in self.bit.items():
            if swept & b:
                out.update(self.fverts[f])
        return out

    def successors(self, curve: tuple[int, ...], swept: int, k: int) -> Iterator[tuple[tuple[int, ...], int, Move]]:
        tri = self.tri
        df = tri.dart_face
        L = len(curve)
        blocked: set[int] = set()
        if self.simple:
            blocked = self.touched(curve, swept) | set(curve)

        # face flips, inserting then removing
        if L + 1 <= k:
            for i in range(L - 1):
                x, y = curve[i], curve[i + 1]
                f = df[(y, x)]
                if self.free(f, swept):
                    z = self.third(f, x, y)
                    if self.simple and z in blocked:
                        continue
                    yield curve[: i + 1] + (z,) + curve[i + 1:], swept | self.bit[f], hm.face_flip(x, z, y, i)
        for i in range(L - 2):
            x, z, y = curve[i: i + 3]
            f = df[(z, x)]
            if y in self.fverts[f] and y != x and self.free(f, swept):
                yield curve[: i + 1] + curve[i + 2:], swept | self.bit[f], hm.face_flip(x, z, y, i, "remove")

        # edge slides
        for i in range(1, L - 1):
            z, x, t = curve[i - 1], curve[i], curve[i + 1]
            if z == t:
                continue
            f1 = df[(x, z)]
            y = self.third(f1, x, z)
            f2 = df[(t, x)]
            if f1 == f2 or y not in self.fverts[f2]:
                continue
            if not (self.free(f1, swept) and self.free(f2, swept)):
                continue
            if self.simple and y in blocked:
                continue
            yield curve[:i] + (y,) + curve[i + 1:], swept | self.bit[f1] | self.bit[f2], hm.edge_slide(x, y, i)

        # boundary edge slides and boundary moves (forward only)
        s, t = self.a.s_path, self.a.t_path
        sp, tp = self.spos[curve[0]], self.tpos[curve[-1]]
        if sp + 1 < len(s) and L >= 2:
            x, y, z = curve[0], s[sp + 1], curve[1]
            f = self.a.s_faces[sp]
            if z in self.fverts[f] and df[(z, x)] == f and self.free(f, swept):
                if not (self.simple and y in blocked):
                    yield (y,) + curve[1:], swept | self.bit[f], hm.boundary_edge_slide(x, y, hm.START)
        if tp + 1 < len(t) and L >= 2:
            x, y, z = curve[-1], t[tp + 1], curve[-2]
            f = self.a.t_faces[tp]
            if z in self.fverts[f] and df[(x, z)] == f and self.free(f, swept):
                if not (self.simple and y in blocked):
                    yield curve[:-1] + (y,), swept | self.bit[f], hm.boundary_edge_slide(x, y, hm.FINISH)
        if sp + 1 < len(s):
            b = s[sp + 1]
            if L + 1 <= k and not (self.simple and b in blocked):
                yield (b,) + curve, swept, hm.boundary_move(curve[0], b, hm.START, "extend")
            if L >= 2 and curve[1] == b:
                yield curve[1:], swept, hm.boundary_move(curve[0], b, hm.START, "retract")
        if tp + 1 < len(t):
            b = t[tp + 1]
            if L + 1 <= k and not (self.simple and b in blocked):
                yield curve + (b,), swept, hm.boundary_move(curve[-1], b, hm.FINISH, "extend")
            if L >= 2 and curve[-2] == b:
                yield curve[:-1], swept, hm.boundary_move(curve[-1], b, hm.FINISH, "retract")

        if self.simple:
            return
        # unspikes, then spikes into the unswept side
        for i in range(L - 2):
            x, y, x2 = curve[i: i + 3]
            if x == x2:
                f1, f2 = df[(x, y)], df[(y, x)]
                if self._swept(f1, swept) and self._swept(f2, swept):
                    yield curve[: i + 1] + curve[i + 3:], swept, hm.unspike(x, y, i)
        if L + 2 <= k:
            for i in range(L):
                for y in self._sector(curve, i):
                    x = curve[i]
                    if self.free(df[(x, y)], swept) and self.free(df[(y, x)], swept):
                        yield curve[:i] + (x, y, x) + curve[i + 1:], swept, hm.spike(x, y, i)

    def _swept(self, f: int, swept: int) -> bool:
        b = self.bit.get(f)
        return b is None or bool(swept & b)

    def _sector(self, curve: tuple[int, ...], i: int) -> list[int]:
        """Neighbours of curve[i] strictly inside the counter-clockwise wedge on the unswept side."""
        x = curve[i]
        rot = self.tri.rotation[x]
        k = len(rot)
        idx = self.rot_index[x]
        if len(curve) == 1:
            return list(rot)
        if i == 0:
            start = self.a.sector_after_gap(self.tri, x)
            stop = idx[curve[1]]
            if start == stop:
                return []
            out = []
            j = start
            while j != stop:
                out.append(rot[j])
                j = (j + 1) % k
            return out
        if i == len(curve) - 1:
            j = (idx[curve[i - 1]] + 1) % k
            stop = self.a.gap_end(self.tri, x)
            out = []
            while j != stop:
                out.append(rot[j])
                j = (j + 1) % k
            return out
        j = (idx[curve[i - 1]] + 1) % k
        stop = idx[curve[i + 1]]
        out = []
        while j != stop:
            out.append(rot[j])
            j = (j + 1) % k
        return out

    def search(self, k: int, counter: _Counter) -> Optional[list[Move]]:
        """Depth-first search for a sweep with every curve of at most k vertices."""
        start = ((self.a.u,), 0)
        goal = ((self.a.v,), self.full)
        parent: dict[tuple, Optional[tuple]] = {start: None}
        stack = [start]
        while stack:
            state = stack.pop()
            if state == goal:
                moves = []
                while parent[state] is not None:
                    prev, m = parent[state]
                    moves.append(m)
                    state = prev
                return moves[::-1]
            counter.tick()
            succ = list(self.successors(state[0], state[1], k))
            for curve, swept, m in reversed(succ):
                nxt = (curve, swept)
                if nxt not in parent:
                    parent[nxt] = (state, m)
                    stack.append(nxt)
        return None


def _anchors(tri: Triangulation, simple: bool) -> list[OuterAnchor]:
    out = face_anchors(tri)
    if not simple:
        out += edge_anchors(tri)
    return out


def _certify(tri: Triangulation, anchor: OuterAnchor, moves: list[Move], simple: bool) -> Homotopy:
    h = hm.replay(tri, anchor, moves, simple)
    bad = validate_homotopy(tri, h)
    if bad is not None:
        raise AssertionError(f"search produced an invalid homotopy: {bad}")
    return h


def lower_bound(tri: Triangulation) -> int:
    pw, _ = pathwidth_exact(tri)
    op, _ = outerplanarity(tri)
    return max(pw, 2 * op - 1, 1)


def _exact(tri: Triangulation, simple: bool, budget: int, start: Optional[int]) -> tuple[int, Homotopy]:
    anchors = _anchors(tri, simple)
    searchers = [_Searcher(tri, a, simple) for a in anchors]
    counter = _Counter(budget)
    lo = lower_bound(tri) if start is None else max(1, start)
    best: Optional[tuple[int, Homotopy]] = None

    # one unbounded dive for an anytime upper bound
    try:
        for srch in searchers[:1]:
            moves = srch.search(tri.n + 2 if not simple else tri.n, counter)
            if moves is not None:
                cert = _certify(tri, srch.a, moves, simple)
                best = (cert.height, cert)
    except _OutOfBudget:
        raise BudgetExceeded(None, None, lo) from None

    k = lo
    log.debug("%s %s: start at %d, dive bound %s", "sHh" if simple else "Hh", tri.name, lo, best and best[0])
    while best is None or k < best[0]:
        log.debug("height %d, %d anchors, %d nodes so far", k, len(searchers), counter.used)
        try:
            for srch in searchers:
                moves = srch.search(k, counter)
                if moves is not None:
                    cert = _certify(tri, srch.a, moves, simple)
                    return cert.height, cert
        except _OutOfBudget:
            raise BudgetExceeded(best[0] if best else None, best[1] if best else None, k) from None
        k += 1
    assert best is not None
    return best


def shh_exact(tri: Triangulation, budget: int = DEFAULT_BUDGET, start: Optional[int] = None) -> tuple[int, Homotopy]:
    """Simple homotopy height, minimized over outer faces and endpoint choices."""
    return _exact(tri, True, budget, start)


def hh_exact(tri: Triangulation, budget: int = DEFAULT_BUDGET, start: Optional[int] = None) -> tuple[int, Homotopy]:
    """Homotopy height via monotone sweeps over face and outer-edge anchors."""
    return _exact(tri, False, budget, start)


def height_for_anchor(tri: Triangulation, anchor: OuterAnchor, simple: bool, budget: int = DEFAULT_BUDGET) -> tuple[int, Homotopy]:
    srch = _Searcher(tri, anchor, simple)
    counter = _Counter(budget)
    for k in range(1, 2 * tri.n + 2):
        try:
            moves = srch.search(k, counter)
        except _OutOfBudget:
            raise BudgetExceeded(None, None, k) from None
        if moves is not None:
            cert = _certify(tri, anchor, moves, simple)
            return cert.height, cert
    raise AssertionError("no sweep found for this anchor")


# ---------------------------------------------------------------------------
# grid oracle
# ---------------------------------------------------------------------------

FEASIBLE, INFEASIBLE, INCONCLUSIVE = "feasible", "infeasible", "inconclusive"


@dataclass
class OracleResult:
    verdict: str
    rep: Optional[GridRep] = None
    width_reached: int = 0
    states: int = 0
    note: str = ""


def _canon_partition(col: tuple[int, ...], comp: list[int]) -> tuple[int, ...]:
    seen: dict[int, int] = {}
    return tuple(seen.setdefault(c, len(seen)) for c in comp)


def gmh_grid_oracle(tri: Triangulation, h: int, w_cap: int, lower: Optional[int] = None) -> OracleResult:
    """Breadth-first search over columns for a height-h grid representation.

    Independent of the homotopy machinery. A state is the last column, which
    frontier cells are already connected, which labels are finished, and which
    edges have been realized. Exhausting every reachable state proves
    infeasibility at any width.
    """
    n = tri.n
    adj = [[False] * n for _ in range(n)]
    for a, b in tri.edges:
        adj[a][b] = adj[b][a] = True
    eid = {}
    for i, (a, b) in enumerate(tri.edges):
        eid[(a, b)] = eid[(b, a)] = i
    all_edges = (1 << len(tri.edges)) - 1
    all_labels = (1 << n) - 1

    cols: list[tuple[int, ...]] = []

    def build(prefix: list[int]) -> None:
        if len(prefix) == h:
            cols.append(tuple(prefix))
            return
        for x in range(n):
            if not prefix or prefix[-1] == x or adj[prefix[-1]][x]:
                build(prefix + [x])

    build([])
    vmask = {}
    vcomp = {}
    for c in cols:
        m = 0
        comp = list(range(h))
        for r in range(h - 1):
            if c[r] != c[r + 1]:
                m |= 1 << eid[(c[r], c[r + 1])]
            else:
                comp[r + 1] = comp[r]
        vmask[c] = m
        vcomp[c] = comp

    def finish(col, part, closed, realized, width) -> Optional[OracleResult]:
        labels = set(col)
        used = closed | sum(1 << x for x in labels)
        if used != all_labels or realized != all_edges:
            return None
        for x in labels:
            if len({part[r] for r in range(h) if col[r] == x}) != 1:
                return None
        return OracleResult(FEASIBLE, width_reached=width)

    start_states = []
    for c in cols:
        part = _canon_partition(c, vcomp[c])
        start_states.append((c, part, 0, vmask[c]))

    parent: dict[tuple, Optional[tuple]] = {s: None for s in start_states}
    frontier = list(dict.fromkeys(start_states))
    width = 1
    found = None
    while frontier and found is None:
        for st in frontier:
            if finish(*st, width) is not None:
                found = st
                break
        if found is not None or width >= w_cap:
            break
        nxt = []
        for (c, part, closed, realized) in frontier:
            for d in cols:
                ok = True
                hmask = 0
                for r in range(h):
                    x, y = c[r], d[r]
                    if x != y:
                        if not adj[x][y]:
                            ok = False
                            break
                        hmask |= 1 << eid[(x, y)]
                if not ok:
                    continue
                if any(closed >> y & 1 for y in d):
                    continue
                # union-find over 2h cells: old column 0..h-1, new column h..2h-1
                uf = list(range(2 * h))

                def find(i: int) -> int:
                    while uf[i] != i:
                        uf[i] = uf[uf[i]]
                        i = uf[i]
                    return i

                def union(i: int, j: int) -> None:
                    ri, rj = find(i), find(j)
                    if ri != rj:
                        uf[max(ri, rj)] = min(ri, rj)

                for r in range(h):
                    for r2 in range(r + 1, h):
                        if part[r] == part[r2]:
                            union(r, r2)
                    if r + 1 < h and d[r] == d[r + 1]:
                        union(h + r, h + r + 1)
                    if c[r] == d[r]:
                        union(r, h + r)
                # a component of the old column that does not continue is finished
                new_closed = closed
                dead = False
                new_roots = {find(h + r) for r in range(h)}
                for x in set(c):
                    roots = {find(r) for r in range(h) if c[r] == x}
                    live = roots & new_roots
                    if len(live) < len(roots):
                        # some component of x stops here
                        if live or len(roots) > 1:
                            dead = True
                            break
                        new_closed |= 1 << x
                if dead or any(new_closed >> y & 1 for y in d):
                    continue
                comp = [find(h + r) for r in range(h)]
                npart = _canon_partition(d, comp)
                st = (d, npart, new_closed, realized | hmask | vmask[d])
                if st not in parent:
                    parent[st] = (c, part, closed, realized)
                    nxt.append(st)
        frontier = nxt
        width += 1

    if found is not None:
        seq = []
        st = found
        while st is not None:
            seq.append(st[0])
            st = parent[st]
        rep = GridRep.from_columns(seq[::-1])
        bad = validate_gridrep(tri, rep)
        if bad is not None:
            raise AssertionError(f"oracle produced an invalid representation: {bad}")
        return OracleResult(FEASIBLE, rep, rep.width, len(parent))
    if not frontier:
        return OracleResult(INFEASIBLE, None, width, len(parent), "state space exhausted")
    lb = lower if lower is not None else lower_bound(tri)
    if h < lb:
        return OracleResult(INFEASIBLE, None, width, len(parent), f"below the lower bound {lb}")
    return OracleResult(INCONCLUSIVE, None, width, len(parent), f"width cap {w_cap} reached")


def min_feasible_height(tri: Triangulation, w_cap: int = 12, h_max: int = 6) -> Optional[int]:
    for h in range(1, h_max + 1):
        if gmh_grid_oracle(tri, h, w_cap).verdict == FEASIBLE:
            return h
    return None


# ---------------------------------------------------------------------------
# chain
# ---------------------------------------------------------------------------

@dataclass
class ParameterReport:
    graph_id: str
    pw: int
    op: int
    shh: int
    hh: int
    certificates: dict = field(default_factory=dict)
    violations: list[str] = field(default_factory=list)
    strict: dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "graph_id": self.graph_id,
            "pw": self.pw,
            "op": self.op,
            "shh": self.shh,
            "hh": self.hh,
            "gmh": self.hh,
            "sgmh": self.shh,
            "violations": list(self.violations),
            "strict": dict(self.strict),
            "ok": self.ok,
        }


def verify_chain(tri: Triangulation, budget: int = DEFAULT_BUDGET, raise_on_violation: bool = True) -> ParameterReport:
    """Check pw <= Hh <= sHh and 2 op - 1 <= Hh.

    The height searches start from 1 here, so the lower bounds are not
    assumed by the values they are checked against.
    """
    pw, pcert = pathwidth_exact(tri)
    op, ocert = outerplanarity(tri)
    hh, hcert = hh_exact(tri, budget, start=1)
    shh, scert = shh_exact(tri, budget, start=1)
    rep = ParameterReport(tri.name or f"n{tri.n}", pw, op, shh, hh)
    rep.certificates = {"pw": pcert, "op": ocert, "hh": hcert, "shh": scert}
    if not pw <= hh:
        rep.violations.append(f"pw={pw} > Hh={hh}")
    if not hh <= shh:
        rep.violations.append(f"Hh={hh} > sHh={shh}")
    if not 2 * op - 1 <= hh:
        rep.violations.append(f"2op-1={2 * op - 1} > Hh={hh}")
    rep.strict = {"pw<Hh": pw < hh, "Hh<sHh": hh < shh, "2op-1<Hh": 2 * op - 1 < hh}
    if rep.violations and raise_on_violation:
        raise ChainViolation("; ".join(rep.violations))
    return rep


__all__ = [
    "BudgetExceeded",
    "ChainViolation",
    "OracleResult",
    "ParameterReport",
    "gmh_grid_oracle",
    "hh_exact",
    "lower_bound",
    "min_feasible_height",
    "shh_exact",
    "verify_chain",
]
