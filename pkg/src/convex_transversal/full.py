"""Maximum convex partial transversal of disjoint vertical segments.

The solver maximises, over weakly convex polygons (possibly degenerate:
points, segments, x-monotone chains), the number of segments met by the
polygon boundary: placing one boundary point per met segment yields a convex
partial transversal, and conversely the convex hull boundary of any
transversal meets every segment the transversal uses.

An optimal polygon can be normalised so that its lower-hull vertices are
bottom endpoints, its upper-hull vertices are endpoints, and its leftmost
and rightmost points lie on the candidate set of endpoint/line intersections
(sliding a vertex along its segment keeps the count until an adjacent edge
passes through a segment endpoint).  The same holds with the roles of the
hulls swapped after reflecting the instance through the x-axis, so the
solver runs every branch on both orientations and takes the maximum.

Shapes are enumerated by how many endpoint vertices each hull owns:

* both hulls >= 2: a dynamic program over states (u, v, w, z) = (last upper
  edge, last lower edge), seeded from tables B (lower hull opened with a
  single vertex) and X (upper hull opened with a single edge) and closed on
  the right by a candidate point r (or degenerately at v or z);
* lower hull exactly 1: close a B entry directly;
* upper hull empty: a straight "lid" through two endpoints over a cup chain
  (this also covers pure line transversals);
* plain chains: the quadratic upper-chain solver.

Every table entry stores the bitmask of segments hit by a best boundary, so
values are mask popcounts and unions never double-count.  Convexity is
enforced by slope monotonicity along each chain plus corner conditions at
the leftmost and rightmost points; that suffices because the difference
between the cap and the cup chain is concave and vanishes at both ends,
hence the two chains cannot cross.
"""

from __future__ import annotations

import heapq
from bisect import bisect_left, bisect_right
from typing import Dict, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from .geom import (
    Instance,
    Line,
    Point,
    Transversal,
    intersect_line_vsegment,
    is_weakly_convex_ccw,
    slope,
)
from .oracle import build_candidates
from .upper import fixed_start_chain_masks, max_upper_transversal


def _popcount(m: int) -> int:
    return bin(m).count("1")


def candidate_points(w: Point, instance: Instance) -> List[Point]:
    """Candidate extreme points relative to w: all endpoints plus every
    intersection of a segment with a line through w and an endpoint."""
    cands = {p for p, _, _ in instance.endpoints}
    for p, _, _ in instance.endpoints:
        if p.x == w.x:
            continue
        line = Line.through(w, p)
        for s in instance.segments:
            hit = intersect_line_vsegment(line, s)
            if hit is not None:
                cands.add(hit)
    return sorted(cands)


def lower_chain_masks(
    ell: Point,
    verts: Sequence[Tuple[int, Point]],
    edge_mask,
    max_first_slope=None,
    return_parents: bool = False,
):
    """Lower convex (cup) chains from a fixed leftmost point.

    Mirror image of :func:`fixed_start_chain_masks`: edge slopes are
    non-decreasing and the first slope is at most ``max_first_slope``.
    """
    flip = lambda p: Point(p.x, -p.y)

    def mask(p: Point, q: Point) -> int:
        return edge_mask(flip(p), flip(q))

    return fixed_start_chain_masks(
        flip(ell),
        [(vid, flip(p)) for vid, p in verts],
        mask,
        min_first_slope=None if max_first_slope is None else -max_first_slope,
        return_parents=return_parents,
    )


class _Run:
    """Single-orientation solver context: caches and DP tables."""

    def __init__(self, instance: Instance):
        self.instance = instance
        self.n = len(instance)
        self.segments = instance.segments
        self.eps: List[Point] = [p for p, _, _ in instance.endpoints]
        self.nep = len(self.eps)
        self.bottom_ids = [2 * sid for sid in range(self.n)]
        self.cands: List[Point] = sorted(
            {p for lst in build_candidates(instance) for p in lst}
        )
        self.cand_xs = [p.x for p in self.cands]
        # slope caches: endpoint/endpoint and candidate/endpoint
        self._s_ee: Dict[Tuple[int, int], mpq] = {}
        self._s_ce: Dict[Tuple[int, int], mpq] = {}
        self._open: Dict[Tuple[Point, Point], int] = {}
        # suffix masks by segment x for incumbent pruning
        order = sorted(range(self.n), key=lambda i: self.segments[i].x)
        self.seg_xs = [self.segments[i].x for i in order]
        suf = [0] * (self.n + 1)
        for k in range(self.n - 1, -1, -1):
            suf[k] = suf[k + 1] | (1 << order[k])
        self._suffix = suf
        # branch results: descriptor -> see _close_* helpers
        self.best = 0
        self.best_info = None
        self.best_quad = 0
        self.quad_info = None
        self.B: Dict[Tuple[int, int], tuple] = {}
        self.X: Dict[Tuple[int, int], tuple] = {}
        self.Kmask: Dict[tuple, int] = {}
        self.Kparent: Dict[tuple, tuple] = {}

    # -- caches ---------------------------------------------------------

    def se(self, i: int, j: int) -> mpq:
        key = (i, j) if i < j else (j, i)
        s = self._s_ee.get(key)
        if s is None:
            s = slope(self.eps[i], self.eps[j])
            self._s_ee[key] = s
        return s

    def sc(self, ci: int, eid: int) -> mpq:
        key = (ci, eid)
        s = self._s_ce.get(key)
        if s is None:
            s = slope(self.cands[ci], self.eps[eid])
            self._s_ce[key] = s
        return s

    def mask_from(self, x) -> int:
        """Bits of segments with x-coordinate strictly greater than x."""
        return self._suffix[bisect_right(self.seg_xs, x)]

    def open_mask(self, p: Point, q: Point) -> int:
        """Segments hit by the half-open edge (p, q] (excluding x = p.x)."""
        key = (p, q)
        m = self._open.get(key)
        if m is not None:
            return m
        m = 0
        a = slope(p, q)
        lo, hi = (p.x, q.x) if p.x < q.x else (q.x, p.x)
        for rid, s in enumerate(self.segments):
            if s.x == p.x or not (lo <= s.x <= hi):
                continue
            y = p.y + a * (s.x - p.x)
            if s.y_lo <= y <= s.y_hi:
                m |= 1 << rid
        self._open[key] = m
        return m

    def closed_mask(self, p: Point, q: Point) -> int:
        m = self.open_mask(p, q)
        rid = self.instance.region_of(p)
        if rid is not None:
            m |= 1 << rid
        return m

    def _note(self, value: int, info) -> None:
        if value > self.best:
            self.best = value
            self.best_info = info

    # -- cheap branches -------------------------------------------------

    def chain_branch(self) -> None:
        k, witness = max_upper_transversal(self.instance)
        self._note(k, ("chain", witness))

    def lid_branch(self) -> None:
        """Shapes whose top is a single straight edge on a line through two
        endpoints: a lid over a cup chain, including pure line transversals."""
        seen = set()
        for i in range(self.nep):
            for j in range(i + 1, self.nep):
                p, q = self.eps[i], self.eps[j]
                if p.x == q.x:
                    continue
                lam = Line.through(p, q)
                if lam in seen:
                    continue
                seen.add(lam)
                self._lid_line(lam)

    def _lid_line(self, lam: Line) -> None:
        hits = []  # (x, Point, bit) of lam crossing each segment
        for rid, s in enumerate(self.segments):
            pt = intersect_line_vsegment(lam, s)
            if pt is not None:
                hits.append((s.x, pt, 1 << rid))
        if not hits:
            return
        hits.sort()
        hit_xs = [h[0] for h in hits]
        full = 0
        for _, _, bit in hits:
            full |= bit
        # the whole line as a (degenerate) transversal
        self._note(_popcount(full), ("line", hits))
        if _popcount(full | self.mask_from(hits[0][0])) <= self.best:
            return

        def lid_between(x0, x1) -> int:
            m = 0
            for k in range(bisect_right(hit_xs, x0), bisect_right(hit_xs, x1)):
                m |= hits[k][2]
            return m

        def emask(a: Point, b: Point) -> int:
            return self.open_mask(a, b) | lid_between(a.x, b.x)

        a = lam.a
        for li, (lx, ell, lbit) in enumerate(hits):
            verts = [
                (eid, self.eps[eid])
                for eid in self.bottom_ids
                if self.eps[eid].x > lx and self.eps[eid].y <= lam.y_at(self.eps[eid].x)
            ]
            if not verts:
                continue
            masks, parents = lower_chain_masks(
                ell, verts, emask, max_first_slope=a, return_parents=True
            )
            for key, m in masks.items():
                z = self.eps[key[1]]
                zbit = m | lbit
                s_in = slope(ell, z) if key[0] is None else slope(self.eps[key[0]], z)
                # degenerate: the last cup vertex lies on the lid itself
                if z.y == lam.y_at(z.x) and s_in >= a:
                    self._note(
                        _popcount(zbit), ("lid", lam, ell, key, parents, None, hits)
                    )
                for ri in range(len(hits) - 1, li, -1):
                    rx, r, _ = hits[ri]
                    if rx <= z.x:
                        break
                    s_zr = slope(z, r)
                    if s_zr >= a and s_zr >= s_in:
                        val = zbit | lid_between(z.x, rx)
                        self._note(
                            _popcount(val),
                            ("lid", lam, ell, key, parents, r, hits),
                        )

    # -- B table and its closures ---------------------------------------

    def compute_B(self) -> None:
        """B[(w_id, ci)]: boundaries opening with lower edge ell -> w and an
        upper chain from ell, per upper-chain ending edge."""
        for wid in self.bottom_ids:
            w = self.eps[wid]
            for ci, ell in enumerate(self.cands):
                if ell.x >= w.x:
                    break
                vlist = [
                    (eid, self.eps[eid])
                    for eid in range(self.nep)
                    if self.eps[eid].x > ell.x
                ]
                masks, parents = fixed_start_chain_masks(
                    ell,
                    vlist,
                    self.open_mask,
                    min_first_slope=self.sc(ci, wid),
                    return_parents=True,
                )
                if not masks:
                    continue
                base = self.closed_mask(ell, w)
                self.B[(wid, ci)] = (base, masks, parents)

    def close_from_B(self) -> None:
        """Finish every B entry into a polygon whose lower hull has the single
        endpoint vertex w: by a new rightmost candidate r, or degenerately at
        the last upper vertex v (closing w -> v) or at w itself (v -> w)."""
        for (wid, ci), (base, masks, parents) in self.B.items():
            w = self.eps[wid]
            ell = self.cands[ci]
            s_lw = self.sc(ci, wid)
            for key, m in masks.items():
                uk, vid = key
                v = self.eps[vid]
                quad = uk is None
                mask0 = base | m
                s_in = self.sc(ci, vid) if uk is None else self.se(uk, vid)
                bound = _popcount(mask0 | self.mask_from(min(v.x, w.x)))
                if bound <= self.best and bound <= self.best_quad:
                    continue
                # degenerate: v rightmost, lower hull closes w -> v
                if v.x > w.x and s_lw <= slope(w, v) and s_in <= slope(w, v):
                    val = mask0 | self.open_mask(w, v)
                    self._close_note(
                        _popcount(val), ("bclose", wid, ci, key, parents, None), quad
                    )
                # degenerate: w rightmost, upper hull closes v -> w
                if w.x > v.x and slope(v, w) <= s_lw and s_in >= slope(v, w):
                    val = mask0 | self.open_mask(v, w)
                    self._close_note(
                        _popcount(val), ("bclose", wid, ci, key, parents, None), quad
                    )
                # a fresh rightmost candidate r
                lo = bisect_right(self.cand_xs, max(v.x, w.x))
                for ri in range(lo, len(self.cands)):
                    r = self.cands[ri]
                    s_vr = self.sc(ri, vid)
                    s_wr = self.sc(ri, wid)
                    if s_vr <= s_in and s_wr >= s_lw and s_vr <= s_wr:
                        val = mask0 | self.open_mask(w, r) | self.open_mask(v, r)
                        self._close_note(
                            _popcount(val), ("bclose", wid, ci, key, parents, r), quad
                        )

    def _close_note(self, value: int, info, quad: bool) -> None:
        self._note(value, info)
        if quad and value > self.best_quad:
            self.best_quad = value
            self.quad_info = info

    # -- X table ---------------------------------------------------------

    def compute_X(self) -> None:
        """X[(ci, u_id)]: boundaries opening with upper edge ell -> u over a
        cup chain from ell, per cup ending edge."""
        for uid in range(self.nep):
            u = self.eps[uid]
            for ci, ell in enumerate(self.cands):
                if ell.x >= u.x:
                    break
                s_lu = self.sc(ci, uid)
                # feasibility: some cup start below ell->u and some upper
                # continuation past u must exist
                if not any(
                    self.eps[b].x > ell.x and self.sc(ci, b) <= s_lu
                    for b in self.bottom_ids
                ):
                    continue
                if not any(
                    self.eps[e].x > u.x and self.se(uid, e) <= s_lu
                    for e in range(self.nep)
                    if self.eps[e].x != u.x
                ):
                    continue
                verts = [
                    (eid, self.eps[eid])
                    for eid in self.bottom_ids
                    if self.eps[eid].x > ell.x
                ]
                masks, parents = lower_chain_masks(
                    ell, verts, self.open_mask, max_first_slope=s_lu,
                    return_parents=True,
                )
                if not masks:
                    continue
                base = self.closed_mask(ell, u)
                self.X[(ci, uid)] = (base, masks, parents)

    # -- main dynamic program ---------------------------------------------

    def _state_key(self, state: tuple) -> tuple:
        u, v, w, z = state
        vx, zx = self.eps[v].x, self.eps[z].x
        return (max(vx, zx), vx + zx)

    def run_dp(self) -> None:
        """States (u, v, w, z): last upper edge u->v, last lower edge w->z.
        Processed in order of the rightmost edge end; each settled state is
        closed on the right and extended by one vertex on either hull."""
        pending: Dict[tuple, tuple] = {}  # state -> (popcount, mask, parent)
        heap: List[tuple] = []

        def contribute(state: tuple, mask: int, parent: tuple) -> None:
            c = _popcount(mask)
            cur = pending.get(state)
            if cur is None:
                pending[state] = (c, mask, parent)
                heapq.heappush(heap, (self._state_key(state), state))
            elif c > cur[0]:
                pending[state] = (c, mask, parent)

        # seeds from B: attach the second lower vertex z
        for (wid, ci), (base, masks, parents) in self.B.items():
            w = self.eps[wid]
            s_lw = self.sc(ci, wid)
            for key, m in masks.items():
                uk, vid = key
                if uk is None:
                    continue
                for z in self.bottom_ids:
                    zp = self.eps[z]
                    if zp.x <= w.x or z == uk or z == vid:
                        continue
                    if slope(w, zp) < s_lw:
                        continue
                    contribute(
                        (uk, vid, wid, z),
                        base | m | self.open_mask(w, zp),
                        ("B", wid, ci, key, parents),
                    )
        # seeds from X: attach the second upper vertex v
        for (ci, uid), (base, masks, parents) in self.X.items():
            u = self.eps[uid]
            s_lu = self.sc(ci, uid)
            for key, m in masks.items():
                wk, z = key
                if wk is None:
                    continue
                for vid in range(self.nep):
                    vp = self.eps[vid]
                    if vp.x <= u.x or vid == wk or vid == z:
                        continue
                    if self.se(uid, vid) > s_lu:
                        continue
                    contribute(
                        (uid, vid, wk, z),
                        base | m | self.open_mask(u, vp),
                        ("X", ci, uid, key, parents),
                    )

        while heap:
            _, state = heapq.heappop(heap)
            entry = pending.pop(state, None)
            if entry is None:
                continue
            cnt, mask, parent = entry
            self.Kmask[state] = mask
            self.Kparent[state] = parent
            u, v, w, z = state
            up, vp, wp, zp = (self.eps[i] for i in state)
            if _popcount(mask | self.mask_from(min(vp.x, zp.x))) <= self.best:
                continue
            self._close_state(state, mask)
            # extend the lower hull
            s_wz = self.se(w, z)
            for z2 in self.bottom_ids:
                q = self.eps[z2]
                if q.x <= zp.x or z2 in state:
                    continue
                if slope(zp, q) >= s_wz:
                    contribute(
                        (u, v, z, z2), mask | self.open_mask(zp, q), ("t", state)
                    )
            # extend the upper hull
            s_uv = self.se(u, v)
            for v2 in range(self.nep):
                q = self.eps[v2]
                if q.x <= vp.x or v2 in state:
                    continue
                if self.se(v, v2) <= s_uv:
                    contribute(
                        (v, v2, w, z), mask | self.open_mask(vp, q), ("s", state)
                    )

    def _close_state(self, state: tuple, mask: int) -> None:
        u, v, w, z = state
        vp, zp = self.eps[v], self.eps[z]
        s_uv = self.se(u, v)
        s_wz = self.se(w, z)
        # degenerate: v rightmost, lower hull closes z -> v
        if vp.x > zp.x:
            s = self.se(z, v)
            if s >= s_wz and s_uv <= s:
                val = mask | self.open_mask(zp, vp)
                self._note(_popcount(val), ("K", state, None))
        # degenerate: z rightmost, upper hull closes v -> z
        if zp.x > vp.x:
            s = self.se(v, z)
            if s <= s_wz and s_uv >= s:
                val = mask | self.open_mask(vp, zp)
                self._note(_popcount(val), ("K", state, None))
        # a fresh rightmost candidate r
        lo = bisect_right(self.cand_xs, max(vp.x, zp.x))
        for ri in range(lo, len(self.cands)):
            s_vr = self.sc(ri, v)
            s_zr = self.sc(ri, z)
            if s_vr <= s_uv and s_zr >= s_wz and s_vr <= s_zr:
                r = self.cands[ri]
                val = mask | self.open_mask(vp, r) | self.open_mask(zp, r)
                self._note(_popcount(val), ("K", state, r))

    def solve(self) -> None:
        self.chain_branch()
        self.lid_branch()
        self.compute_B()
        self.close_from_B()
        self.compute_X()
        self.run_dp()

    # -- witness reconstruction ------------------------------------------

    def _chain_from_parents(self, key: tuple, parents: dict) -> List[int]:
        out = []
        while key is not None:
            out.append(key[1])
            key = parents[key]
        out.reverse()
        return out

    def boundary(self, info) -> List[Point]:
        """Vertex cycle (counterclockwise, starting at the leftmost point) of
        the winning polygon described by a branch descriptor."""
        kind = info[0]
        if kind == "line":
            return [pt for _, pt, _ in info[1]]
        if kind == "lid":
            _, lam, ell, key, parents, r, _ = info
            cup = [self.eps[e] for e in self._chain_from_parents(key, parents)]
            cycle = [ell] + cup
            if r is not None:
                cycle.append(r)
            return cycle
        if kind == "bclose":
            _, wid, ci, key, parents, r = info
            upper = [self.eps[e] for e in self._chain_from_parents(key, parents)]
            cycle = [self.cands[ci], self.eps[wid]]
            if r is not None:
                cycle.append(r)
            return cycle + upper[::-1]
        if kind == "K":
            _, state, r = info
            lower, upper, ell = self._unwind_state(state)
            cycle = [ell] + lower
            if r is not None:
                cycle.append(r)
            return cycle + upper[::-1]
        raise AssertionError(f"unknown branch {kind}")

    def _unwind_state(self, state: tuple):
        lower_tail: List[int] = []
        upper_tail: List[int] = []
        while True:
            u, v, w, z = state
            tag = self.Kparent[state]
            if tag[0] == "t":
                lower_tail.append(z)
                state = tag[1]
            elif tag[0] == "s":
                upper_tail.append(v)
                state = tag[1]
            elif tag[0] == "B":
                _, wid, ci, key, parents = tag
                upper = self._chain_from_parents(key, parents)
                lower = [wid, z]
                break
            else:
                _, ci, uid, key, parents = tag
                lower = self._chain_from_parents(key, parents)
                upper = [uid, v]
                break
        lower += lower_tail[::-1]
        upper += upper_tail[::-1]
        return (
            [self.eps[e] for e in lower],
            [self.eps[e] for e in upper],
            self.cands[ci],
        )

    def witness(self, value: int, info) -> Transversal:
        if info[0] == "chain":
            return info[1]
        cycle = self.boundary(info)
        return _place_points(self.instance, cycle, value)


def _place_points(instance: Instance, cycle: Sequence[Point], k: int) -> Transversal:
    """One point per met segment, ordered along the (closed) boundary cycle."""
    edges = list(zip(cycle, list(cycle[1:]) + [cycle[0]]))
    if len(cycle) == 1:
        edges = []
    used: Dict[int, None] = {}
    out: List[Tuple[Point, int]] = []

    def claim(pt: Point, sid: int) -> None:
        if sid not in used:
            used[sid] = None
            out.append((pt, sid))

    rid = instance.region_of(cycle[0])
    if rid is not None:
        claim(cycle[0], rid)
    for a, b in edges:
        here: List[Tuple[Point, int]] = []
        if a.x == b.x:
            continue
        ln = Line.through(a, b)
        lo, hi = (a.x, b.x) if a.x < b.x else (b.x, a.x)
        for sid, s in enumerate(instance.segments):
            if sid in used or not (lo <= s.x <= hi):
                continue
            y = ln.y_at(s.x)
            if s.y_lo <= y <= s.y_hi:
                here.append((Point(s.x, y), sid))
        here.sort(key=lambda t: t[0].x, reverse=b.x < a.x)
        for pt, sid in here:
            claim(pt, sid)
    assert len(out) == k, f"witness places {len(out)} points for value {k}"
    return Transversal([p for p, _ in out], [sid for _, sid in out])


def _run_pair(instance: Instance):
    """Solve both orientations; the reflected run covers the shapes whose
    upper hull owns the endpoint vertices."""
    runs = [(_Run(instance), False)]
    if len(instance) > 1:
        runs.append((_Run(instance.reflect_y()), True))
    for run, _ in runs:
        run.solve()
    return runs


def _reflect_transversal(t: Transversal) -> Transversal:
    pts = [Point(p.x, -p.y) for p in t.points]
    return Transversal(pts[::-1], t.assignment[::-1])


def _category(info, reflected: bool) -> str:
    kind = info[0]
    if kind == "chain":
        return "lower" if reflected else "upper"
    if kind == "line":
        return "line"
    side = "upper" if reflected else "lower"
    if kind == "bclose" and info[3][0] is None:
        return f"{side}-quadrilateral"
    return f"{side}-canonical"


def max_convex_transversal(instance: Instance):
    """Maximum convex partial transversal: size, witness, winning branch."""
    if len(instance) == 1:
        return 1, Transversal([instance.bottoms[0]], [0]), "upper"
    best = 0
    best_run = None
    for run, reflected in _run_pair(instance):
        if run.best > best:
            best = run.best
            best_run = (run, reflected)
    run, reflected = best_run
    witness = run.witness(best, run.best_info)
    if reflected:
        witness = _reflect_transversal(witness)
    issues = witness.issues(instance)
    assert not issues, f"invalid witness: {issues}"
    return best, witness, _category(run.best_info, reflected)


def max_quadrilateral(instance: Instance):
    """Best canonical quadrilateral (degenerate triangles and points count):
    leftmost and rightmost candidate points joined through one endpoint
    vertex per hull."""
    if len(instance) == 1:
        return 1, Transversal([instance.bottoms[0]], [0])
    best = 1
    best_run = None
    for run, reflected in _run_pair_quad(instance):
        if run.best_quad > best:
            best = run.best_quad
            best_run = (run, reflected)
    if best_run is None:
        b = instance.bottoms[0]
        return 1, Transversal([b], [0])
    run, reflected = best_run
    witness = run.witness(best, run.quad_info)
    if reflected:
        witness = _reflect_transversal(witness)
    return best, witness


def _run_pair_quad(instance: Instance):
    runs = [(_Run(instance), False), (_Run(instance.reflect_y()), True)]
    for run, _ in runs:
        run.compute_B()
        run.close_from_B()
    return runs


def compute_B(instance: Instance) -> Dict[Tuple[int, Point], Dict[tuple, int]]:
    """B table: key (w endpoint id, leftmost point), value a map from the
    upper-chain ending edge (u_id or None, v_id) to the number of segments
    hit by the opened boundary (edge ell->w plus the chain from ell)."""
    run = _Run(instance)
    run.compute_B()
    out: Dict[Tuple[int, Point], Dict[tuple, int]] = {}
    for (wid, ci), (base, masks, _) in run.B.items():
        out[(wid, run.cands[ci])] = {
            key: _popcount(base | m) for key, m in masks.items()
        }
    return out


def compute_X(instance: Instance) -> Dict[Tuple[Point, int], Dict[tuple, int]]:
    """X table: key (leftmost point, upper endpoint id u), value a map from
    the cup-chain ending edge (w_id or None, z_id) to the number of segments
    hit by the opened boundary (edge ell->u plus the cup from ell)."""
    run = _Run(instance)
    run.compute_X()
    out: Dict[Tuple[Point, int], Dict[tuple, int]] = {}
    for (ci, uid), (base, masks, _) in run.X.items():
        out[(run.cands[ci], uid)] = {
            key: _popcount(base | m) for key, m in masks.items()
        }
    return out


class FullDpTables:
    """K states with masks and backpointers, plus the runs that built them."""

    __slots__ = ("run", "reflected_run")

    def __init__(self, run: _Run, reflected_run: Optional["_Run"]):
        self.run = run
        self.reflected_run = reflected_run

    @property
    def K(self) -> Dict[tuple, int]:
        return {state: _popcount(m) for state, m in self.run.Kmask.items()}


def compute_K(instance: Instance) -> FullDpTables:
    """Fill the four-index state table over both orientations."""
    runs = _run_pair(instance)
    run = runs[0][0]
    other = runs[1][0] if len(runs) > 1 else None
    return FullDpTables(run, other)


def close_hull(instance: Instance, tables: FullDpTables) -> int:
    """Best boundary over every closed shape of the filled tables."""
    best = tables.run.best
    if tables.reflected_run is not None:
        best = max(best, tables.reflected_run.best)
    return best


def quadrilateral_sweep(
    instance: Instance,
    region_ids: Sequence[int],
    u: Point,
    w: Point,
    r_points: Sequence[Point],
) -> Dict[Point, int]:
    """For candidate points r on one vertical line, count the regions of the
    subset hit by the closed wedge u-r plus w-r, by a single upward sweep.

    Events are processed increments first, then queries, then decrements at
    equal y, so segments touched exactly at an interval endpoint count.
    """
    if not r_points:
        return {}
    gx = r_points[0].x
    assert all(r.x == gx for r in r_points), "candidates must share one x"
    events: List[tuple] = []  # (y, phase, payload)
    for rid in region_ids:
        ivs = []
        for apex in (u, w):
            iv = _wedge_interval(instance.segments[rid], apex, gx)
            if iv is not None:
                ivs.append(iv)
        for lo, hi in _merge_intervals(ivs):
            if lo is not None:
                events.append((lo, 0, 1))
            if hi is not None:
                events.append((hi, 2, -1))
    for r in r_points:
        events.append((r.y, 1, r))
    events.sort(key=lambda e: (e[0], e[1]))
    out: Dict[Point, int] = {}
    active = 0
    # unbounded-below intervals start active
    for rid in region_ids:
        ivs = [
            iv
            for apex in (u, w)
            for iv in [_wedge_interval(instance.segments[rid], apex, gx)]
            if iv is not None
        ]
        for lo, _ in _merge_intervals(ivs):
            if lo is None:
                active += 1
    for y, phase, payload in events:
        if phase == 1:
            out[payload] = active
        else:
            active += payload
    return out


def _wedge_interval(seg, apex: Point, gx):
    """Interval of r.y (r on x = gx) for which edge apex-r meets seg, as a
    (lo, hi) pair with None for an unbounded side; None when never."""
    if apex.x == gx:
        return None
    if seg.x == apex.x:
        if seg.y_lo <= apex.y <= seg.y_hi:
            return (None, None)
        return None
    lo_t, hi_t = (apex.x, gx) if apex.x < gx else (gx, apex.x)
    if not (lo_t <= seg.x <= hi_t):
        return None
    t = (seg.x - apex.x) / (gx - apex.x)  # in (0, 1]
    # y on edge at seg.x is apex.y*(1-t) + r.y*t
    lo = (seg.y_lo - apex.y * (1 - t)) / t
    hi = (seg.y_hi - apex.y * (1 - t)) / t
    return (lo, hi)


def _merge_intervals(ivs):
    """Union of closed intervals with optional unbounded ends."""
    if not ivs:
        return []
    if any(iv == (None, None) for iv in ivs):
        return [(None, None)]
    key = lambda iv: (iv[0] is not None, iv[0])
    ivs = sorted(ivs, key=key)
    merged = [list(ivs[0])]
    for lo, hi in ivs[1:]:
        last = merged[-1]
        if last[1] is None or (lo is not None and lo <= last[1]):
            if hi is None or (last[1] is not None and hi > last[1]):
                last[1] = hi
        else:
            merged.append([lo, hi])
    return [tuple(m) for m in merged]
