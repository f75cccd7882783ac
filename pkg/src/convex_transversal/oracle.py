"""Exhaustive maximum convex partial transversal for small instances.

The search space rests on the canonical-form reductions: some optimum is a
weakly convex polygon whose strictly convex vertices sit on segment endpoints,
except the leftmost vertex l and rightmost vertex r, which sit on first-order
fixed points (intersections of segments with lines through two endpoints,
endpoints included), and degenerate collinear optima lie on a line through two
endpoints.  The value of a polygon is the number of regions its boundary hits;
any boundary point of a convex curve set is in convex position, so every such
polygon yields a transversal of exactly that size.

The search enumerates pairs of interior chains (upper-hull and lower-hull
vertices strictly between l and r, both over endpoints) by a depth-first scan
of endpoints in x order with slope-monotonicity pruning, then closes each
chain pair over all admissible (l, r) candidate pairs, with cached region
bitmasks and incumbent-based pruning.  Degenerate collinear optima come from a
direct scan of all lines through two endpoints.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from .geom import (
    Instance,
    Line,
    Point,
    Turn,
    is_weakly_convex_ccw,
    orient,
    slope,
)


class TooLargeError(ValueError):
    def __init__(self, n: int, cap: int):
        super().__init__(f"instance size {n} exceeds oracle cap {cap}")


def build_candidates(instance: Instance) -> List[List[Point]]:
    """Per-region candidate points: endpoints plus first-order fixed points."""
    eps = [p for p, _, _ in instance.endpoints]
    out: List[List[Point]] = []
    for s in instance.segments:
        cands = {s.bottom, s.top}
        for i in range(len(eps)):
            for j in range(i + 1, len(eps)):
                p, q = eps[i], eps[j]
                if p.x == q.x:
                    continue
                y = p.y + slope(p, q) * (s.x - p.x)
                if s.y_lo <= y <= s.y_hi:
                    cands.add(Point(s.x, y))
        out.append(sorted(cands))
    return out


class _Search:
    def __init__(self, instance: Instance):
        self.instance = instance
        self.n = len(instance)
        self.full = (1 << self.n) - 1
        self.segments = instance.segments
        cands = build_candidates(instance)
        self.nodes: List[Point] = sorted(
            {p for lst in cands for p in lst}, key=lambda p: (p.x, p.y)
        )
        self._mask_cache: Dict[Tuple[Point, Point], int] = {}
        self.scan = sorted(
            (p for p, _, _ in instance.endpoints), key=lambda p: (p.x, p.y)
        )
        self.best = 1

    def mask(self, p: Point, q: Point) -> int:
        """Bitmask of regions hit by the closed segment [p, q]."""
        key = (p, q) if p <= q else (q, p)
        m = self._mask_cache.get(key)
        if m is not None:
            return m
        m = 0
        if p.x == q.x:
            lo, hi = (p.y, q.y) if p.y <= q.y else (q.y, p.y)
            for rid, s in enumerate(self.segments):
                if s.x == p.x and s.y_lo <= hi and lo <= s.y_hi:
                    m |= 1 << rid
        else:
            a = slope(p, q)
            lo, hi = (p.x, q.x) if p.x < q.x else (q.x, p.x)
            for rid, s in enumerate(self.segments):
                if lo <= s.x <= hi:
                    y = p.y + a * (s.x - p.x)
                    if s.y_lo <= y <= s.y_hi:
                        m |= 1 << rid
        self._mask_cache[key] = m
        return m

    def run(self) -> int:
        if self.n >= 2:
            self.best = 2
        self._lines()
        if self.best < self.n:
            self._dfs(0, [], [], 0)
        return self.best

    def _lines(self) -> None:
        """Collinear optima: scan every line through two endpoints."""
        eps = [p for p, _, _ in self.instance.endpoints]
        for i in range(len(eps)):
            for j in range(i + 1, len(eps)):
                if eps[i].x == eps[j].x:
                    continue
                line = Line.through(eps[i], eps[j])
                hits = 0
                for s in self.segments:
                    if s.y_lo <= line.y_at(s.x) <= s.y_hi:
                        hits += 1
                if hits > self.best:
                    self.best = hits

    def _dfs(self, i: int, upper: list, lower: list, chainmask: int) -> None:
        if self.best >= self.n:
            return
        if upper or lower:
            self._close(upper, lower, chainmask)
        if i == len(self.scan):
            return
        # Endpoints are visited in (x, y) order, so chains grow rightward.
        p = self.scan[i]
        # Option 1: skip this endpoint.
        self._dfs(i + 1, upper, lower, chainmask)
        # Option 2: append to the upper chain (slopes non-increasing).
        if self._extends(upper, p, Turn.CW):
            add = self.mask(upper[-1], p) if upper else 0
            self._dfs(i + 1, upper + [p], lower, chainmask | add)
        # Option 3: append to the lower chain (slopes non-decreasing).
        if self._extends(lower, p, Turn.CCW):
            add = self.mask(lower[-1], p) if lower else 0
            self._dfs(i + 1, upper, lower + [p], chainmask | add)

    @staticmethod
    def _extends(chain: list, p: Point, want: Turn) -> bool:
        if chain and chain[-1].x == p.x:
            return False
        if len(chain) < 2:
            return True
        turn = orient(chain[-2], chain[-1], p)
        return turn == want or turn == Turn.COLLINEAR

    def _close(self, upper: list, lower: list, chainmask: int) -> None:
        """Best (l, r) closure for the fixed interior chains."""
        first_x = min(c[0].x for c in (upper, lower) if c)
        last_x = max(c[-1].x for c in (upper, lower) if c)
        lefts = []
        for p in self.nodes:
            if p.x >= first_x:
                break
            if upper and len(upper) >= 2 and slope(p, upper[0]) < slope(upper[0], upper[1]):
                continue
            if lower and len(lower) >= 2 and slope(p, lower[0]) > slope(lower[0], lower[1]):
                continue
            add = 0
            if upper:
                add |= self.mask(p, upper[0])
            if lower:
                add |= self.mask(p, lower[0])
            lefts.append((p, add))
        if not lefts:
            return
        rights = []
        for p in reversed(self.nodes):
            if p.x <= last_x:
                break
            if upper and len(upper) >= 2 and slope(upper[-1], p) > slope(upper[-2], upper[-1]):
                continue
            if lower and len(lower) >= 2 and slope(lower[-1], p) < slope(lower[-2], lower[-1]):
                continue
            add = 0
            if upper:
                add |= self.mask(upper[-1], p)
            if lower:
                add |= self.mask(lower[-1], p)
            rights.append((p, add))
        if not rights:
            return
        max_right = max(bin(chainmask | add).count("1") for _, add in rights)
        lefts.sort(key=lambda t: -bin(chainmask | t[1]).count("1"))
        # The early break is only a valid bound when no chord edge l-r can
        # add regions, i.e. when both interior chains are non-empty.
        can_break = bool(upper) and bool(lower)
        for ell, ladd in lefts:
            base = chainmask | ladd
            if (
                can_break
                and bin(base).count("1") + (max_right - bin(chainmask).count("1"))
                <= self.best
            ):
                break
            for r, radd in rights:
                if len(upper) == 1 and slope(ell, upper[0]) < slope(upper[0], r):
                    continue
                if len(lower) == 1 and slope(ell, lower[0]) > slope(lower[0], r):
                    continue
                m = base | radd
                if not upper or not lower:
                    m |= self.mask(ell, r)
                v = bin(m).count("1")
                if v > self.best:
                    cycle = [ell] + lower + [r] + upper[::-1]
                    if is_weakly_convex_ccw(cycle):
                        self.best = v
                        if self.best >= self.n:
                            return


def oracle_max(instance: Instance, cap: int = 7) -> int:
    """Exhaustive maximum convex partial transversal size (small n only)."""
    n = len(instance)
    if n > cap:
        raise TooLargeError(n, cap)
    if n == 1:
        return 1
    return _Search(instance).run()


def oracle_max_upper(instance: Instance, cap: int = 8) -> int:
    """Exhaustive maximum upper convex transversal size (small n only).

    Chains run over bottom endpoints, counting every region any chain edge
    crosses (single vertices count their own region).
    """
    n = len(instance)
    if n > cap:
        raise TooLargeError(n, cap)
    if n == 1:
        return 1
    search = _Search(instance)
    bottoms = sorted(instance.bottoms, key=lambda p: (p.x, p.y))
    region_of = {p: i for i, p in enumerate(instance.bottoms)}
    best = 1

    def dfs(i: int, chain: list, mask: int) -> None:
        nonlocal best
        v = bin(mask).count("1")
        if v > best:
            best = v
        if best >= n:
            return
        for j in range(i, len(bottoms)):
            p = bottoms[j]
            if len(chain) >= 2 and orient(chain[-2], chain[-1], p) == Turn.CCW:
                continue
            add = search.mask(chain[-1], p) if chain else (1 << region_of[p])
            dfs(j + 1, chain + [p], mask | add)

    dfs(0, [], 0)
    return best
