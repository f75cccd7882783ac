"""Exact rational geometry: points, vertical segments, lines, duality, and the
orientation / convexity predicates everything else is built on.

All coordinates are exact rationals (gmpy2.mpq).  ``fractions.Fraction``, ints
and "num/den" strings are accepted at every public boundary and normalized by
:func:`rat`.  No floating point enters any predicate.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from math import gcd
from typing import Iterable, NamedTuple, Optional, Sequence, Union

from gmpy2 import mpq

RationalLike = Union[int, str, Fraction, "mpq"]


def rat(value: RationalLike, den: Optional[RationalLike] = None) -> mpq:
    """Coerce ints, Fractions, mpq values or "num/den" strings to mpq."""
    if den is not None:
        return mpq(rat(value), rat(den))
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    return mpq(value)


class Turn(enum.IntEnum):
    CW = -1
    COLLINEAR = 0
    CCW = 1


class Point(NamedTuple):
    x: mpq
    y: mpq

    @staticmethod
    def of(x: RationalLike, y: RationalLike) -> "Point":
        return Point(rat(x), rat(y))


class VSegment(NamedTuple):
    x: mpq
    y_lo: mpq
    y_hi: mpq

    @staticmethod
    def of(x: RationalLike, y_lo: RationalLike, y_hi: RationalLike) -> "VSegment":
        return VSegment(rat(x), rat(y_lo), rat(y_hi))

    @property
    def bottom(self) -> Point:
        return Point(self.x, self.y_lo)

    @property
    def top(self) -> Point:
        return Point(self.x, self.y_hi)

    def contains(self, p: Point) -> bool:
        return p.x == self.x and self.y_lo <= p.y <= self.y_hi


class Line(NamedTuple):
    """Non-vertical line in the dual-friendly form y = a*x - b."""

    a: mpq
    b: mpq

    @staticmethod
    def of(a: RationalLike, b: RationalLike) -> "Line":
        return Line(rat(a), rat(b))

    @staticmethod
    def through(p: Point, q: Point) -> "Line":
        if p.x == q.x:
            raise VerticalPairError(p, q)
        a = (q.y - p.y) / (q.x - p.x)
        return Line(a, a * p.x - p.y)

    def y_at(self, x: RationalLike) -> mpq:
        x = rat(x)
        return self.a * x - self.b


class VerticalLine(NamedTuple):
    """Vertical line x = c (no dual point; kept as a separate variant)."""

    x: mpq


class Strip(NamedTuple):
    """Dual of a vertical segment: {y = slope*x - b : b in [b_lo, b_hi]}."""

    slope: mpq
    b_lo: mpq
    b_hi: mpq


class VerticalPairError(ValueError):
    """Slope requested for two points with equal x-coordinates."""

    def __init__(self, p: Point, q: Point):
        super().__init__(f"undefined slope: {p} and {q} share x = {p.x}")
        self.p = p
        self.q = q


def orient(p: Point, q: Point, r: Point) -> Turn:
    """Exact sign of the cross product of (q - p, r - p)."""
    cross = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
    if cross > 0:
        return Turn.CCW
    if cross < 0:
        return Turn.CW
    return Turn.COLLINEAR


def slope(p: Point, q: Point) -> mpq:
    """Slope of the line through p and q; symmetric in its arguments."""
    if p.x == q.x:
        raise VerticalPairError(p, q)
    return (q.y - p.y) / (q.x - p.x)


def dualize_point(p: Point) -> Line:
    """(p_x, p_y) maps to the line y = p_x * x - p_y."""
    return Line(p.x, p.y)


def dualize_line(line: Line) -> Point:
    """Inverse of dualize_point; the transform is an involution."""
    return Point(line.a, line.b)


def dualize_segment(s: VSegment) -> Strip:
    """A vertical segment maps to the strip between the duals of its ends.

    The dual of the bottom endpoint is the strip's boundary line with the
    smaller intercept b, so the strip's b-interval is [y_lo, y_hi] directly.
    """
    return Strip(s.x, s.y_lo, s.y_hi)


def intersect_line_vsegment(line: Line, s: VSegment) -> Optional[Point]:
    """Intersection of a non-vertical line with a vertical segment, if any."""
    y = line.y_at(s.x)
    if s.y_lo <= y <= s.y_hi:
        return Point(s.x, y)
    return None


def intersect_lines(l1: Line, l2: Line) -> Optional[Point]:
    """Intersection of two non-vertical lines; None when parallel."""
    if l1.a == l2.a:
        return None
    x = (l1.b - l2.b) / (l1.a - l2.a)
    return Point(x, l1.y_at(x))


def _half(p: Point, origin: Point) -> int:
    """0 for the upper half-plane (incl. positive x-axis), 1 for the lower."""
    dx, dy = p.x - origin.x, p.y - origin.y
    if dy > 0 or (dy == 0 and dx > 0):
        return 0
    return 1


def is_weakly_convex_ccw(points: Sequence[Point]) -> bool:
    """True iff the cyclic sequence traces a weakly convex CCW polygon.

    Weak convexity allows three or more collinear points on the boundary.
    Fewer than three points, or all points collinear, count as convex.  A
    collinear triple that reverses direction (a 180-degree turn) and any
    winding other than exactly one full CCW turn are rejected.
    """
    pts = list(points)
    n = len(pts)
    if n == 0:
        raise ValueError("empty point sequence")
    if len(set(pts)) != len(pts):
        return False
    if n <= 2:
        return True
    if all(orient(pts[0], pts[1], p) == Turn.COLLINEAR for p in pts[2:]):
        # Entirely collinear sets are weakly convex in any order without
        # direction reversals; an x- or y-monotone sweep certifies that.
        key = (lambda p: (p.x, p.y)) if pts[0].x != pts[1].x else (lambda p: (p.y, p.x))
        fwd = sorted(pts, key=key)
        return pts == fwd or pts == fwd[::-1]
    for i in range(n):
        p, q, r = pts[i - 2], pts[i - 1], pts[i]
        turn = orient(p, q, r)
        if turn == Turn.CW:
            return False
        if turn == Turn.COLLINEAR:
            # No doubling back along an edge.
            dot = (q.x - p.x) * (r.x - q.x) + (q.y - p.y) * (r.y - q.y)
            if dot <= 0:
                return False
    # All turns are left or straight; reject windings above one full turn by
    # counting the wraps of the edge direction angle exactly.
    wraps = 0
    prev = None
    for i in range(n + 1):
        p, q = pts[i % n], pts[(i + 1) % n]
        cur = (_half(q, p), q.x - p.x, q.y - p.y)
        if prev is not None:
            ph, pdx, pdy = prev
            ch, cdx, cdy = cur
            if ph != ch:
                if (ph, ch) == (1, 0):
                    wraps += 1
            else:
                cross = pdx * cdy - pdy * cdx
                if cross < 0:
                    # Left turns only, so a same-half decrease means a wrap.
                    wraps += 1
        prev = cur
    return wraps == 1


class ValidationIssue(NamedTuple):
    kind: str  # DuplicateX | Overlap | DegenerateSegment | CollinearEndpoints
    segments: tuple
    detail: str


class InvalidInstanceError(ValueError):
    def __init__(self, issues: Sequence[ValidationIssue]):
        super().__init__("; ".join(f"{i.kind}{list(i.segments)}: {i.detail}" for i in issues))
        self.issues = list(issues)


def _collinear_triples_fast(segments: Sequence[VSegment]) -> Iterable[tuple]:
    """Integer-coordinate collinearity scan via per-anchor float slopes.

    Floats only group candidates (equal exact slopes always collide in
    float); every collision is confirmed with an exact integer cross product.
    Requires coordinates within float-exact range.
    """
    import numpy as np

    pts = [(int(s.x), int(s.y_lo)) for s in segments]
    pts += [(int(s.x), int(s.y_hi)) for s in segments]
    n_seg = len(segments)
    xs = np.array([p[0] for p in pts], dtype=np.float64)
    ys = np.array([p[1] for p in pts], dtype=np.float64)
    seen = set()
    for i in range(len(pts) - 2):
        dx = xs[i + 1 :] - xs[i]
        dy = ys[i + 1 :] - ys[i]
        valid = np.nonzero(dx != 0)[0]
        if valid.size < 2:
            continue
        sl = dy[valid] / dx[valid]
        order = np.argsort(sl, kind="stable")
        sl_sorted = sl[order]
        px, py = pts[i]
        # Equal exact slopes always collide in float, so exact duplicates sit
        # inside equal-float runs; arbitrate each run pairwise and exactly.
        run_starts = [0] + (np.nonzero(sl_sorted[1:] != sl_sorted[:-1])[0] + 1).tolist()
        run_starts.append(len(sl_sorted))
        for a, b in zip(run_starts, run_starts[1:]):
            if b - a < 2:
                continue
            members = [i + 1 + int(valid[order[t]]) for t in range(a, b)]
            for u in range(len(members)):
                for v in range(u + 1, len(members)):
                    j, k = members[u], members[v]
                    qx, qy = pts[j]
                    rx, ry = pts[k]
                    if (qx - px) * (ry - py) == (qy - py) * (rx - px):
                        trip = tuple(sorted({i % n_seg, j % n_seg, k % n_seg}))
                        if trip in seen:
                            continue
                        seen.add(trip)
                        yield trip, (
                            Point(rat(px), rat(py)),
                            Point(rat(qx), rat(qy)),
                            Point(rat(rx), rat(ry)),
                        )


def _collinear_triples(segments: Sequence[VSegment]) -> Iterable[tuple]:
    """Yield (i, j, k) segment-id triples owning collinear endpoints."""
    endpoints = []
    for sid, s in enumerate(segments):
        endpoints.append((s.bottom, sid))
        endpoints.append((s.top, sid))
    all_int = all(
        p.x.denominator == 1 and p.y.denominator == 1 for p, _ in endpoints
    )
    if all_int and len(segments) >= 64 and all(
        abs(int(c)) < (1 << 50) for p, _ in endpoints for c in p
    ):
        yield from _collinear_triples_fast(segments)
        return
    seen = set()
    for i, (p, sid_p) in enumerate(endpoints):
        by_dir: dict = {}
        for q, sid_q in endpoints[i + 1 :]:
            dx, dy = q.x - p.x, q.y - p.y
            if dx == 0:
                # Same segment's two endpoints (or a shared x, which
                # validation reports separately); verticals cannot form a
                # collinear triple across distinct segments here.
                continue
            if all_int:
                g = gcd(int(dx), int(dy))
                key = (int(dx) // g, int(dy) // g) if g else (0, 0)
                if int(dx) < 0:
                    key = (-key[0], -key[1])
            else:
                key = dy / dx
            if key in by_dir:
                q0, sid_q0 = by_dir[key]
                trip = tuple(sorted({sid_p, sid_q0, sid_q}))
                mark = (trip, p, q0, q)
                if mark not in seen:
                    seen.add(mark)
                    yield trip, (p, q0, q)
            else:
                by_dir[key] = (q, sid_q)


def instance_issues(segments: Sequence[VSegment]) -> list:
    """All validation violations of a prospective instance."""
    issues = []
    for sid, s in enumerate(segments):
        if s.y_lo >= s.y_hi:
            issues.append(
                ValidationIssue("DegenerateSegment", (sid,), f"y_lo {s.y_lo} >= y_hi {s.y_hi}")
            )
    by_x: dict = {}
    for sid, s in enumerate(segments):
        by_x.setdefault(s.x, []).append(sid)
    for x, ids in by_x.items():
        if len(ids) > 1:
            issues.append(
                ValidationIssue("DuplicateX", tuple(ids), f"segments share x = {x}")
            )
            for a in range(len(ids)):
                for b in range(a + 1, len(ids)):
                    sa, sb = segments[ids[a]], segments[ids[b]]
                    if sa.y_lo <= sb.y_hi and sb.y_lo <= sa.y_hi:
                        issues.append(
                            ValidationIssue(
                                "Overlap", (ids[a], ids[b]), f"overlapping at x = {x}"
                            )
                        )
    if not any(i.kind in ("DuplicateX", "DegenerateSegment") for i in issues):
        for trip, pts in _collinear_triples(segments):
            issues.append(
                ValidationIssue(
                    "CollinearEndpoints",
                    trip,
                    "collinear endpoints " + ", ".join(f"({p.x},{p.y})" for p in pts),
                )
            )
    return issues


class Instance:
    """A validated family of disjoint vertical segments in general position.

    Invariants (established by :func:`validate_instance` and assumed by every
    solver): pairwise distinct x-coordinates, positive lengths, and no three
    endpoints collinear.
    """

    __slots__ = ("segments", "bottoms", "tops", "endpoints", "all_integer")

    def __init__(self, segments: Sequence[VSegment], _validated: bool = False):
        if not _validated:
            issues = instance_issues(segments)
            if issues:
                raise InvalidInstanceError(issues)
        self.segments = tuple(segments)
        self.bottoms = tuple(s.bottom for s in self.segments)
        self.tops = tuple(s.top for s in self.segments)
        # endpoints: list of (point, segment id, is_top)
        eps = []
        for sid, s in enumerate(self.segments):
            eps.append((s.bottom, sid, False))
            eps.append((s.top, sid, True))
        self.endpoints = tuple(eps)
        self.all_integer = all(
            v.denominator == 1
            for s in self.segments
            for v in (s.x, s.y_lo, s.y_hi)
        )

    def __len__(self) -> int:
        return len(self.segments)

    def __eq__(self, other) -> bool:
        return isinstance(other, Instance) and self.segments == other.segments

    def __hash__(self) -> int:
        return hash(self.segments)

    def __repr__(self) -> str:
        return f"Instance({list(self.segments)!r})"

    def region_of(self, p: Point) -> Optional[int]:
        for sid, s in enumerate(self.segments):
            if s.contains(p):
                return sid
        return None

    def reflect_y(self) -> "Instance":
        """Mirror through the x-axis (tops and bottoms swap roles)."""
        return Instance(
            [VSegment(s.x, -s.y_hi, -s.y_lo) for s in self.segments], _validated=True
        )

    def reflect_x(self) -> "Instance":
        """Mirror through the y-axis (left and right swap roles)."""
        return Instance(
            [VSegment(-s.x, s.y_lo, s.y_hi) for s in self.segments], _validated=True
        )


def validate_instance(segments: Sequence) -> Instance:
    """Validate raw segments into an Instance; raise with all violations."""
    segs = [
        s if isinstance(s, VSegment) else VSegment.of(*s)
        for s in segments
    ]
    issues = instance_issues(segs)
    if issues:
        raise InvalidInstanceError(issues)
    return Instance(segs, _validated=True)


class Transversal:
    """A witness: points in CCW hull order plus an injective region map."""

    __slots__ = ("points", "assignment")

    def __init__(self, points: Sequence[Point], assignment: Sequence[int]):
        self.points = tuple(points)
        self.assignment = tuple(assignment)

    def __len__(self) -> int:
        return len(self.points)

    def __repr__(self) -> str:
        return f"Transversal({list(self.points)!r}, {list(self.assignment)!r})"

    def issues(self, instance: Instance) -> list:
        problems = []
        if len(self.points) != len(self.assignment):
            problems.append("points and assignment differ in length")
            return problems
        if len(set(self.assignment)) != len(self.assignment):
            problems.append("assignment is not injective")
        for p, sid in zip(self.points, self.assignment):
            if not (0 <= sid < len(instance)):
                problems.append(f"region id {sid} out of range")
            elif not instance.segments[sid].contains(p):
                problems.append(f"point ({p.x},{p.y}) not on segment {sid}")
        if self.points and not is_weakly_convex_ccw(self.points):
            problems.append("points are not in weakly convex CCW position")
        return problems

    def is_valid(self, instance: Instance) -> bool:
        return not self.issues(instance)
