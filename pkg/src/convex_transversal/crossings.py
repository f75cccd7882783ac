"""Radial orders around bottom endpoints and all-pairs crossing counts.

``I[u, v]`` is the number of regions whose segment meets the half-open
segment (u, v] — u excluded, v included — for bottom endpoints u, v.  Two
implementations are provided: a direct per-segment counter (the reference),
and a dual method that, for each bottom endpoint, sweeps the strip boundaries
of the dual arrangement along that endpoint's dual line.

Dual method.  The dual line of a bottom endpoint u is y = u.x * x - u.y; at
abscissa X it passes through the same point as the dual line of any other
bottom endpoint v with slope(u, v) = X.  Let T_u(X) be the number of strips
(duals of segments) with slope greater than u.x that strictly contain that
point; equivalently, the number of segments right of u whose bottom endpoint
subtends a slope below X at u and whose top endpoint subtends a slope above X.
For a pair u, v with l the leftmost and X = slope(u, v),

    I[u, v] = T_l(X) - T_r(X) + 1,

the difference counting the strips with slope strictly between l.x and r.x
(segments strictly between the pair hit by the open chord) and the +1 the
closed endpoint's own region.  The value is symmetric in (u, v), matching the
direct counter: the chord through two bottom endpoints can only touch the
boundary of the open end's region at the open end itself.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from typing import List, NamedTuple, Sequence

import numpy as np

from .geom import Instance, Point, slope


class SlopeTieError(ValueError):
    """Two distinct endpoints subtend equal slopes at a sweep center."""


class RadialOrder(NamedTuple):
    center: Point
    ordered: tuple  # bottom-endpoint region ids, strictly decreasing slope


def radial_order(v: Point, instance: Instance) -> RadialOrder:
    """Other bottom endpoints sorted by strictly decreasing slope toward v."""
    vid = next(
        (i for i, b in enumerate(instance.bottoms) if b == v), None
    )
    if vid is None:
        raise ValueError(f"({v.x},{v.y}) is not a bottom endpoint of the instance")
    slopes = [
        (slope(w, v), wid)
        for wid, w in enumerate(instance.bottoms)
        if wid != vid
    ]
    slopes.sort(key=lambda t: t[0], reverse=True)
    for (s1, _), (s2, _) in zip(slopes, slopes[1:]):
        if s1 == s2:
            raise SlopeTieError(f"equal slopes {s1} at center ({v.x},{v.y})")
    return RadialOrder(v, tuple(wid for _, wid in slopes))


def crossing_count_direct(u: Point, v: Point, instance: Instance) -> int:
    """Regions whose segment meets the half-open segment (u, v]."""
    if u.x == v.x:
        raise ValueError("crossing count requires distinct x-coordinates")
    lo, hi = (u.x, v.x) if u.x < v.x else (v.x, u.x)
    a = slope(u, v)
    count = 0
    for s in instance.segments:
        if s.x == u.x or not (lo <= s.x <= hi):
            continue
        y = u.y + a * (s.x - u.x)
        if s.y_lo <= y <= s.y_hi:
            count += 1
    return count


class CrossingTable:
    """All-pairs I[u, v] over ordered pairs of bottom endpoints."""

    __slots__ = ("n", "_matrix")

    def __init__(self, matrix: np.ndarray):
        self.n = matrix.shape[0]
        self._matrix = matrix

    def __getitem__(self, pair) -> int:
        u_id, v_id = pair
        if u_id == v_id:
            raise KeyError("crossing counts are defined for distinct endpoints")
        return int(self._matrix[u_id, v_id])

    def as_dict(self) -> dict:
        return {
            (u, v): int(self._matrix[u, v])
            for u in range(self.n)
            for v in range(self.n)
            if u != v
        }


def _t_values_exact(instance: Instance, vid: int) -> List[int]:
    """T_v(slope(v, w)) for every other bottom endpoint w, exact arithmetic."""
    v = instance.bottoms[vid]
    entries = []  # slopes at which the sweep enters a strip (bottom endpoints)
    exits = []  # slopes at which it leaves (top endpoints)
    for s in instance.segments:
        if s.x > v.x:
            entries.append(slope(v, s.bottom))
            exits.append(slope(v, s.top))
    entries.sort()
    exits.sort()
    out = []
    for wid, w in enumerate(instance.bottoms):
        if wid == vid:
            out.append(0)
            continue
        x = slope(v, w)
        out.append(bisect_left(entries, x) - bisect_right(exits, x))
    return out


def _t_matrix_float(instance: Instance) -> np.ndarray:
    """The T matrix via float sweeps with exact fixes at float collisions.

    Requires integer coordinates below 2**50 so that each slope is a single
    correctly-rounded double division; exact order then never strictly
    reverses in floats, and only equal-float runs need rational arbitration.
    """
    n = len(instance)
    bx = np.array([int(s.x) for s in instance.segments], dtype=np.float64)
    by = np.array([int(s.y_lo) for s in instance.segments], dtype=np.float64)
    ty = np.array([int(s.y_hi) for s in instance.segments], dtype=np.float64)
    tm = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        right = np.nonzero(bx > bx[i])[0]
        dx = bx[right] - bx[i]
        ent = np.sort((by[right] - by[i]) / dx)
        exi = np.sort((ty[right] - by[i]) / dx)
        others = np.nonzero(np.arange(n) != i)[0]
        qx = (by[others] - by[i]) / (bx[others] - bx[i])
        c_lo = np.searchsorted(ent, qx, side="left")
        c_hi = np.searchsorted(ent, qx, side="right")
        d_lo = np.searchsorted(exi, qx, side="left")
        d_hi = np.searchsorted(exi, qx, side="right")
        t = c_lo - d_hi
        ties = np.nonzero((c_lo != c_hi) | (d_lo != d_hi))[0]
        if ties.size:
            bi = instance.bottoms[i]
            ent_exact = sorted(
                slope(bi, instance.bottoms[j]) for j in right
            )
            exi_exact = sorted(slope(bi, instance.tops[j]) for j in right)
            for k in ties:
                x = slope(bi, instance.bottoms[others[k]])
                t[k] = bisect_left(ent_exact, x) - bisect_right(exi_exact, x)
        tm[i, others] = t
    return tm


_FLOAT_SAFE = 1 << 50


def crossing_table_dual(instance: Instance) -> CrossingTable:
    """All-pairs crossing table via per-line sweeps of the dual arrangement."""
    n = len(instance)
    if instance.all_integer and all(
        abs(int(v)) < _FLOAT_SAFE
        for s in instance.segments
        for v in (s.x, s.y_lo, s.y_hi)
    ):
        tm = _t_matrix_float(instance)
    else:
        tm = np.array(
            [_t_values_exact(instance, i) for i in range(n)], dtype=np.int64
        )
    return CrossingTable(np.abs(tm - tm.T) + 1 - np.eye(n, dtype=np.int64))
