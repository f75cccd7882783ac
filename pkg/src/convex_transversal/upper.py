"""Maximum upper convex transversal in O(n^2) table entries.

An upper convex transversal is an x-monotone chain of bottom endpoints whose
edge slopes are non-increasing left to right; it visits every region its
edges cross.  K[v, w] is the maximum number of regions visitable by such a
chain ending at bottom endpoint v with incoming slope at least slope(v, w).

Processing v by increasing x and w in decreasing slope(w, v) order, with u the
predecessor of w in that order:

    K[v, w] = max(1, K[v, u], K[w, v] + I[w, v])   if w.x < v.x
    K[v, w] = max(1, K[v, u])                      otherwise

The extension branch K[w, v] + I[w, v] appends edge (w, v]; the half-open
convention plus x-monotonicity guarantee each region is counted once.
"""

from __future__ import annotations

from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .crossings import CrossingTable, SlopeTieError, crossing_table_dual
from .geom import Instance, Line, Point, Transversal, slope


class UpperDpTable:
    """K values plus one parent per cell for witness recovery.

    Parents: ("start",) for a fresh single-vertex chain at v, ("carry",)
    for inheriting the next-higher-slope cell K[v, u], and ("extend", w)
    for appending the edge from w's chain (cell K[w, v]).
    """

    __slots__ = ("n", "K", "parent", "orders", "Kmat", "rank", "Imat")

    def __init__(self, n: int):
        self.n = n
        self.K: Dict[Tuple[int, int], int] = {}
        self.parent: Dict[Tuple[int, int], tuple] = {}
        self.orders: Dict[int, tuple] = {}
        # Large instances are filled as a matrix instead of dicts; parents
        # are then re-derived on demand from Kmat, rank and Imat.
        self.Kmat: Optional[np.ndarray] = None
        self.rank: Optional[np.ndarray] = None
        self.Imat: Optional[np.ndarray] = None

    def best(self) -> Tuple[int, Optional[Tuple[int, int]]]:
        if self.K:
            cell = max(self.K, key=lambda c: self.K[c])
            return self.K[cell], cell
        if self.Kmat is not None:
            flat = int(np.argmax(self.Kmat))
            cell = divmod(flat, self.n)
            return int(self.Kmat[cell]), cell
        return 1, None


def _sorted_orders(instance: Instance) -> Dict[int, List[int]]:
    """For each bottom endpoint id, the others by decreasing slope toward it."""
    n = len(instance)
    bottoms = instance.bottoms
    if instance.all_integer and n > 64:
        bx = np.array([int(p.x) for p in bottoms], dtype=np.float64)
        by = np.array([int(p.y) for p in bottoms], dtype=np.float64)
        orders = {}
        for v in range(n):
            others = np.nonzero(np.arange(n) != v)[0]
            sl = (by[others] - by[v]) / (bx[others] - bx[v])
            idx = np.argsort(-sl, kind="stable")
            order = others[idx].tolist()
            slf = sl[idx]
            # Exact re-sort inside runs of equal float keys.
            i = 0
            while i < len(order):
                j = i + 1
                while j < len(order) and slf[j] == slf[i]:
                    j += 1
                if j - i > 1:
                    order[i:j] = sorted(
                        order[i:j],
                        key=lambda w: slope(bottoms[w], bottoms[v]),
                        reverse=True,
                    )
                i = j
            orders[v] = order
        return orders
    orders = {}
    for v in range(n):
        keyed = sorted(
            ((slope(bottoms[w], bottoms[v]), w) for w in range(n) if w != v),
            key=lambda t: t[0],
            reverse=True,
        )
        for (s1, _), (s2, _) in zip(keyed, keyed[1:]):
            if s1 == s2:
                raise SlopeTieError(
                    f"equal slopes {s1} toward bottom endpoint {v}"
                )
        orders[v] = [w for _, w in keyed]
    return orders


def upper_dp(
    instance: Instance, crossings: Optional[CrossingTable] = None
) -> UpperDpTable:
    """Fill the K table over all ordered pairs of bottom endpoints."""
    n = len(instance)
    table = UpperDpTable(n)
    if n < 2:
        return table
    if crossings is None:
        crossings = crossing_table_dual(instance)
    orders = _sorted_orders(instance)
    table.orders = {v: tuple(o) for v, o in orders.items()}
    xs = [s.x for s in instance.segments]
    by_x = sorted(range(n), key=lambda i: xs[i])
    if n > 64:
        # Matrix fill: per v, the recurrence along the slope order is a
        # running maximum, so the whole row is one accumulate.
        rank = np.empty(n, dtype=np.int64)
        rank[by_x] = np.arange(n)
        imat = crossings._matrix
        kmat = np.zeros((n, n), dtype=np.int64)
        order_arrays = {v: np.asarray(o, dtype=np.int64) for v, o in orders.items()}
        for v in by_x:
            wl = order_arrays[v]
            ext = np.where(rank[wl] < rank[v], kmat[wl, v] + imat[wl, v], 1)
            kmat[v, wl] = np.maximum.accumulate(np.maximum(ext, 1))
        table.Kmat = kmat
        table.rank = rank
        table.Imat = imat
        return table
    K = table.K
    parent = table.parent
    for v in by_x:
        vx = xs[v]
        prev = None
        for w in orders[v]:
            best = 1
            arg = ("start",)
            if prev is not None and K[(v, prev)] > best:
                best = K[(v, prev)]
                arg = ("carry",)
            if xs[w] < vx:
                ext = K[(w, v)] + crossings[w, v]
                if ext > best:
                    best = ext
                    arg = ("extend", w)
            K[(v, w)] = best
            parent[(v, w)] = arg
            prev = w
    return table


def _chain_vertices(table: UpperDpTable, cell: Tuple[int, int]) -> List[int]:
    """Bottom-endpoint ids of the optimal chain ending at cell, left to right."""
    v, w = cell
    if not table.parent:
        return _chain_vertices_matrix(table, cell)
    node = table.parent[cell]
    while node[0] == "carry":
        order = table.orders[v]
        w = order[order.index(w) - 1]
        node = table.parent[(v, w)]
    if node[0] == "start":
        return [v]
    return _chain_vertices(table, (node[1], v)) + [v]


def _chain_vertices_matrix(table: UpperDpTable, cell: Tuple[int, int]) -> List[int]:
    """Parent-free chain recovery from the matrix fill.

    Crossing counts are at least 1, so the extension branch always exceeds 1;
    a cell of value 1 is therefore a fresh start.  Otherwise the value either
    matches an extension from (w, v) or was carried from the previous cell in
    v's slope order.
    """
    kmat, rank, imat = table.Kmat, table.rank, table.Imat
    v, w = cell
    out = [v]
    i = None
    while True:
        val = kmat[v, w]
        if rank[w] < rank[v] and kmat[w, v] + imat[w, v] == val:
            out.append(w)
            v, w = w, v
            i = None
            continue
        if val == 1:
            out.reverse()
            return out
        order = table.orders[v]
        if i is None:
            i = order.index(w)
        i -= 1
        w = order[i]


def _chain_witness(
    instance: Instance, chain: Sequence[int]
) -> Transversal:
    """Witness for a bottom-endpoint chain: a point in every crossed region."""
    bottoms = instance.bottoms
    picks: Dict[int, Point] = {chain[0]: bottoms[chain[0]]}
    for w, v in zip(chain, chain[1:]):
        p, q = bottoms[w], bottoms[v]
        line = Line.through(p, q)
        lo, hi = (p.x, q.x) if p.x < q.x else (q.x, p.x)
        for sid, s in enumerate(instance.segments):
            if sid in picks or s.x == p.x or not (lo <= s.x <= hi):
                continue
            y = line.y_at(s.x)
            if s.y_lo <= y <= s.y_hi:
                picks[sid] = Point(s.x, y)
    ordered = sorted(picks.items(), key=lambda kv: (kv[1].x, kv[1].y), reverse=True)
    return Transversal([p for _, p in ordered], [sid for sid, _ in ordered])


def max_upper_transversal(
    instance: Instance, crossings: Optional[CrossingTable] = None
) -> Tuple[int, Transversal]:
    """Maximum upper convex transversal size and a witness achieving it."""
    n = len(instance)
    if n == 1:
        b = instance.bottoms[0]
        return 1, Transversal([b], [0])
    table = upper_dp(instance, crossings)
    k, cell = table.best()
    chain = _chain_vertices(table, cell)
    witness = _chain_witness(instance, chain)
    assert len(witness) == k, "witness size disagrees with DP value"
    return k, witness


def fixed_start_chain_masks(
    ell: Point,
    verts: Sequence[Tuple[int, Point]],
    edge_mask,
    min_first_slope=None,
    floor: Optional[Line] = None,
    return_parents: bool = False,
):
    """Upper convex chains from a fixed leftmost point, tracking hit masks.

    ``verts`` lists (id, point) chain-vertex candidates strictly right of ell;
    ``edge_mask(p, q)`` is the bitmask of counted regions hit by the half-open
    edge (p, q].  A chain ell -> p1 -> ... -> pk must have non-increasing edge
    slopes, first slope at least ``min_first_slope`` when given, and all
    vertices on or above ``floor`` when given.

    Returns {(u_id, v_id): mask} for chains ending with edge u -> v, u_id None
    when the final edge starts at ell.  Masks are those of a maximum-popcount
    chain for the state.  With ``return_parents`` also returns
    {(u_id, v_id): predecessor key or None} for chain recovery.
    """
    usable = [
        (vid, p)
        for vid, p in verts
        if p.x > ell.x and (floor is None or p.y >= floor.y_at(p.x))
    ]
    usable.sort(key=lambda t: (t[1].x, t[1].y))
    # Cache every slope once; the DP below only compares them.
    sl_ell = {vid: slope(ell, p) for vid, p in usable}
    sl: Dict[Tuple[int, int], object] = {}
    for i, (vid, v) in enumerate(usable):
        for wid, w in usable[i + 1:]:
            if w.x > v.x:
                sl[(vid, wid)] = slope(v, w)
    best: Dict[Tuple[Optional[int], int], tuple] = {}
    parents: Dict[Tuple[Optional[int], int], Optional[tuple]] = {}
    # incoming[v_id]: {pred_id: (popcount, mask)} over settled states ending at v.
    incoming: Dict[int, Dict[Optional[int], tuple]] = {vid: {} for vid, _ in usable}
    for vid, v in usable:
        if min_first_slope is None or sl_ell[vid] >= min_first_slope:
            m = edge_mask(ell, v)
            best[(None, vid)] = (bin(m).count("1"), m)
            parents[(None, vid)] = None
            incoming[vid][None] = (bin(m).count("1"), m)
    for vid, v in usable:
        inc = incoming[vid]
        if not inc:
            continue
        for wid, w in usable:
            if w.x <= v.x:
                continue
            s = sl[(vid, wid)]
            em = None
            for pid, (cnt, mask) in inc.items():
                in_slope = sl_ell[vid] if pid is None else sl[(pid, vid)]
                if in_slope < s:
                    continue
                if em is None:
                    em = edge_mask(v, w)
                m = mask | em
                c = bin(m).count("1")
                cur = best.get((vid, wid))
                if cur is None or c > cur[0]:
                    best[(vid, wid)] = (c, m)
                    parents[(vid, wid)] = (pid, vid)
                    incoming[wid][vid] = (c, m)
    masks = {k: m for k, (c, m) in best.items()}
    if return_parents:
        return masks, parents
    return masks


def upper_dp_from(
    ell: Point,
    instance: Instance,
    region_ids: Optional[Sequence[int]] = None,
) -> Dict[Tuple[Optional[int], int], int]:
    """Fixed-start upper DP: chains from ell over a sub-instance.

    Values count the regions of the sub-instance hit by the chain, plus one
    for ell itself.  Keys are (u_id, v_id) region-id pairs for the chain's
    final edge, with u_id None when that edge starts at ell.  An empty dict
    means no chain extends ell; the transversal is ell alone, of size 1.
    """
    if region_ids is None:
        region_ids = range(len(instance))
    ids = [rid for rid in region_ids if instance.bottoms[rid].x > ell.x]
    verts = [(rid, instance.bottoms[rid]) for rid in ids]
    members = set(ids)

    def edge_mask(p: Point, q: Point) -> int:
        mask = 0
        a = slope(p, q)
        for rid in members:
            s = instance.segments[rid]
            if s.x == p.x or not (min(p.x, q.x) <= s.x <= max(p.x, q.x)):
                continue
            y = p.y + a * (s.x - p.x)
            if s.y_lo <= y <= s.y_hi:
                mask |= 1 << rid
        return mask

    masks = fixed_start_chain_masks(ell, verts, edge_mask)
    return {key: bin(m).count("1") + 1 for key, m in masks.items()}
