"""Max-2-SAT to 3-oriented-segment scene compiler.

Builds the NP-hardness gadget scene for maximum convex partial
transversals of segments with three orientations (vertical, +45, -45):

* a 1-by-2m *crate* holding a strictly convex *banana* made of four
  low-curvature parabolic arcs,
* one closed alternating -/+ *chain* of 4m+2 segments per variable,
  replicated m+1 times at horizontal distance epsilon,
* a *fruit fly* gadget (two criss-crossed wing lines through five
  anchor points on the banana, m+1 bristle lines per wing line, and
  m+1 tiny vertical *wing points* per upper wing) at every chain
  reflection and one per clause,
* two vertical *clause segments* per clause, each running from a
  bottom reflection fly of one of the clause's variables up to the
  clause fly; the wing carrying the clause endpoint encodes whether
  the literal is negated (lower-right wing iff negated).

Every chain and clause segment is shortened so its endpoints lie on a
wing line or bristle line of its flies.  All coordinates are exact
rationals.  The scene is a *generator + validator* artifact: instances
are far above the brute-force oracle cap and are never solved here.

Geometry is computed in per-side local frames (rigid rotations of the
plane) in which the arc is an upward-concave-down parabola
``v = v0 - C*(u - u0)**2`` and "outward" is +v; wing-line "heights"
are local +v translations.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from .geom import Point, Turn, orient, rat

__all__ = [
    "VERTICAL",
    "PLUS45",
    "MINUS45",
    "BoxTooNarrow",
    "SatInstance",
    "HardnessConstants",
    "OrientedSegment",
    "Arc",
    "Fly",
    "GadgetScene",
    "RectangleRegion",
    "constants",
    "build_chain",
    "build_banana",
    "anchor_points",
    "build_fly",
    "build_instance",
    "expected_optimum",
    "scene_size",
    "validate_scene",
    "emit_rectangles",
]

VERTICAL = "vertical"
PLUS45 = "plus45"
MINUS45 = "minus45"

_SIDES = ("bottom", "right", "top", "left")  # counterclockwise order


class BoxTooNarrow(ValueError):
    """Anchor box narrower than the two inner anchor offsets require."""


def _slope_tag(p: Point, q: Point) -> Optional[str]:
    if p.x == q.x:
        return VERTICAL if p.y != q.y else None
    s = (q.y - p.y) / (q.x - p.x)
    if s == 1:
        return PLUS45
    if s == -1:
        return MINUS45
    return None


@dataclass(frozen=True)
class SatInstance:
    """A Max-2-SAT instance: clauses are pairs of (variable, negated)
    literals over 0-based variables.  A clause may repeat a variable
    only as the identical literal (x or x): opposite literals of one
    variable would demand the clause endpoint on both wings of the
    same reflection fly at once."""

    n: int
    clauses: Tuple[Tuple[Tuple[int, bool], Tuple[int, bool]], ...]

    def __init__(self, n: int, clauses: Sequence) -> None:
        if n < 1:
            raise ValueError("need at least one variable")
        normalized = []
        for clause in clauses:
            lits = tuple((int(v), bool(neg)) for v, neg in clause)
            if len(lits) != 2:
                raise ValueError("each clause has exactly two literals")
            if not all(0 <= v < n for v, _ in lits):
                raise ValueError("variable index out of range")
            if lits[0][0] == lits[1][0] and lits[0][1] != lits[1][1]:
                raise ValueError("a clause cannot oppose a variable to itself")
            normalized.append(lits)
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "clauses", tuple(normalized))

    @property
    def m(self) -> int:
        return len(self.clauses)


@dataclass(frozen=True)
class HardnessConstants:
    """Scale ladder 1 >> alpha >> beta >> gamma >> delta >> epsilon >= zeta > 0
    plus the quadratic bristle step kappa = delta / m**2."""

    alpha: mpq
    beta: mpq
    gamma: mpq
    delta: mpq
    epsilon: mpq
    zeta: mpq
    kappa: mpq


def constants(n: int, m: int) -> HardnessConstants:
    """Concrete constants for n variables and m clauses."""
    if n < 1 or m < 1:
        raise ValueError("need n >= 1 and m >= 1")
    alpha = mpq(1, 100 * n)
    beta = alpha / 100
    gamma = alpha**3 / (10000 * m * m)
    delta = gamma / (100 * m)
    epsilon = delta / 100
    zeta = delta / (100 * m * m)
    kappa = delta / (m * m)
    cs = HardnessConstants(alpha, beta, gamma, delta, epsilon, zeta, kappa)
    assert 1 > alpha > beta > gamma > delta > epsilon >= zeta > 0
    assert 0 < kappa <= delta
    return cs


@dataclass(frozen=True)
class OrientedSegment:
    """Scene segment: endpoints, orientation tag, and provenance.

    Provenance tuples:
      ("chain", var, copy, index) -- segment `index` of copy `copy`
          (0 = original) of 1-based variable `var`'s chain;
      ("clause", clause, lit)     -- clause segment for literal `lit`
          (0 or 1) of 0-based clause `clause`;
      ("wing", fly, side, index)  -- wing point `index` (0 = wing tip)
          on the upper-`side` wing of fly `fly`.
    """

    p: Point
    q: Point
    orientation: str
    provenance: Tuple


# ---------------------------------------------------------------------------
# banana arcs and local frames


@dataclass(frozen=True)
class Arc:
    """One banana arc, in a local frame where it is v = v0 - C*(u-u0)**2,
    the crate side is the line v = v_side >= arc, and +v points outward."""

    side: str
    u0: mpq
    v0: mpq
    curv: mpq
    v_side: mpq
    u_lo: mpq
    u_hi: mpq

    def v_of(self, u) -> mpq:
        return self.v0 - self.curv * (u - self.u0) ** 2

    def to_local(self, p: Point) -> Tuple[mpq, mpq]:
        x, y = p
        if self.side == "top":
            return x, y
        if self.side == "bottom":
            return -x, -y
        if self.side == "left":
            return y, -x
        return -y, x  # right

    def to_global(self, u, v) -> Point:
        if self.side == "top":
            return Point(u, v)
        if self.side == "bottom":
            return Point(-u, -v)
        if self.side == "left":
            return Point(-v, u)
        return Point(v, -u)  # right

    def point_at(self, u) -> Point:
        return self.to_global(u, self.v_of(u))


def build_banana(m: int, beta) -> Dict[str, Arc]:
    """Four parabolic arcs through the inner-crate corners and the crate
    edge midpoints; the top arc is y = 1 - beta*(m-x)**2/(m-beta)**2."""
    beta = rat(beta)
    ch = beta / (m - beta) ** 2  # horizontal arcs
    cv = beta / (mpq(1, 2) - beta) ** 2  # vertical arcs
    one = mpq(1)
    return {
        "top": Arc("top", mpq(m), one, ch, one, beta, 2 * m - beta),
        "bottom": Arc("bottom", mpq(-m), mpq(0), ch, mpq(0), -2 * m + beta, -beta),
        "left": Arc("left", mpq(1, 2), mpq(0), cv, mpq(0), beta, 1 - beta),
        "right": Arc("right", mpq(-1, 2), mpq(2 * m), cv, mpq(2 * m), -1 + beta, -beta),
    }


def anchor_points(box, gamma, arc: Arc):
    """Five anchor points on `arc` for the box spanning `box` (an interval
    in the arc's along-coordinate): the two box-edge points, the center
    point, and the points gamma left/right of center."""
    lo, hi = rat(box[0]), rat(box[1])
    gamma = rat(gamma)
    if hi - lo <= 2 * gamma:
        raise BoxTooNarrow(f"box width {hi - lo} <= 2*gamma = {2 * gamma}")
    center = (lo + hi) / 2
    return tuple(arc.point_at(u) for u in (lo, center - gamma, center, center + gamma, hi))


def _isect(p1, q1, p2, q2) -> Tuple[mpq, mpq]:
    """Intersection of lines p1q1 and p2q2 (local coordinate pairs)."""
    d1u, d1v = q1[0] - p1[0], q1[1] - p1[1]
    d2u, d2v = q2[0] - p2[0], q2[1] - p2[1]
    den = d1u * d2v - d1v * d2u
    t = ((p2[0] - p1[0]) * d2v - (p2[1] - p1[1]) * d2u) / den
    return p1[0] + t * d1u, p1[1] + t * d1v


def _chord_v(chord, u) -> mpq:
    (u1, v1), (u2, v2) = chord
    return v1 + (u - u1) * (v2 - v1) / (u2 - u1)


@dataclass(frozen=True)
class FlyWings:
    """Derived fly geometry, in the arc's local frame.

    `chord_l` carries the lower-left and upper-right wings, `chord_r`
    the lower-right and upper-left wings; they cross at `crossing`.
    `offsets[r]` is the height of bristle line r above its wing line
    (r = 0 is the wing line itself, r = m+1 the topmost bristle).
    """

    arc: Arc
    anchors: Tuple[Point, ...]
    anchors_local: Tuple[Tuple[mpq, mpq], ...]
    skip: str
    chord_l: Tuple[Tuple[mpq, mpq], Tuple[mpq, mpq]]
    chord_r: Tuple[Tuple[mpq, mpq], Tuple[mpq, mpq]]
    crossing: Tuple[mpq, mpq]
    offsets: Tuple[mpq, ...]

    def chord(self, side: str):
        return self.chord_l if side == "left" else self.chord_r

    def bristle_point(self, side: str, rank: int, u) -> Tuple[mpq, mpq]:
        """Point at along-coordinate u on bristle line `rank` of the
        wing line carrying the lower-`side` wing."""
        return u, _chord_v(self.chord(side), u) + self.offsets[rank]

    def shorten(self, side: str, rank: int, seg_local) -> Tuple[mpq, mpq]:
        """Intersection of a chain segment (local endpoint pair) with
        bristle line `rank` on the lower-`side` wing."""
        off = self.offsets[rank]
        (u1, v1), (u2, v2) = self.chord(side)
        return _isect(seg_local[0], seg_local[1], (u1, v1 + off), (u2, v2 + off))

    def upper_tip(self, side: str) -> Tuple[mpq, mpq]:
        """Wing-tip anchor of the upper-`side` wing (it lies on the arc)."""
        return self.chord_r[0] if side == "left" else self.chord_l[1]


def build_fly(anchors, kind: str, clause_side: Optional[str] = None, *,
              arc: Arc, m: int, constants: HardnessConstants,
              skip: Optional[str] = None) -> FlyWings:
    """Criss-cross the wing lines through four of the five anchors.

    Skipping the fourth anchor puts the wing crossing left of center so
    a vertical segment through the center anchor meets the lower-right
    wing; skipping the second mirrors this.  For a reflection fly with
    a clause segment the choice is forced by `clause_side` ("right"
    iff the variable appears negated), otherwise by `skip`.
    """
    if kind not in ("reflection", "clause"):
        raise ValueError(f"unknown fly kind {kind!r}")
    if clause_side is not None:
        skip = "a4" if clause_side == "right" else "a2"
    if skip not in ("a2", "a4"):
        raise ValueError("need a wing-line choice: clause_side or skip")
    loc = tuple(arc.to_local(p) for p in anchors)
    if kind == "reflection" and not all(
        loc[i][0] < loc[i + 1][0] for i in range(4)
    ):
        raise ValueError("anchors must be ordered along the arc")
    if skip == "a2":
        chord_l, chord_r = (loc[0], loc[3]), (loc[2], loc[4])
    else:
        chord_l, chord_r = (loc[0], loc[2]), (loc[1], loc[4])
    crossing = _isect(*chord_l, *chord_r)
    delta, kappa = constants.delta, constants.kappa
    offsets = (mpq(0),) + tuple(delta - (m + 1 - i) ** 2 * kappa for i in range(1, m + 2))
    return FlyWings(arc, tuple(anchors), loc, skip, chord_l, chord_r, crossing, offsets)


@dataclass(frozen=True)
class Fly:
    """Serializable fly metadata; geometry derives from box + skip."""

    id: int
    kind: str  # "reflection" | "clause"
    side: str  # crate side
    box: Tuple[mpq, mpq]
    skip: str  # "a2" | "a4"
    chain: Optional[Tuple[int, int]] = None  # (variable 1-based, bend index)
    clause: Optional[Tuple[int, int, int, bool, str]] = None
    # clause = (clause index, literal index, variable 1-based, negated, wing side)


# ---------------------------------------------------------------------------
# chains


def _chain_bends(s, m: int) -> List[Point]:
    """Reflection points of the closed chain with start parameter s:
    (s,1) down to (s+1,0), bouncing right to (2m,1-s), and back."""
    s = rat(s)
    one = mpq(1)
    bends: List[Point] = []
    for t in range(m):
        bends.append(Point(s + 2 * t, one))
        bends.append(Point(s + 2 * t + 1, mpq(0)))
    bends.append(Point(mpq(2 * m), 1 - s))
    for t in range(m):
        bends.append(Point(2 * m - s - 2 * t, one))
        bends.append(Point(2 * m - s - 2 * t - 1, mpq(0)))
    bends.append(Point(mpq(0), 1 - s))
    return bends


def build_chain(i: int, n: int, m: int, alpha) -> List[Point]:
    """Closed pre-shortening polyline (first vertex repeated at the end)
    of variable i's chain: 4m+2 alternating -/+ segments reflecting on
    the crate sides, starting at (i*alpha, 1)."""
    if not 1 <= i <= n:
        raise ValueError("variable index out of range")
    bends = _chain_bends(rat(i) * rat(alpha), m)
    return bends + [bends[0]]


def _bend_side(p: Point, m: int) -> str:
    if p.y == 1:
        return "top"
    if p.y == 0:
        return "bottom"
    return "left" if p.x == 0 else "right"


# ---------------------------------------------------------------------------
# scene assembly


@dataclass(frozen=True)
class GadgetScene:
    """The emitted 3-oriented segment set plus construction metadata.

    The crate and banana are metadata only; `segments` is the region
    set.  `flies` carry enough information (box + wing-line choice) to
    re-derive every shortened endpoint independently of the builder's
    RNG state.
    """

    sat: SatInstance
    seed: int
    constants: HardnessConstants
    flies: Tuple[Fly, ...]
    segments: Tuple[OrientedSegment, ...]

    @property
    def n(self) -> int:
        return self.sat.n

    @property
    def m(self) -> int:
        return self.sat.m

    @property
    def crate(self) -> Tuple[mpq, mpq]:
        return mpq(2 * self.m), mpq(1)

    @property
    def banana(self) -> Dict[str, Arc]:
        return build_banana(self.m, self.constants.beta)

    def to_json(self) -> dict:
        def q(value) -> str:
            return str(mpq(value))

        flies = []
        for fly in self.flies:
            flies.append({
                "id": fly.id,
                "kind": fly.kind,
                "side": fly.side,
                "box": [q(fly.box[0]), q(fly.box[1])],
                "skip": fly.skip,
                "chain": list(fly.chain) if fly.chain else None,
                "clause": (
                    [fly.clause[0], fly.clause[1], fly.clause[2],
                     fly.clause[3], fly.clause[4]]
                    if fly.clause else None
                ),
            })
        return {
            "type": "gadget-scene",
            "n": self.n,
            "m": self.m,
            "seed": self.seed,
            "clauses": [[[v, neg] for v, neg in clause] for clause in self.sat.clauses],
            "flies": flies,
            "segments": [
                {
                    "p": [q(s.p.x), q(s.p.y)],
                    "q": [q(s.q.x), q(s.q.y)],
                    "orientation": s.orientation,
                    "provenance": list(s.provenance),
                }
                for s in self.segments
            ],
        }

    @classmethod
    def from_json(cls, body: dict) -> "GadgetScene":
        sat = SatInstance(
            body["n"],
            [tuple((v, bool(neg)) for v, neg in clause) for clause in body["clauses"]],
        )
        cs = constants(sat.n, sat.m)
        flies = tuple(
            Fly(
                id=f["id"],
                kind=f["kind"],
                side=f["side"],
                box=(rat(f["box"][0]), rat(f["box"][1])),
                skip=f["skip"],
                chain=tuple(f["chain"]) if f.get("chain") else None,
                clause=(
                    (f["clause"][0], f["clause"][1], f["clause"][2],
                     bool(f["clause"][3]), f["clause"][4])
                    if f.get("clause") else None
                ),
            )
            for f in body["flies"]
        )
        segments = tuple(
            OrientedSegment(
                Point(rat(s["p"][0]), rat(s["p"][1])),
                Point(rat(s["q"][0]), rat(s["q"][1])),
                s["orientation"],
                tuple(s["provenance"]),
            )
            for s in body["segments"]
        )
        return cls(sat, int(body.get("seed", 0)), cs, flies, segments)


def scene_size(n: int, m: int) -> int:
    """Closed-form region count: n(12m^2+18m+6) + 4m + 2m^2."""
    return n * (12 * m * m + 18 * m + 6) + 4 * m + 2 * m * m


def expected_optimum(sat: SatInstance, k: int) -> int:
    """Maximum transversal size when k clauses are satisfiable:
    |R| - n(4m+2)(m+1) - (m-k)."""
    n, m = sat.n, sat.m
    if not 0 <= k <= m:
        raise ValueError("satisfied-clause count out of range")
    return scene_size(n, m) - n * (4 * m + 2) * (m + 1) - (m - k)


def _clause_x(var: int, ci: int, alpha) -> mpq:
    """x-coordinate of the clause segment: shared chain endpoint
    (var*alpha + 1 + 2*ci, 0)."""
    return rat(var) * rat(alpha) + 1 + 2 * ci


def _build_flies(sat: SatInstance, cs: HardnessConstants,
                 arcs: Dict[str, Arc], seed: int) -> Tuple[Fly, ...]:
    """Fly metadata: one reflection fly per original-chain bend, one
    clause fly per clause; wing-line choices are forced by clause
    literals where present and otherwise drawn from a seeded RNG."""
    n, m = sat.n, sat.m
    rng = random.Random(seed)
    clause_at_bend = {}
    for ci, clause in enumerate(sat.clauses):
        for li, (v, neg) in enumerate(clause):
            clause_at_bend.setdefault((v + 1, 2 * ci + 1), (ci, li, neg))
    flies: List[Fly] = []
    for i in range(1, n + 1):
        bends = _chain_bends(i * cs.alpha, m)
        for b, bend in enumerate(bends):
            side = _bend_side(bend, m)
            arc = arcs[side]
            t0 = arc.to_local(bend)[0]
            gap = arc.v_side - arc.v_of(t0)
            half = gap + cs.beta
            info = clause_at_bend.get((i, b))
            if info is not None:
                ci, li, neg = info
                wing = "right" if neg else "left"
                skip = "a4" if neg else "a2"
                clause = (ci, li, i, neg, wing)
            else:
                skip = rng.choice(("a2", "a4"))
                clause = None
            flies.append(Fly(len(flies), "reflection", side,
                             (t0 - half, t0 + half), skip, (i, b), clause))
    for ci, clause in enumerate(sat.clauses):
        xs = sorted(_clause_x(v + 1, ci, cs.alpha) for v, _ in clause)
        flies.append(Fly(len(flies), "clause", "top",
                         (xs[0] - cs.beta, xs[1] + cs.beta),
                         rng.choice(("a2", "a4")), None, None))
    return tuple(flies)


def _expected_segments(sat: SatInstance, cs: HardnessConstants,
                       arcs: Dict[str, Arc], flies: Sequence[Fly]):
    """Derive every scene segment from the fly metadata.

    Returns (segments by provenance, designated convex-position points
    by fly id).  The designated point of a chain or clause segment is
    its shortened endpoint at each fly; of a wing point, its center.
    """
    n, m = sat.n, sat.m
    L = 4 * m + 2
    wings_of = {
        fly.id: build_fly(anchor_points(fly.box, cs.gamma, arcs[fly.side]),
                          fly.kind, arc=arcs[fly.side], m=m,
                          constants=cs, skip=fly.skip)
        for fly in flies
    }
    refl = {fly.chain: fly for fly in flies if fly.kind == "reflection"}
    clause_flies = [fly for fly in flies if fly.kind == "clause"]
    if len(clause_flies) != m or len(refl) != n * L:
        raise ValueError("fly roster does not match the instance")

    segments: Dict[Tuple, OrientedSegment] = {}
    points: Dict[int, List[Point]] = {fly.id: [] for fly in flies}
    bends = {
        (i, j): _chain_bends(i * cs.alpha + j * cs.epsilon, m)
        for i in range(1, n + 1)
        for j in range(m + 1)
    }

    # chain segments: shorten each copy at the flies of its two bends
    chain_ends: Dict[Tuple[int, int, int], Dict[int, Point]] = {}
    for (i, b), fly in refl.items():
        wings = wings_of[fly.id]
        arc = wings.arc
        per_wing: Dict[str, List[Tuple[mpq, int, int, Tuple]]] = {"left": [], "right": []}
        for j in range(m + 1):
            verts = bends[(i, j)]
            here = arc.to_local(verts[b])
            for k in (b - 1) % L, b:
                other = arc.to_local(verts[(k + 1) % L if k == b else (b - 1) % L])
                wing = "left" if other[0] < here[0] else "right"
                per_wing[wing].append((here[0], j, k, (here, other)))
        for wing, entries in per_wing.items():
            if len(entries) != m + 1:
                raise ValueError("each lower wing must carry m+1 chain copies")
            entries.sort(key=lambda e: e[0], reverse=(wing == "right"))
            for rank, (_, j, k, seg_local) in enumerate(entries):
                u, v = wings.shorten(wing, rank, seg_local)
                p = arc.to_global(u, v)
                chain_ends.setdefault((i, j, k), {})[b] = p
                points[fly.id].append(p)
    for i in range(1, n + 1):
        for j in range(m + 1):
            verts = bends[(i, j)]
            for k in range(L):
                ends = chain_ends[(i, j, k)]
                p, q = ends[k], ends[(k + 1) % L]
                tag = _slope_tag(verts[k], verts[(k + 1) % L])
                prov = ("chain", i, j, k)
                segments[prov] = OrientedSegment(p, q, tag, prov)

    # clause segments: bottom reflection fly up to the clause fly
    for ci, clause in enumerate(sat.clauses):
        cfly = clause_flies[ci]
        cwings = wings_of[cfly.id]
        for li, (v, neg) in enumerate(clause):
            rfly = refl[(v + 1, 2 * ci + 1)]
            rwings = wings_of[rfly.id]
            x = _clause_x(v + 1, ci, cs.alpha)
            top_rank = m + 1
            # bottom endpoint on the reflection fly's chosen wing
            u_b = rwings.arc.to_local(Point(x, mpq(0)))[0]
            wing_b = rfly.clause[4]
            p_bot = rwings.arc.to_global(*rwings.bristle_point(wing_b, top_rank, u_b))
            # top endpoint on the clause fly, on the wing its x falls in
            wing_t = "left" if x < cwings.crossing[0] else "right"
            p_top = cwings.arc.to_global(*cwings.bristle_point(wing_t, top_rank, x))
            prov = ("clause", ci, li)
            segments[prov] = OrientedSegment(p_bot, p_top, VERTICAL, prov)
            points[rfly.id].append(p_bot)
            points[cfly.id].append(p_top)

    # wing points: m+1 tiny vertical segments per upper wing, descending
    # from the penultimate bristle line to the wing line at the tip
    half_z = cs.zeta / 2
    for fly in flies:
        wings = wings_of[fly.id]
        for side, direction in (("left", 1), ("right", -1)):
            tip = wings.upper_tip(side)
            chord_side = "right" if side == "left" else "left"
            for w in range(m + 1):
                u = tip[0] + direction * w * cs.epsilon
                rank = 0 if w == 0 else w
                center = wings.arc.to_global(*wings.bristle_point(chord_side, rank, u))
                prov = ("wing", fly.id, side, w)
                segments[prov] = OrientedSegment(
                    Point(center.x, center.y - half_z),
                    Point(center.x, center.y + half_z),
                    VERTICAL, prov,
                )
                points[fly.id].append(center)
    return segments, points, wings_of


def build_instance(sat: SatInstance, seed: int = 0) -> GadgetScene:
    """Compile a Max-2-SAT instance into a 3-oriented gadget scene."""
    if sat.m < 1:
        raise ValueError("need at least one clause")
    cs = constants(sat.n, sat.m)
    arcs = build_banana(sat.m, cs.beta)
    flies = _build_flies(sat, cs, arcs, seed)
    segments, _, _ = _expected_segments(sat, cs, arcs, flies)
    scene = GadgetScene(sat, seed, cs, flies, tuple(segments.values()))
    assert len(scene.segments) == scene_size(sat.n, sat.m)
    return scene


# ---------------------------------------------------------------------------
# validation


def _fly_order_key(fly: Fly, arcs: Dict[str, Arc]):
    """Sort key walking the banana boundary counterclockwise."""
    center = (fly.box[0] + fly.box[1]) / 2
    p = arcs[fly.side].point_at(center)
    rank = _SIDES.index(fly.side)
    along = {"bottom": p.x, "right": p.y, "top": -p.x, "left": -p.y}[fly.side]
    return rank, along


def validate_scene(scene: GadgetScene) -> List[str]:
    """Structural validation report; an empty list means the scene passes.

    Checks: the closed-form size formula; orientation tags against the
    actual slopes (and wing-point length zeta); closure and -/+
    alternation of the re-derived pre-shortening chains; that every
    shortened endpoint equals the bristle-line intersection re-derived
    from the fly metadata; the clause-side rule (clause endpoint on the
    lower-right wing iff the literal is negated); and convex position
    along the banana: fly centers in strictly convex cyclic order, each
    fly's points inside its neighbors' wedge, points within gamma of
    the arc, and bristle ranks ascending monotonically along each wing.
    """
    report: List[str] = []
    sat, cs = scene.sat, scene.constants
    n, m = sat.n, sat.m
    L = 4 * m + 2
    arcs = scene.banana

    if constants(n, m) != cs:
        report.append("constants do not match the published table")
    if len(scene.segments) != scene_size(n, m):
        report.append(
            f"size formula violated: {len(scene.segments)} segments, "
            f"expected {scene_size(n, m)}"
        )

    by_prov: Dict[Tuple, OrientedSegment] = {}
    for seg in scene.segments:
        if seg.provenance in by_prov:
            report.append(f"duplicate provenance {seg.provenance}")
        by_prov[seg.provenance] = seg
        tag = _slope_tag(seg.p, seg.q)
        if tag != seg.orientation:
            report.append(
                f"orientation tag {seg.orientation} does not match slope "
                f"for {seg.provenance}"
            )
        if seg.provenance[0] == "wing":
            if seg.orientation != VERTICAL or abs(seg.q.y - seg.p.y) != cs.zeta:
                report.append(f"wing point {seg.provenance} is not a "
                              f"vertical segment of length zeta")
        if seg.provenance[0] == "clause" and seg.orientation != VERTICAL:
            report.append(f"clause segment {seg.provenance} is not vertical")

    # re-derive the pre-shortening chains: closure, alternation, collinearity
    for i in range(1, n + 1):
        for j in range(m + 1):
            bends = _chain_bends(i * cs.alpha + j * cs.epsilon, m)
            closed = bends + [bends[0]]
            for k in range(L):
                want = MINUS45 if k % 2 == 0 else PLUS45
                if _slope_tag(closed[k], closed[k + 1]) != want:
                    report.append(f"chain ({i},{j}) is not an alternating "
                                  f"-/+ closed polyline at segment {k}")
                    continue
                seg = by_prov.get(("chain", i, j, k))
                if seg is None:
                    report.append(f"missing chain segment ({i},{j},{k})")
                elif (orient(closed[k], closed[k + 1], seg.p) != Turn.COLLINEAR
                      or orient(closed[k], closed[k + 1], seg.q) != Turn.COLLINEAR):
                    report.append(f"chain segment ({i},{j},{k}) left its "
                                  f"pre-shortening support line")

    # re-derive every segment from the fly metadata and compare
    try:
        expected, points, wings_of = _expected_segments(sat, cs, arcs, scene.flies)
    except (ValueError, BoxTooNarrow) as exc:
        report.append(f"fly roster is inconsistent: {exc}")
        return report
    for prov, want in expected.items():
        got = by_prov.get(prov)
        if got is None:
            report.append(f"missing segment {prov}")
        elif (got.p, got.q) not in ((want.p, want.q), (want.q, want.p)):
            report.append(f"segment {prov} endpoints do not lie on the "
                          f"bristle lines derived from its flies")
    for prov in by_prov:
        if prov not in expected:
            report.append(f"unexpected segment {prov}")

    # clause-side rule, from the stored geometry itself
    refl = {fly.chain: fly for fly in scene.flies if fly.kind == "reflection"}
    for ci, clause in enumerate(sat.clauses):
        for li, (v, neg) in enumerate(clause):
            fly = refl.get((v + 1, 2 * ci + 1))
            if fly is None or fly.clause is None:
                report.append(f"clause {ci} literal {li} has no carrying fly")
                continue
            seg = by_prov.get(("clause", ci, li))
            if seg is None:
                continue
            wings = wings_of[fly.id]
            u = wings.arc.to_local(seg.p)[0]
            side = "right" if u > wings.crossing[0] else "left"
            if side != ("right" if neg else "left"):
                report.append(
                    f"clause {ci} literal {li}: endpoint on the lower-{side} "
                    f"wing contradicts negated={neg}"
                )

    # convex position along the banana
    order = sorted(scene.flies, key=lambda f: _fly_order_key(f, arcs))
    centers = [arcs[f.side].point_at((f.box[0] + f.box[1]) / 2) for f in order]
    nf = len(centers)
    for idx in range(nf):
        a, b, c = centers[idx - 1], centers[idx], centers[(idx + 1) % nf]
        if orient(a, b, c) != Turn.CCW:
            report.append(f"fly centers are not in strictly convex position "
                          f"near fly {order[idx].id}")
    for idx, fly in enumerate(order):
        prev_c, next_c = centers[idx - 1], centers[(idx + 1) % nf]
        arc = arcs[fly.side]
        # all points lie between the deepest wing chord and the topmost
        # bristle line: within chord sagitta + delta of the arc
        band = arc.curv * ((fly.box[1] - fly.box[0]) / 2) ** 2 + cs.delta
        for p in points[fly.id]:
            if orient(prev_c, p, next_c) != Turn.CCW:
                report.append(f"fly {fly.id} has a point outside its "
                              f"neighbors' convex wedge")
                break
            u, v = arc.to_local(p)
            if abs(v - arc.v_of(u)) > band:
                report.append(f"fly {fly.id} has a point outside the "
                              f"sagitta+delta band around the banana arc")
                break

    # bristle ranks ascend monotonically toward the crossing on each wing
    for fly in scene.flies:
        wings = wings_of[fly.id]
        for side in ("left", "right"):
            tip_u = wings.chord(side)[0 if side == "left" else 1][0]
            cross_u = wings.crossing[0]
            span = sorted((tip_u, cross_u))
            pts = []
            for p in points[fly.id]:
                u, v = wings.arc.to_local(p)
                off = v - _chord_v(wings.chord(side), u)
                if off in wings.offsets and span[0] < u < span[1]:
                    pts.append((u, off))
            pts.sort()
            if side == "right":
                pts.reverse()
            offs = [off for _, off in pts]
            if any(offs[t] > offs[t + 1] for t in range(len(offs) - 1)):
                report.append(f"fly {fly.id} lower-{side} wing ladder is not "
                              f"monotone toward the crossing")
    return report


# ---------------------------------------------------------------------------
# rectangle mode


@dataclass(frozen=True)
class RectangleRegion:
    """Rectangle replacing one segment: vertical segments become 45-degree
    rotated squares whose diagonal is the segment (mode "square45", the
    endpoints are opposite corners); +-45 segments become arbitrarily
    thin rectangles of the given width around the segment (mode "thin")."""

    mode: str
    p: Point
    q: Point
    width: Optional[mpq]
    provenance: Tuple


def emit_rectangles(scene: GadgetScene, thin_width) -> List[RectangleRegion]:
    """Rectangle-mode output; one rectangle per segment."""
    thin_width = rat(thin_width)
    if not 0 < thin_width < scene.constants.zeta:
        raise ValueError("thin_width must be positive and below zeta")
    rects = []
    for seg in scene.segments:
        if seg.orientation == VERTICAL:
            rects.append(RectangleRegion("square45", seg.p, seg.q, None,
                                         seg.provenance))
        else:
            rects.append(RectangleRegion("thin", seg.p, seg.q, thin_width,
                                         seg.provenance))
    assert len(rects) == len(scene.segments)
    return rects
