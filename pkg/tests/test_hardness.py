"""Max-2-SAT to 3-oriented-segment gadget compiler."""

import pytest
from gmpy2 import mpq

from convex_transversal import (
    GadgetScene,
    SatInstance,
    anchor_points,
    build_banana,
    build_chain,
    build_fly,
    build_instance,
    constants,
    emit_rectangles,
    expected_optimum,
    rat,
    validate_scene,
)
from convex_transversal.hardness import BoxTooNarrow, scene_size


def sat_of(n, lits) -> SatInstance:
    return SatInstance(n, lits)


ONE_CLAUSE = sat_of(1, [((0, False), (0, False))])
TWO_VARS = sat_of(2, [((0, False), (1, True)), ((1, False), (0, False))])


class TestConstants:
    def test_smallest_case(self):
        c = constants(1, 1)
        assert c.alpha == mpq(1, 100)
        assert c.beta == mpq(1, 10_000)
        assert c.gamma == mpq(1, 10**10)
        assert c.delta == c.gamma / 100
        assert c.epsilon == c.delta / 100
        assert c.zeta == c.delta / 100

    def test_two_three_case(self):
        c = constants(2, 3)
        assert c.alpha == mpq(1, 200)
        assert c.beta == mpq(1, 20_000)
        assert c.gamma == mpq(1, 200) ** 3 / 90_000

    def test_ordering_chain_holds(self):
        c = constants(10, 10)
        assert 1 > c.alpha > c.beta > c.gamma > c.delta > c.epsilon > c.zeta > 0
        assert 0 < c.kappa <= c.delta


class TestBuildChain:
    def test_smallest_trace(self):
        pts = build_chain(1, 1, 1, mpq(1, 100))
        want = [
            (mpq(1, 100), 1), (mpq(101, 100), 0), (2, mpq(99, 100)),
            (mpq(199, 100), 1), (mpq(99, 100), 0), (0, mpq(99, 100)),
            (mpq(1, 100), 1),
        ]
        assert [(p.x, p.y) for p in pts] == [(rat(a), rat(b)) for a, b in want]

    @pytest.mark.parametrize("i,n,m", [(1, 2, 1), (2, 3, 4), (1, 1, 5)])
    def test_segment_count_and_closure(self, i, n, m):
        pts = build_chain(i, n, m, constants(n, m).alpha)
        assert len(pts) == 4 * m + 3  # 4m+2 segments, closed
        assert pts[0] == pts[-1]

    def test_alternating_slopes(self):
        pts = build_chain(1, 2, 2, constants(2, 2).alpha)
        for k, (p, q) in enumerate(zip(pts, pts[1:])):
            want = mpq(-1) if k % 2 == 0 else mpq(1)
            assert (q.y - p.y) / (q.x - p.x) == want


class TestBuildBanana:
    def test_top_arc_vertex_and_end(self):
        beta = constants(1, 3).beta
        top = build_banana(3, beta)["top"]
        assert top.point_at(rat(3)).y == 1
        assert top.point_at(beta).y == 1 - beta

    def test_rational_everywhere(self):
        arcs = build_banana(2, constants(1, 2).beta)
        for arc in arcs.values():
            p = arc.point_at(rat("7/13") + arc.u_lo)
            assert isinstance(p.y, type(mpq(1)))


class TestAnchorPoints:
    def _top_arc(self, m=1):
        return build_banana(m, constants(1, m).beta)["top"]

    def test_symmetric_box_centered_on_vertex(self):
        arc = self._top_arc()
        gamma = constants(1, 1).gamma
        pts = anchor_points((1 - mpq(1, 100), 1 + mpq(1, 100)), gamma, arc)
        assert pts[2].x == 1 and pts[2].y == 1

    def test_outer_anchors_on_box_edges(self):
        arc = self._top_arc()
        box = (mpq(9, 10), mpq(11, 10))
        pts = anchor_points(box, constants(1, 1).gamma, arc)
        assert pts[0].x == box[0] and pts[4].x == box[1]

    def test_inner_anchors_at_gamma(self):
        arc = self._top_arc()
        gamma = constants(1, 1).gamma
        pts = anchor_points((mpq(9, 10), mpq(11, 10)), gamma, arc)
        assert pts[2].x - pts[1].x == gamma
        assert pts[3].x - pts[2].x == gamma

    def test_narrow_box_rejected(self):
        arc = self._top_arc()
        with pytest.raises(BoxTooNarrow):
            anchor_points((1, 1 + mpq(1, 10**12)), constants(1, 1).gamma, arc)


class TestBuildFly:
    def _fly(self, m=2):
        cs = constants(1, m)
        arc = build_banana(m, cs.beta)["top"]
        box = (rat(m) - 100 * cs.gamma, rat(m) + 100 * cs.gamma)
        anchors = anchor_points(box, cs.gamma, arc)
        return build_fly(anchors, "reflection", arc=arc, m=m, constants=cs,
                         skip="a2"), cs

    def test_bristle_offsets_m2(self):
        fly, cs = self._fly(m=2)
        assert fly.offsets[1:] == (
            cs.delta - 4 * cs.kappa, cs.delta - cs.kappa, cs.delta
        )

    def test_bristle_count(self):
        fly, _ = self._fly(m=3)
        assert len(fly.offsets) == 3 + 2  # wing line + m+1 bristles

    def test_crossing_between_wings(self):
        fly, cs = self._fly()
        lo, hi = fly.anchors_local[0][0], fly.anchors_local[4][0]
        assert lo < fly.crossing[0] < hi


class TestBuildInstance:
    def test_size_formula_examples(self):
        assert len(build_instance(ONE_CLAUSE).segments) == 42
        two_two = sat_of(2, [((0, False), (1, False)), ((0, True), (1, True))])
        assert len(build_instance(two_two).segments) == 196
        two_three = sat_of(2, [
            ((0, False), (1, False)),
            ((0, True), (1, True)),
            ((0, False), (1, True)),
        ])
        assert len(build_instance(two_three).segments) == 366
        assert scene_size(2, 3) == 366

    def test_orientations_limited_to_three(self):
        scene = build_instance(TWO_VARS)
        assert {s.orientation for s in scene.segments} == {
            "vertical", "plus45", "minus45"
        }

    def test_wing_point_lengths(self):
        scene = build_instance(ONE_CLAUSE)
        zeta = scene.constants.zeta
        wings = [s for s in scene.segments if s.provenance[0] == "wing"]
        assert wings and all(
            s.p.x == s.q.x and abs(s.q.y - s.p.y) == zeta for s in wings
        )

    def test_deterministic_in_seed(self):
        a = build_instance(TWO_VARS, seed=5)
        b = build_instance(TWO_VARS, seed=5)
        assert a.segments == b.segments

    def test_coordinate_bit_lengths_polynomial(self):
        scene = build_instance(build_instance_sat(5, 5), seed=1)
        worst = max(
            max(v.numerator.bit_length(), v.denominator.bit_length())
            for s in scene.segments
            for v in (s.p.x, s.p.y, s.q.x, s.q.y)
        )
        assert worst <= 2000  # polynomial in log n + log m, far below any blowup


def build_instance_sat(n, m) -> SatInstance:
    lits = []
    for j in range(m):
        v1 = j % n
        v2 = (j + 1) % n
        if v1 == v2:
            lits.append(((v1, False), (v1, False)))
        else:
            lits.append(((v1, False), (v2, j % 2 == 1)))
    return SatInstance(n, lits)


class TestExpectedOptimum:
    def test_satisfied_case(self):
        assert expected_optimum(ONE_CLAUSE, 1) == 30

    def test_unsatisfied_case(self):
        assert expected_optimum(ONE_CLAUSE, 0) == 29

    def test_linearity(self):
        sat = build_instance_sat(3, 4)
        for k in range(4):
            assert expected_optimum(sat, k + 1) == expected_optimum(sat, k) + 1


class TestSatInstance:
    def test_opposing_self_clause_rejected(self):
        with pytest.raises(ValueError):
            SatInstance(1, [((0, False), (0, True))])

    def test_repeated_identical_literal_allowed(self):
        assert SatInstance(1, [((0, True), (0, True))]).m == 1

    def test_variable_out_of_range(self):
        with pytest.raises(ValueError):
            SatInstance(1, [((0, False), (1, False))])


class TestValidateScene:
    def test_fresh_scene_passes(self):
        assert validate_scene(build_instance(ONE_CLAUSE)) == []

    def test_orientation_flip_detected(self):
        scene = build_instance(ONE_CLAUSE)
        segs = list(scene.segments)
        idx = next(i for i, s in enumerate(segs) if s.orientation == "plus45")
        segs[idx] = type(segs[idx])(
            segs[idx].p, segs[idx].q, "minus45", segs[idx].provenance
        )
        broken = GadgetScene(
            scene.sat, scene.seed, scene.constants, scene.flies, tuple(segs)
        )
        assert any("orientation" in msg for msg in validate_scene(broken))

    def test_deleted_copy_detected(self):
        scene = build_instance(ONE_CLAUSE)
        segs = tuple(
            s for s in scene.segments
            if not (s.provenance[0] == "chain" and s.provenance[2] == 1)
        )
        broken = GadgetScene(
            scene.sat, scene.seed, scene.constants, scene.flies, segs
        )
        report = validate_scene(broken)
        assert any("size" in msg or "missing" in msg for msg in report)

    def test_wing_side_swap_detected(self):
        scene = build_instance(ONE_CLAUSE)
        (v, neg1), lit2 = scene.sat.clauses[0]
        flipped = SatInstance(
            scene.sat.n, [((v, not neg1), (lit2[0], not lit2[1]))]
        )
        broken = GadgetScene(
            flipped, scene.seed, scene.constants, scene.flies, scene.segments
        )
        assert validate_scene(broken)


class TestSceneJson:
    def test_roundtrip_exact(self):
        scene = build_instance(TWO_VARS, seed=3)
        again = GadgetScene.from_json(scene.to_json())
        assert again.segments == scene.segments
        assert again.flies == scene.flies
        assert again.constants == scene.constants


class TestEmitRectangles:
    def test_count_preserved(self):
        scene = build_instance(ONE_CLAUSE)
        rects = emit_rectangles(scene, scene.constants.zeta / 2)
        assert len(rects) == len(scene.segments)

    def test_modes_match_orientations(self):
        scene = build_instance(ONE_CLAUSE)
        rects = emit_rectangles(scene, scene.constants.zeta / 2)
        for rect, segment in zip(rects, scene.segments):
            if segment.orientation == "vertical":
                assert rect.mode == "square45" and rect.width is None
                assert (rect.p, rect.q) == (segment.p, segment.q)
            else:
                assert rect.mode == "thin"
                assert rect.width == scene.constants.zeta / 2

    def test_width_must_be_thin(self):
        scene = build_instance(ONE_CLAUSE)
        with pytest.raises(ValueError):
            emit_rectangles(scene, scene.constants.zeta * 2)
