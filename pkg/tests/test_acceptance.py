"""Acceptance gate: oracle equivalence, exact formulas, structural checks,
and scaling budgets, each with its stated tolerance."""

import time

import pytest

from convex_transversal import (
    GadgetScene,
    Instance,
    SatInstance,
    crossing_count_direct,
    crossing_table_dual,
    gen_random,
    max_convex_transversal,
    max_quadrilateral,
    max_upper_transversal,
    oracle_max,
    oracle_max_upper,
    upper_dp,
    validate_scene,
)
from convex_transversal.hardness import build_instance, expected_optimum, scene_size
from conftest import make_instance_a, make_instance_b

# Instances per n for the full-solver sweep: 300 total, weighted toward the
# cheap sizes so the whole sweep stays far inside its wall-clock budget.
FULL_SWEEP = {2: 90, 3: 75, 4: 60, 5: 45, 6: 30}
UPPER_SWEEP = {2: 50, 3: 45, 4: 45, 5: 45, 6: 45, 7: 40, 8: 30}


def corpus(counts, base_seed):
    for n, count in counts.items():
        for i in range(count):
            yield gen_random(n, seed=base_seed + 1000 * n + i)


def all_sat_shapes():
    """One SatInstance for every (variables, clauses) in 1..5 x 1..5."""
    for n in range(1, 6):
        for m in range(1, 6):
            lits = []
            for j in range(m):
                v1, v2 = j % n, (j + 1) % n
                if v1 == v2:
                    lits.append(((v1, j % 2 == 1), (v1, j % 2 == 1)))
                else:
                    lits.append(((v1, False), (v2, j % 2 == 1)))
            yield SatInstance(n, lits)


class TestCriterion1FullOracleEquivalence:
    def test_full_matches_oracle_on_300_instances(self):
        started = time.monotonic()
        checked = 0
        for instance in corpus(FULL_SWEEP, base_seed=11_000_000):
            k, witness, _ = max_convex_transversal(instance)
            assert k == oracle_max(instance), instance
            assert witness.is_valid(instance), instance
            checked += 1
        assert checked >= 300
        assert time.monotonic() - started <= 600


class TestCriterion2UpperOracleEquivalence:
    def test_upper_matches_oracle_on_300_instances(self):
        started = time.monotonic()
        checked = 0
        for instance in corpus(UPPER_SWEEP, base_seed=22_000_000):
            k, witness = max_upper_transversal(instance)
            assert k == oracle_max_upper(instance), instance
            assert witness.is_valid(instance), instance
            checked += 1
        assert checked >= 300
        assert time.monotonic() - started <= 120


class TestCriterion3DualCounting:
    def test_dual_equals_direct_on_100_instances(self):
        started = time.monotonic()
        for i in range(100):
            n = 2 + i % 19  # n <= 20
            instance = gen_random(n, seed=33_000_000 + i)
            table = crossing_table_dual(instance)
            bottoms = instance.bottoms
            for u in range(n):
                for v in range(n):
                    if u != v:
                        assert table[u, v] == crossing_count_direct(
                            bottoms[u], bottoms[v], instance
                        )
        assert time.monotonic() - started <= 60


class TestCriterion4SlopeMonotonicity:
    def test_table_rows_monotone_along_slope_orders(self):
        # K[v, t] >= K[v, s] whenever slope(s, v) > slope(t, v): each row is
        # non-decreasing along its decreasing-slope order.
        instances = [make_instance_a(), make_instance_b()] + [
            gen_random(2 + i % 11, seed=44_000_000 + i) for i in range(60)
        ]
        for instance in instances:
            table = upper_dp(instance)
            for v, order in table.orders.items():
                values = [table.K[(v, w)] for w in order]
                assert all(a <= b for a, b in zip(values, values[1:]))


class TestCriterion5WitnessValidity:
    def test_every_solver_witness_valid(self):
        instances = [make_instance_a(), make_instance_b()] + [
            gen_random(1 + i % 6, seed=55_000_000 + i) for i in range(80)
        ]
        for instance in instances:
            k_u, w_u = max_upper_transversal(instance)
            assert w_u.is_valid(instance) and len(w_u) == k_u
            k_q, w_q = max_quadrilateral(instance)
            assert w_q.is_valid(instance) and len(w_q) == k_q
            k_f, w_f, _ = max_convex_transversal(instance)
            assert w_f.is_valid(instance) and len(w_f) == k_f


class TestCriterion6HardnessFormulas:
    def test_size_and_optimum_formulas_on_grid(self):
        for sat in all_sat_shapes():
            started = time.monotonic()
            scene = build_instance(sat)
            elapsed = time.monotonic() - started
            n, m = sat.n, sat.m
            assert len(scene.segments) == n * (12 * m * m + 18 * m + 6) \
                + 4 * m + 2 * m * m
            assert len(scene.segments) == scene_size(n, m)
            for k in range(m + 1):
                assert expected_optimum(sat, k) == len(scene.segments) \
                    - n * (4 * m + 2) * (m + 1) - (m - k)
            assert elapsed <= 1.0, (n, m, elapsed)


class TestCriterion7StructuralChecks:
    def test_built_scenes_validate(self):
        for sat in all_sat_shapes():
            assert validate_scene(build_instance(sat)) == [], (sat.n, sat.m)

    @staticmethod
    def _scene():
        return build_instance(SatInstance(1, [((0, False), (0, False))]))

    def test_fault_orientation_flip(self):
        scene = self._scene()
        segs = list(scene.segments)
        idx = next(i for i, s in enumerate(segs) if s.orientation == "plus45")
        segs[idx] = type(segs[idx])(
            segs[idx].p, segs[idx].q, "minus45", segs[idx].provenance
        )
        broken = GadgetScene(
            scene.sat, scene.seed, scene.constants, scene.flies, tuple(segs)
        )
        assert validate_scene(broken) != []

    def test_fault_deleted_copy(self):
        scene = self._scene()
        segs = tuple(
            s for s in scene.segments
            if not (s.provenance[0] == "chain" and s.provenance[2] == 1)
        )
        broken = GadgetScene(
            scene.sat, scene.seed, scene.constants, scene.flies, segs
        )
        assert validate_scene(broken) != []

    def test_fault_wing_side_swap(self):
        scene = self._scene()
        (v, neg), lit2 = scene.sat.clauses[0]
        flipped = SatInstance(
            scene.sat.n, [((v, not neg), (lit2[0], not lit2[1]))]
        )
        broken = GadgetScene(
            flipped, scene.seed, scene.constants, scene.flies, scene.segments
        )
        assert validate_scene(broken) != []


class TestCriterion8UpperScaling:
    def test_n2000_within_budget_and_near_quadratic(self):
        times = {}
        for n in (500, 1000, 2000):
            instance = gen_random(n, seed=88_000_000 + n)
            started = time.monotonic()
            k, witness = max_upper_transversal(instance)
            times[n] = time.monotonic() - started
            assert 1 <= k <= n
            assert witness.is_valid(instance)
        assert times[2000] <= 30
        # Loose super-quadratic guard: each doubling at most ~5x.
        floor = 0.05  # ignore noise on very fast runs
        assert times[1000] <= max(5 * times[500], floor)
        assert times[2000] <= max(5 * times[1000], floor)


class TestCriterion9FullDpDeskScale:
    def test_n12_within_five_minutes(self):
        instance = gen_random(12, seed=99_000_000)
        started = time.monotonic()
        k, witness, _ = max_convex_transversal(instance)
        assert time.monotonic() - started <= 300
        assert witness.is_valid(instance) and len(witness) == k


class TestCriterion10NamedInstances:
    def test_upper_chain_instance(self):
        instance = make_instance_a()
        assert max_convex_transversal(instance)[0] == 3
        assert oracle_max(instance) == 3

    def test_quadrilateral_instance(self):
        instance = make_instance_b()
        assert max_convex_transversal(instance)[0] == 4
        assert max_upper_transversal(instance)[0] == 3
        assert oracle_max(instance) == 4
