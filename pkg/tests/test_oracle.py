"""Exhaustive-search reference solvers."""

import pytest

from convex_transversal import (
    Instance,
    Point,
    TooLargeError,
    build_candidates,
    gen_random,
    oracle_max,
    oracle_max_upper,
    rat,
)
from conftest import seg


def P(x, y) -> Point:
    return Point(rat(x), rat(y))


class TestBuildCandidates:
    def test_single_segment_endpoints_only(self):
        instance = Instance([seg(0, 0, 1)])
        assert set(build_candidates(instance)[0]) == {P(0, 0), P(0, 1)}

    def test_projected_candidate(self, instance_a):
        # Line through (2,0) and (1,1/2) meets the leftmost segment at (0,1).
        assert P(0, 1) in build_candidates(instance_a)[0]

    def test_counting_bound(self):
        instance = Instance([seg(0, 0, 1), seg(1, 2, 3)])
        for cands in build_candidates(instance):
            assert len(cands) <= 2 + 6  # endpoints + endpoint-pair lines


class TestOracleMax:
    def test_single_segment(self):
        assert oracle_max(Instance([seg(0, 0, 1)])) == 1

    def test_upper_chain_instance(self, instance_a):
        assert oracle_max(instance_a) == 3

    def test_quadrilateral_instance(self, instance_b):
        assert oracle_max(instance_b) == 4

    def test_cap_enforced(self):
        instance = gen_random(8, seed=1)
        with pytest.raises(TooLargeError):
            oracle_max(instance, cap=7)

    def test_reflection_invariance(self):
        for s in range(5):
            instance = gen_random(4, seed=s)
            k = oracle_max(instance)
            assert oracle_max(instance.reflect_y()) == k
            assert oracle_max(instance.reflect_x()) == k


class TestOracleMaxUpper:
    def test_single_segment(self):
        assert oracle_max_upper(Instance([seg(0, 0, 1)])) == 1

    def test_upper_chain_instance(self, instance_a):
        assert oracle_max_upper(instance_a) == 3

    def test_low_segment_unreachable(self, instance_b):
        assert oracle_max_upper(instance_b) == 3

    def test_never_exceeds_full_oracle(self):
        for s in range(10):
            instance = gen_random(5, seed=100 + s)
            assert oracle_max_upper(instance) <= oracle_max(instance)
