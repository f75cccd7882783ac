"""Upper-chain dynamic program against the exhaustive search."""

import pytest
from hypothesis import given, settings, strategies as st

from convex_transversal import (
    Instance,
    Point,
    gen_random,
    max_upper_transversal,
    oracle_max_upper,
    rat,
    slope,
    upper_dp,
    upper_dp_from,
)
from conftest import seg


def P(x, y) -> Point:
    return Point(rat(x), rat(y))


class TestUpperDp:
    def test_fresh_chain_cell_is_one(self, instance_a):
        table = upper_dp(instance_a)
        # First cell in each slope order with the neighbor right of v.
        for v, order in table.orders.items():
            w = order[0]
            if instance_a.bottoms[w].x > instance_a.bottoms[v].x:
                assert table.K[(v, w)] == 1

    def test_named_instance_max(self, instance_a):
        table = upper_dp(instance_a)
        assert max(table.K.values()) == 3

    def test_single_segment(self):
        instance = Instance([seg(0, 0, 1)])
        k, witness = max_upper_transversal(instance)
        assert k == 1 and len(witness) == 1


class TestMaxUpperTransversal:
    def test_named_instance(self, instance_a):
        k, witness = max_upper_transversal(instance_a)
        assert k == 3
        assert witness.is_valid(instance_a)

    def test_two_segments(self):
        instance = Instance([seg(0, 0, 1), seg(1, 0, 1)])
        assert max_upper_transversal(instance)[0] == 2

    def test_low_segment_unreachable(self, instance_b):
        assert max_upper_transversal(instance_b)[0] == 3

    @given(st.integers(1, 6), st.integers(0, 10_000))
    @settings(max_examples=60, deadline=None)
    def test_matches_oracle(self, n, seed):
        instance = gen_random(n, seed=seed)
        assert max_upper_transversal(instance)[0] == oracle_max_upper(instance)

    @given(st.integers(2, 30), st.integers(0, 10_000))
    @settings(max_examples=30, deadline=None)
    def test_slope_monotonicity(self, n, seed):
        # Cells along each decreasing-slope order carry a running maximum:
        # a lower-slope predecessor never does worse.
        instance = gen_random(n, seed=seed)
        table = upper_dp(instance)
        for v, order in table.orders.items():
            values = [table.K[(v, w)] for w in order]
            assert values == sorted(values) or all(
                a <= b for a, b in zip(values, values[1:])
            )

    @given(st.integers(1, 6), st.integers(0, 10_000))
    @settings(max_examples=40, deadline=None)
    def test_x_reflection_invariance(self, n, seed):
        instance = gen_random(n, seed=seed)
        mirrored = Instance(
            [seg(-s.x, s.y_lo, s.y_hi) for s in instance.segments]
        )
        assert (
            max_upper_transversal(instance)[0]
            == max_upper_transversal(mirrored)[0]
        )


class TestUpperDpFrom:
    def test_empty_subinstance(self, instance_a):
        assert upper_dp_from(P(0, 0), instance_a, region_ids=[]) == {}

    def test_one_reachable_segment(self):
        instance = Instance([seg(0, 0, 1), seg(1, 0, 1)])
        values = upper_dp_from(P(0, 0), instance, region_ids=[1])
        assert values and max(values.values()) == 2

    def test_named_instance_suffix(self, instance_a):
        values = upper_dp_from(P(0, 0), instance_a, region_ids=[1, 2])
        assert max(values.values()) == 3

    def test_chain_slopes_decrease(self, instance_a):
        # Any two-edge value implies slope(ell,u) >= slope(u,v); spot-check
        # that keys whose final edge rises above the start edge are absent.
        values = upper_dp_from(P(0, 0), instance_a, region_ids=[1, 2])
        bottoms = instance_a.bottoms
        for (u_id, v_id), count in values.items():
            if u_id is not None:
                assert slope(P(0, 0), bottoms[u_id]) >= slope(
                    bottoms[u_id], bottoms[v_id]
                )
