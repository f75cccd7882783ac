"""Radial orders and the dual-vs-direct crossing count equivalence."""

import pytest
from hypothesis import given, settings, strategies as st

from convex_transversal import (
    Instance,
    Point,
    crossing_count_direct,
    crossing_table_dual,
    gen_random,
    radial_order,
    rat,
)
from conftest import seg


def P(x, y) -> Point:
    return Point(rat(x), rat(y))


class TestRadialOrder:
    def test_around_rightmost(self, instance_a):
        order = radial_order(P(2, 0), instance_a)
        # slopes toward (2,0): S1 bottom 0, S2 bottom -1/2 -> S1 first
        assert order.ordered == (0, 1)

    def test_two_segments_singleton(self):
        instance = Instance([seg(0, 0, 1), seg(1, 2, 3)])
        assert radial_order(P(0, 0), instance).ordered == (1,)

    def test_around_leftmost(self, instance_a):
        order = radial_order(P(0, 0), instance_a)
        # slopes toward (0,0): S2 bottom 1/2, S3 bottom 0 -> S2 first
        assert order.ordered == (1, 2)

    def test_non_endpoint_rejected(self, instance_a):
        with pytest.raises(ValueError):
            radial_order(P(5, 5), instance_a)


class TestDirectCount:
    def test_long_chord_counts_closed_end(self, instance_a):
        # S2's bottom (1, 1/2) sits above the chord; only S3 at the closed end.
        assert crossing_count_direct(P(0, 0), P(2, 0), instance_a) == 1

    def test_closed_end_region(self, instance_a):
        assert crossing_count_direct(P(0, 0), P(1, "1/2"), instance_a) == 1

    def test_open_end_excluded(self, instance_a):
        assert crossing_count_direct(P(1, "1/2"), P(2, 0), instance_a) == 1


class TestDualTable:
    def test_named_instance_all_pairs(self, instance_a):
        table = crossing_table_dual(instance_a)
        bottoms = instance_a.bottoms
        for u in range(3):
            for v in range(3):
                if u != v:
                    assert table[u, v] == crossing_count_direct(
                        bottoms[u], bottoms[v], instance_a
                    )

    def test_two_squares(self):
        instance = Instance([seg(0, 0, 1), seg(1, 0, 1)])
        table = crossing_table_dual(instance)
        assert table[0, 1] == 1
        assert table[1, 0] == 1

    @given(st.integers(2, 20), st.integers(0, 10_000))
    @settings(max_examples=50, deadline=None)
    def test_matches_direct_on_random_instances(self, n, seed):
        instance = gen_random(n, seed=seed)
        table = crossing_table_dual(instance)
        bottoms = instance.bottoms
        for u in range(n):
            for v in range(n):
                if u != v:
                    assert table[u, v] == crossing_count_direct(
                        bottoms[u], bottoms[v], instance
                    )
