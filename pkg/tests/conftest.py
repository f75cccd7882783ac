"""Shared fixtures: the two named instances and random-corpus helpers."""

import pytest

from convex_transversal import Instance, VSegment, gen_random, rat


def seg(x, lo, hi) -> VSegment:
    return VSegment(rat(x), rat(lo), rat(hi))


def make_instance_a() -> Instance:
    """Three segments whose optimum is an upper chain of size 3."""
    return Instance([seg(0, 0, 2), seg(1, "1/2", 3), seg(2, 0, "5/2")])


def make_instance_b() -> Instance:
    """Four segments where only a quadrilateral reaches the optimum 4."""
    return Instance([
        seg(0, 0, 1),
        seg(1, 2, 3),
        seg(2, 0, 1),
        seg("9/10", -3, -2),
    ])


@pytest.fixture
def instance_a() -> Instance:
    return make_instance_a()


@pytest.fixture
def instance_b() -> Instance:
    return make_instance_b()


def random_corpus(count: int, n_lo: int, n_hi: int, seed: int = 0):
    """Deterministic list of validated random instances."""
    out = []
    for i in range(count):
        n = n_lo + i % (n_hi - n_lo + 1)
        out.append(gen_random(n, seed=seed + 10_000 * i))
    return out
