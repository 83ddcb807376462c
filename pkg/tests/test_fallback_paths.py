"""The set-based fallbacks must agree with the bitmask fast paths."""

import importlib
import random

import pytest

from addcomb.energy import (
    correlation_counts,
    shift_spread_sizes,
    weight_counts,
)
from addcomb.groups import CyclicGroup, GroupSet, intersect_shifts, sumset

# the package re-exports a function named `energy`, so fetch the module
# itself through the import system
energy_mod = importlib.import_module("addcomb.energy")
groups_mod = importlib.import_module("addcomb.groups")


def rand_pair(rng, n):
    g = CyclicGroup(n)
    a = GroupSet.of(g, [x for x in range(n) if rng.random() < 0.5] or [0])
    b = GroupSet.of(g, [x for x in range(n) if rng.random() < 0.5] or [1])
    return a, b


@pytest.fixture
def no_bitsets(monkeypatch):
    monkeypatch.setattr(groups_mod, "BITSET_LIMIT", 0)
    monkeypatch.setattr(energy_mod, "BITSET_LIMIT", 0)


def test_intersect_shifts_paths_agree(no_bitsets):
    rng = random.Random(1)
    for _ in range(30):
        a, b = rand_pair(rng, 13)
        shifts = [rng.randrange(13) for _ in range(2)]
        signs = [rng.choice("+-") for _ in range(2)]
        slow = intersect_shifts(a, b, shifts, signs)
        fast = GroupSet.of(a.group, slow.members)
        # recompute by definition
        expect = set(b.members)
        for s, sg in zip(shifts, signs):
            if sg == "-":
                expect &= {(x - s) % 13 for x in a.members}
            else:
                expect &= {(s - x) % 13 for x in a.members}
        assert set(slow.members) == expect == set(fast.members)


def test_sumset_paths_agree(no_bitsets):
    rng = random.Random(2)
    for _ in range(20):
        a, b = rand_pair(rng, 11)
        for sign, op in (("+", lambda x, y: x + y), ("-", lambda x, y: x - y)):
            expect = {op(x, y) % 11 for x in a for y in b}
            assert set(sumset(a, b, sign).members) == expect


def test_energy_tables_paths_agree(no_bitsets):
    rng = random.Random(3)
    for _ in range(15):
        a, b = rand_pair(rng, 12)
        slow_corr = correlation_counts(a, b)
        expect = tuple(
            sum(1 for y in a.members if (y + x) % 12 in b.member_set)
            for x in range(12)
        )
        assert slow_corr == expect
        slow_w = weight_counts(a, b, 1)
        for x in range(12):
            assert slow_w[(x,)] == len(intersect_shifts(a, b, (x,)))
        for sign in "+-":
            spread = shift_spread_sizes(a, sign)
            for x in range(12):
                ax = intersect_shifts(a, a, (x,))
                want = len(sumset(a, ax, sign)) if len(ax) else 0
                assert spread[x] == want


def test_fast_and_slow_checks_match():
    """Same inequality values with and without the bitmask fast path."""
    rng = random.Random(4)
    instances = [rand_pair(rng, 16) for _ in range(8)]
    fast = [
        (
            energy_mod.check_heart(a, "-").slack,
            energy_mod.check_energy_weight_b(a, b, 1, 1, "+").slack,
        )
        for a, b in instances
    ]
    import unittest.mock as mock

    with mock.patch.object(energy_mod, "BITSET_LIMIT", 0), mock.patch.object(
        groups_mod, "BITSET_LIMIT", 0
    ):
        slow = [
            (
                energy_mod.check_heart(a, "-").slack,
                energy_mod.check_energy_weight_b(a, b, 1, 1, "+").slack,
            )
            for a, b in instances
        ]
    assert fast == slow
