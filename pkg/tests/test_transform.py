import random

import pytest

from addcomb.groups import CyclicGroup, GroupSet, indicator
from addcomb.transform import (
    GroupFn,
    check_commutation,
    convolve,
    correlate,
    dft,
    gen_convolution,
    idft,
    kfold_convolve,
    kfold_correlate,
)
from oracle import convolve_fn, correlate_fn, sigma_k_count


def test_dft_delta_and_constant():
    g = CyclicGroup(4)
    d = dft(GroupFn.delta(g, 0))
    assert all(abs(v - 1) < 1e-12 for v in d.values)
    ones = dft(GroupFn.constant(g, 1))
    assert abs(ones.values[0] - 4) < 1e-12
    assert all(abs(v) < 1e-12 for v in ones.values[1:])


def test_parseval_random_int():
    rng = random.Random(2)
    g = CyclicGroup(7)
    for _ in range(20):
        f = GroupFn(g, tuple(rng.randint(-4, 4) for _ in range(7)))
        fourier = sum(abs(v) ** 2 for v in dft(f).values)
        exact = 7 * sum(v * v for v in f.values)
        assert abs(fourier - exact) <= 1e-9 * max(1, exact)
        assert round(fourier) == exact


def test_idft_roundtrip():
    rng = random.Random(3)
    g = CyclicGroup(16)
    f = GroupFn(
        g, tuple(complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(16))
    )
    back = idft(dft(f))
    assert max(abs(a - b) for a, b in zip(back.values, f.values)) < 1e-9
    zero = GroupFn.constant(g, 0)
    assert all(abs(v) < 1e-12 for v in idft(dft(zero)).values)
    d = GroupFn.delta(g, 0)
    assert max(abs(a - b) for a, b in zip(idft(dft(d)).values, d.values)) < 1e-12


def test_correlate_example():
    g = CyclicGroup(5)
    a = indicator(GroupSet.of(g, [0, 1]))
    assert correlate(a, a).values == (2, 1, 0, 0, 1)


def test_convolve_identity_element():
    rng = random.Random(4)
    g = CyclicGroup(9)
    f = GroupFn(g, tuple(rng.randint(-3, 3) for _ in range(9)))
    assert convolve(f, GroupFn.delta(g, 0)).values == f.values


def test_convolution_vs_oracle_and_fourier():
    rng = random.Random(5)
    g = CyclicGroup(7)
    f = GroupFn(g, tuple(rng.randint(-3, 3) for _ in range(7)))
    h = GroupFn(g, tuple(rng.randint(-3, 3) for _ in range(7)))
    assert list(convolve(f, h).values) == convolve_fn(f.values, h.values, 7)
    assert list(correlate(f, h).values) == correlate_fn(f.values, h.values, 7)
    fh, hh = dft(f).values, dft(h).values
    ch = dft(convolve(f, h)).values
    assert max(abs(c - a * b) for c, a, b in zip(ch, fh, hh)) < 1e-9 * 100


def test_correlate_reflection_symmetry():
    rng = random.Random(6)
    g = CyclicGroup(11)
    f = GroupFn(g, tuple(rng.randint(-2, 2) for _ in range(11)))
    h = GroupFn(g, tuple(rng.randint(-2, 2) for _ in range(11)))
    fg = correlate(f, h).values
    gf = correlate(h, f).values
    assert all(fg[x] == gf[(-x) % 11] for x in range(11))


def test_kfold_base_cases():
    g = CyclicGroup(5)
    f = GroupFn(g, (1, 2, 0, -1, 3))
    assert kfold_convolve(f, 1).values == f.values
    assert kfold_correlate(f, 1).values == correlate(f, f).values


def test_kfold_delta_shifts():
    g = CyclicGroup(5)
    d1 = GroupFn.delta(g, 1)
    assert kfold_convolve(d1, 3).values == GroupFn.delta(g, 3).values


def test_kfold_correlate_definition():
    # (f ∘_2 f)(x) = sum_{y1,y2} f(y1) f(y2) f(x + y1 + y2)
    rng = random.Random(9)
    g = CyclicGroup(5)
    f = GroupFn(g, tuple(rng.randint(-2, 2) for _ in range(5)))
    got = kfold_correlate(f, 2).values
    for x in range(5):
        direct = sum(
            f.values[y1] * f.values[y2] * f.values[(x + y1 + y2) % 5]
            for y1 in range(5)
            for y2 in range(5)
        )
        assert got[x] == direct


def test_sigma_2_matches_pair_count():
    g = CyclicGroup(7)
    gamma = GroupSet.of(g, [1, 2, 4])
    rep = kfold_convolve(indicator(gamma), 2)
    assert rep.values[0] == sigma_k_count(gamma.members, 7, 2)


def test_gen_convolution_c2_is_correlation():
    rng = random.Random(7)
    g = CyclicGroup(6)
    f = GroupFn(g, tuple(rng.randint(-3, 3) for _ in range(6)))
    h = GroupFn(g, tuple(rng.randint(-3, 3) for _ in range(6)))
    assert gen_convolution([f, h]).flat == correlate(f, h).values


def test_gen_convolution_c3_example():
    g = CyclicGroup(5)
    a = indicator(GroupSet.of(g, [0, 1]))
    table = gen_convolution([a, a, a])
    assert table(0, 0) == 2
    assert table(1, 1) == 1
    zero = GroupFn.constant(g, 0)
    assert all(v == 0 for v in gen_convolution([zero, a, a]).flat)


def test_check_commutation_delta_and_random():
    g = CyclicGroup(5)
    d = GroupFn.delta(g, 0)
    assert check_commutation([[d, d], [d, d]]).passed
    rng = random.Random(8)
    for shape in ((2, 2), (2, 3), (3, 2), (3, 3)):
        rows = [
            [GroupFn(g, tuple(rng.randint(-2, 2) for _ in range(5))) for _ in range(shape[1])]
            for _ in range(shape[0])
        ]
        check = check_commutation(rows, rng, samples=16)
        assert check.passed and check.lhs == 0


def test_check_commutation_rejects_bad_shape():
    g = CyclicGroup(5)
    d = GroupFn.delta(g, 0)
    with pytest.raises(ValueError):
        check_commutation([[d], [d]])
