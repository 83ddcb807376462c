import csv
import math

import pytest

from addcomb.experiments import (
    ConvexScanRow,
    assert_convex,
    autocorrelation_np,
    convex_scan,
    coverage_scan,
    divisors,
    doubling_stats,
    expansion_scan,
    level_set_profile,
    longest_progression,
    perturbed_quadratic,
    primes_up_to,
    progression_batch,
    progression_scan,
    squares_sequence,
    subgroup_scan,
    sumset_size_np,
    write_csv,
)
from addcomb.subgroup import make_field, subgroup
from oracle import longest_ap_naive, quadruple_energy


def test_primes_and_divisors():
    assert primes_up_to(20) == [2, 3, 5, 7, 11, 13, 17, 19]
    assert divisors(12) == [1, 2, 3, 4, 6, 12]


def test_subgroup_scan_golden_rows():
    rows = subgroup_scan(31, sample_fraction=1.0)
    by_key = {(r.p, r.t): r for r in rows}
    g = by_key[(7, 3)]
    assert (g.E2, g.E3, g.sum, g.diff) == (15, 33, 6, 7)
    assert g.lower == 81 / 6
    t1 = by_key[(7, 1)]
    assert t1.E2 == 1 and t1.sum == 1 and t1.ratio_229 is None
    for r in rows:
        assert r.E2 * r.sum >= r.t ** 4
    assert [(r.p, r.t) for r in rows] == sorted((r.p, r.t) for r in rows)


def test_subgroup_scan_energy_matches_oracle():
    rows = subgroup_scan(13)
    fld = make_field(13)
    for r in rows:
        if r.p != 13:
            continue
        g = subgroup(fld, r.t)
        assert r.E2 == quadruple_energy(g.elements, g.elements, 13)


def test_autocorrelation_np_matches_definition():
    els = [1, 2, 4]
    counts = autocorrelation_np(els, 7)
    assert counts.tolist() == [3, 1, 1, 1, 1, 1, 1]
    assert sumset_size_np(els, els, 7) == 6


def test_level_profile_partition():
    rows = level_set_profile(7, 3)
    assert sum(r.size for r in rows) == 6
    assert sum(1 for r in rows if r.size) == 1
    # full multiplicative group: everything nonzero is in Gamma - Gamma
    rows = level_set_profile(13, 12)
    fld = make_field(13)
    g = subgroup(fld, 12)
    counts = autocorrelation_np(g.elements, 13)
    d = rows[0].d
    above = sum(1 for x in range(1, 13) if counts[x] > d)
    assert sum(r.size for r in rows) == above


def test_coverage_scan():
    rows = coverage_scan(31)
    by_key = {(r.p, r.t): r for r in rows}
    for p in (3, 5, 7, 13, 31):
        assert by_key[(p, p - 1)].m == 2
        assert by_key[(p, 1)].m is None  # singleton never covers
    # brute force m for p=7, t=3
    cur = {1, 2, 4}
    m = 1
    while cur != set(range(7)):
        cur = {(a + b) % 7 for a in cur for b in (1, 2, 4)}
        m += 1
    assert by_key[(7, 3)].m == m == 3
    assert by_key[(7, 3)].covered_by_6


def test_expansion_scan_rows():
    rows = expansion_scan(31, 6, trials=10, seed=3)
    assert rows[0].kind == "full"
    single = rows[1]
    assert single.kind == "singleton" and single.sumset == 6
    assert len(rows) == 12
    fld = make_field(31)
    g = subgroup(fld, 6)
    assert rows[0].sumset == sumset_size_np(g.elements, g.elements, 31)


def test_convex_generators():
    assert squares_sequence(5) == [1, 4, 9, 16, 25]
    assert_convex(squares_sequence(100))
    seq = perturbed_quadratic(50, seed=9)
    assert_convex(seq)
    with pytest.raises(ValueError):
        assert_convex([1, 2, 3, 4])  # constant gaps
    with pytest.raises(ValueError):
        assert_convex([5, 3, 1])


def test_convex_scan_small_values():
    rows = convex_scan([2, 4], sample_fraction=1.0)
    assert rows[0].n == 2 and rows[0].E2 == 6
    a = squares_sequence(4)
    n_mod = 4 * max(a) + 1
    assert rows[1].E2 == quadruple_energy(a, a, n_mod)


def test_convex_scan_rejects_tiny():
    with pytest.raises(ValueError):
        convex_scan([1])


def test_doubling_stats():
    geo = doubling_stats([2 ** i for i in range(1, 9)])
    assert geo.prod == 2 * 8 - 1
    one = doubling_stats([1])
    assert (one.n, one.prod, one.shifted_prod, one.mult_energy, one.add_energy) == (
        1, 1, 1, 1, 1,
    )
    interval = doubling_stats(list(range(1, 17)))
    assert interval.speps_third >= 1
    with pytest.raises(ValueError):
        doubling_stats([0, 1])
    with pytest.raises(ValueError):
        doubling_stats([])


def test_doubling_mult_energy_oracle():
    a = [1, 2, 3, 4, 6]
    row = doubling_stats(a)
    prods = {}
    for x in a:
        for y in a:
            prods[x * y] = prods.get(x * y, 0) + 1
    assert row.mult_energy == sum(v * v for v in prods.values())


def test_longest_progression_examples():
    fld = make_field(7)
    assert longest_progression(subgroup(fld, 3))[0] == 2
    assert longest_progression(subgroup(fld, 6))[0] == 6
    fld = make_field(31)
    for t in (3, 5, 6, 10, 15):
        g = subgroup(fld, t)
        got = longest_progression(g)[0]
        assert got == longest_ap_naive(list(g.elements), 31)


def test_progression_shape_guard_near_full_subgroup():
    # delta -> 0 makes the reported shape exceed float range; it must be
    # dropped, not overflow
    row = progression_scan(1009, 1008)
    assert row.ap_len == 1008
    assert row.vinogradov_shape is None


def test_autocorrelation_chunking_matches_dict_count():
    fld = make_field(499)
    g = subgroup(fld, 498)
    counts = autocorrelation_np(g.elements, 499)
    expect = {}
    for a in g.elements:
        for b in g.elements:
            d = (b - a) % 499
            expect[d] = expect.get(d, 0) + 1
    assert counts.tolist() == [expect.get(x, 0) for x in range(499)]


def test_progression_scan_row():
    row = progression_scan(7, 3)
    assert row.ap_len == 2
    prog = [(row.start + i * row.step) % 7 for i in range(row.ap_len)]
    assert set(prog) <= {1, 2, 4}
    assert row.tmult2 >= row.ap_len ** 4 / 3  # subset lower bound
    rows = progression_batch(31)
    assert [(r.p, r.t) for r in rows] == sorted((r.p, r.t) for r in rows)
    full = next(r for r in rows if (r.p, r.t) == (31, 30))
    assert full.ap_len == 30


def test_write_csv_deterministic(tmp_path):
    rows = convex_scan([2, 4])
    p1 = tmp_path / "a.csv"
    p2 = tmp_path / "b.csv"
    write_csv(p1, rows)
    write_csv(p2, convex_scan([2, 4]))
    assert p1.read_bytes() == p2.read_bytes()
    with open(p1, newline="") as fh:
        got = list(csv.reader(fh))
    assert got[0] == ["n", "E2", "E3", "ratio_8936", "ratio_E3", "andrews_max"]
    assert got[1][0] == "2" and got[1][1] == "6"


def test_write_csv_empty_rejected(tmp_path):
    with pytest.raises(ValueError):
        write_csv(tmp_path / "x.csv", [])
