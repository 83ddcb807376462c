"""Desk-scale experiment scans: subgroup energies and sumsets, dyadic level
profiles, iterated-sumset coverage, expansion ratios, convex sets, and
multiplicative-doubling statistics.

Counts are exact integers (numpy bincount / hashed counting); asymptotic
statements are reported as ratio columns and never asserted against
invented constants.  Rows are emitted in sorted (p, t) order so CSV output
is deterministic.
"""

from __future__ import annotations

import csv
import math
import random
from dataclasses import asdict, dataclass, fields

import numpy as np

from .subgroup import MultSubgroup, make_field, subgroup


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, int(n ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, n + 1, p)))
    return [i for i, v in enumerate(sieve) if v]


def divisors(n: int) -> list[int]:
    out = []
    for d in range(1, int(n ** 0.5) + 1):
        if n % d == 0:
            out.append(d)
            if d * d != n:
                out.append(n // d)
    return sorted(out)


def _log2(x) -> float:
    return math.log2(x)


# ---------------------------------------------------------------------------
# exact counting helpers (numpy int64 paths, ranges checked)
# ---------------------------------------------------------------------------


def autocorrelation_np(elements, p: int) -> np.ndarray:
    """(S ∘ S)(x) for S inside Z/p as an int64 vector of length p.

    Difference pairs are processed in row blocks so the peak footprint
    stays a few million entries even at the p <= 10^4 cap.
    """
    g = np.asarray(sorted(elements), dtype=np.int64)
    t = len(g)
    counts = np.zeros(p, dtype=np.int64)
    block = max(1, 4_000_000 // max(t, 1))
    for lo in range(0, t, block):
        diffs = (g[None, :] - g[lo : lo + block, None]) % p
        counts += np.bincount(diffs.ravel(), minlength=p)
    return counts


def sumset_size_np(a, b, p: int) -> int:
    ga = np.asarray(sorted(a), dtype=np.int64)
    gb = np.asarray(sorted(b), dtype=np.int64)
    if len(ga) * len(gb) <= 4_000_000:
        return int(np.unique((ga[:, None] + gb[None, :]) % p).size)
    return int(_support_convolve(_indicator_np(ga, p), _indicator_np(gb, p)).sum())


def _indicator_np(els, p: int) -> np.ndarray:
    ind = np.zeros(p)
    ind[np.asarray(els, dtype=np.int64)] = 1.0
    return ind


def _support_convolve(ind_a: np.ndarray, ind_b: np.ndarray) -> np.ndarray:
    """Support of the cyclic convolution of two 0/1 vectors, exactly.

    Counts are bounded by the vector length, far below float precision,
    so rounding the FFT product at 1/2 is exact.
    """
    conv = np.fft.irfft(np.fft.rfft(ind_a) * np.fft.rfft(ind_b), n=len(ind_a))
    return conv > 0.5


def _energy_sums(counts: np.ndarray) -> tuple[int, int]:
    c = counts.astype(np.int64)
    e2 = int(np.sum(c * c))
    e3 = int(np.sum(c * c * c))
    return e2, e3


# ---------------------------------------------------------------------------
# subgroup scan
# ---------------------------------------------------------------------------


@dataclass
class SubgroupScanRow:
    p: int
    t: int
    E2: int
    E3: int
    sum: int
    diff: int
    ratio_52: float | None
    ratio_229: float | None
    ratio_sumw: float | None
    lower: float
    fourier_max: float


def subgroup_scan(
    p_max: int,
    t_min: int = 1,
    t_max: int | None = None,
    sample_fraction: float = 0.01,
    seed: int = 1,
) -> list[SubgroupScanRow]:
    """One row per (prime p <= p_max, t | p-1): exact energies, sumset and
    difference-set sizes, reported ratio columns, and the largest nontrivial
    Fourier coefficient.  E2 * |sum| >= t^4 is asserted on every row; a
    random sample of rows is re-counted by an independent hashed method.
    """
    if p_max > 10 ** 4:
        raise ValueError("scan capped at p <= 10^4")
    rng = random.Random(seed)
    rows = []
    for p in primes_up_to(p_max):
        if p == 2:
            continue
        fld = make_field(p)
        for t in divisors(p - 1):
            if t < t_min or (t_max is not None and t > t_max):
                continue
            gamma = subgroup(fld, t)
            els = gamma.elements
            counts = autocorrelation_np(els, p)
            e2, e3 = _energy_sums(counts)
            ssum = sumset_size_np(els, els, p)
            sdiff = int(np.count_nonzero(counts))
            if e2 * ssum < t ** 4:
                raise AssertionError(f"energy lower bound failed at p={p}, t={t}")
            fhat = np.fft.fft(_indicator_np(els, p))
            fourier_max = float(np.abs(fhat[1:]).max()) if p > 1 else 0.0
            logt = _log2(t) if t > 1 else 0.0
            rows.append(
                SubgroupScanRow(
                    p=p,
                    t=t,
                    E2=e2,
                    E3=e3,
                    sum=ssum,
                    diff=sdiff,
                    ratio_52=e2 / t ** 2.5,
                    ratio_229=(e2 / (t ** (22 / 9) * logt)) if logt else None,
                    ratio_sumw=(e2 / (t ** (4 / 3) * ssum ** (2 / 3) * logt))
                    if logt
                    else None,
                    lower=t ** 4 / ssum,
                    fourier_max=fourier_max,
                )
            )
            if rng.random() < sample_fraction:
                _crosscheck_subgroup_row(rows[-1], els, p)
    rows.sort(key=lambda r: (r.p, r.t))
    return rows


def _crosscheck_subgroup_row(row: SubgroupScanRow, els, p: int) -> None:
    """Hashed-sum recount of the integer fields, independent of bincount."""
    sums: dict[int, int] = {}
    for a in els:
        for b in els:
            s = (a + b) % p
            sums[s] = sums.get(s, 0) + 1
    e2 = sum(v * v for v in sums.values())
    if e2 != row.E2 or len(sums) != row.sum:
        raise AssertionError(f"cross-check failed at p={row.p}, t={row.t}")
    shifts = 0
    mem = set(els)
    e3 = 0
    for x in range(p):
        ax = sum(1 for y in els if (y + x) % p in mem)
        e3 += ax ** 3
        shifts += ax
    if e3 != row.E3 or shifts != row.t ** 2:
        raise AssertionError(f"E3 cross-check failed at p={row.p}, t={row.t}")


# ---------------------------------------------------------------------------
# dyadic level profile
# ---------------------------------------------------------------------------


@dataclass
class LevelSetRow:
    p: int
    t: int
    d: float
    i: int
    size: int
    shape_bound: float | None


def level_set_profile(p: int, t: int) -> list[LevelSetRow]:
    """Dyadic bins S_i = {x != 0 : 2^(i-1) d < psi(x) <= 2^i d} for psi the
    subgroup autocorrelation, with threshold d = E2^2 / (2^4 t^3 sqrt(E3)).

    The bins partition the super-threshold support; the reported shape
    column is t^3 log t / (2^(3i) d^3), never asserted.
    """
    fld = make_field(p)
    gamma = subgroup(fld, t)
    counts = autocorrelation_np(gamma.elements, p)
    e2, e3 = _energy_sums(counts)
    d = e2 ** 2 / (2 ** 4 * t ** 3 * math.sqrt(e3))
    psi = counts.tolist()
    above = [x for x in range(1, p) if psi[x] > d]
    rows = []
    i = 1
    remaining = set(above)
    maxpsi = max((psi[x] for x in above), default=0)
    while 2 ** (i - 1) * d < maxpsi:
        members = [x for x in above if 2 ** (i - 1) * d < psi[x] <= 2 ** i * d]
        remaining -= set(members)
        logt = _log2(t) if t > 1 else None
        rows.append(
            LevelSetRow(
                p=p,
                t=t,
                d=d,
                i=i,
                size=len(members),
                shape_bound=(t ** 3 * logt / (2 ** (3 * i) * d ** 3))
                if logt is not None
                else None,
            )
        )
        i += 1
    if remaining:
        raise AssertionError("dyadic bins failed to cover the support")
    if sum(r.size for r in rows) != len(above):
        raise AssertionError("dyadic bins are not a partition")
    return rows


# ---------------------------------------------------------------------------
# iterated-sumset coverage
# ---------------------------------------------------------------------------


@dataclass
class CoverageRow:
    p: int
    t: int
    m: int | None  # smallest m with m*Gamma = F_p, None if cap reached
    covered_by_6: bool
    cap: int


def coverage_scan(p_max: int, cap: int = 12) -> list[CoverageRow]:
    """Smallest m <= cap with the m-fold sumset of each subgroup covering F_p."""
    if p_max > 10 ** 4:
        raise ValueError("scan capped at p <= 10^4")
    rows = []
    for p in primes_up_to(p_max):
        if p == 2:
            continue
        fld = make_field(p)
        for t in divisors(p - 1):
            gamma = subgroup(fld, t)
            ind = _indicator_np(gamma.elements, p)
            cur = ind.astype(bool)
            m_found = None
            if cur.all():
                m_found = 1
            else:
                support = cur.astype(float)
                for m in range(2, cap + 1):
                    support = _support_convolve(support, ind).astype(float)
                    if support.all():
                        m_found = m
                        break
            rows.append(
                CoverageRow(
                    p=p,
                    t=t,
                    m=m_found,
                    covered_by_6=m_found is not None and m_found <= 6,
                    cap=cap,
                )
            )
    rows.sort(key=lambda r: (r.p, r.t))
    return rows


# ---------------------------------------------------------------------------
# expansion scan
# ---------------------------------------------------------------------------


@dataclass
class ExpansionRow:
    p: int
    t: int
    kind: str  # full | singleton | random
    size: int
    sumset: int
    ratio: float | None


def expansion_scan(p: int, t: int, trials: int = 100, seed: int = 1) -> list[ExpansionRow]:
    """|A + Gamma| ratios against |A| t^(5/9) / log^(2/3) t for subsets of
    the subgroup: the full subgroup, a singleton, and random subsets."""
    fld = make_field(p)
    gamma = subgroup(fld, t)
    rng = random.Random(seed)
    els = gamma.elements
    rows = []

    def add(kind: str, a):
        size = len(a)
        s = sumset_size_np(a, els, p)
        logt = _log2(t) if t > 1 else 0.0
        ratio = (s * logt ** (2 / 3) / (size * t ** (5 / 9))) if logt else None
        rows.append(ExpansionRow(p=p, t=t, kind=kind, size=size, sumset=s, ratio=ratio))

    add("full", list(els))
    add("singleton", [els[0]])
    for _ in range(trials):
        a = [x for x in els if rng.random() < rng.uniform(0.1, 0.9)] or [els[0]]
        add("random", a)
    return rows


# ---------------------------------------------------------------------------
# convex sets
# ---------------------------------------------------------------------------


def squares_sequence(n: int) -> list[int]:
    return [(i + 1) ** 2 for i in range(n)]


def perturbed_quadratic(n: int, seed: int = 1) -> list[int]:
    rng = random.Random(seed)
    gaps = []
    g = 1
    for _ in range(n - 1):
        gaps.append(g)
        g += 1 + rng.randrange(0, 3)
    out = [1]
    for g in gaps:
        out.append(out[-1] + g)
    return out


def assert_convex(seq) -> None:
    if any(b <= a for a, b in zip(seq, seq[1:])):
        raise ValueError("sequence must be strictly increasing")
    diffs = [b - a for a, b in zip(seq, seq[1:])]
    if any(d2 <= d1 for d1, d2 in zip(diffs, diffs[1:])):
        raise ValueError("consecutive gaps must strictly increase")


@dataclass
class ConvexScanRow:
    n: int
    E2: int
    E3: int
    ratio_8936: float | None
    ratio_E3: float | None
    andrews_max: float


def convex_scan(
    n_list,
    generator: str = "squares",
    seed: int = 1,
    sample_fraction: float = 0.01,
) -> list[ConvexScanRow]:
    """Exact additive statistics of strictly convex integer sequences,
    embedded wraparound-free into Z/N with N > 4 max(A)."""
    rng = random.Random(seed)
    rows = []
    for n in sorted(set(n_list)):
        if n < 2:
            raise ValueError("need n >= 2")
        seq = squares_sequence(n) if generator == "squares" else perturbed_quadratic(n, seed)
        assert_convex(seq)
        modulus = 4 * max(seq) + 1
        counts = autocorrelation_np(seq, modulus)
        e2, e3 = _energy_sums(counts)
        nz = counts.copy()
        nz[0] = 0
        andrews = float(nz.max()) / n ** (2 / 3)
        logn = _log2(n) if n > 1 else None
        rows.append(
            ConvexScanRow(
                n=n,
                E2=e2,
                E3=e3,
                ratio_8936=(e2 / (n ** (89 / 36) * math.sqrt(logn))) if logn else None,
                ratio_E3=(e3 / (n ** 3 * logn)) if logn else None,
                andrews_max=andrews,
            )
        )
        if rng.random() < sample_fraction or n == max(n_list):
            _crosscheck_convex_row(rows[-1], seq)
    return rows


def _crosscheck_convex_row(row: ConvexScanRow, seq) -> None:
    sums: dict[int, int] = {}
    for a in seq:
        for b in seq:
            sums[a + b] = sums.get(a + b, 0) + 1
    e2 = sum(v * v for v in sums.values())
    mem = set(seq)
    e3 = 0
    diffs = {a - b for a in seq for b in seq}
    for d in diffs:
        ad = sum(1 for y in seq if y + d in mem)
        e3 += ad ** 3
    if e2 != row.E2 or e3 != row.E3:
        raise AssertionError(f"convex cross-check failed at n={row.n}")


# ---------------------------------------------------------------------------
# multiplicative doubling statistics
# ---------------------------------------------------------------------------


@dataclass
class DoublingStatsRow:
    n: int
    prod: int           # |AA|
    shifted_prod: int   # |A(A+a)|
    doubling: float     # |AA| / |A|
    mult_energy: int
    mult_energy_shifted: int
    add_energy: int
    speps_third: int    # |{x != 0 : (A∘A)(x) >= n^(2/3)}|
    speps_quarter: int  # |{x != 0 : (A∘A)(x) >= n^(3/4)}|


def doubling_stats(a, shift: int = 1) -> DoublingStatsRow:
    """Exact product/sum statistics for a finite integer set (0 excluded)."""
    a = sorted(set(int(x) for x in a))
    if not a or 0 in a:
        raise ValueError("need a nonempty integer set avoiding 0")
    n = len(a)
    prods: dict[int, int] = {}
    for x in a:
        for y in a:
            prods[x * y] = prods.get(x * y, 0) + 1
    shifted = [x + shift for x in a]
    sprods: dict[int, int] = {}
    for x in a:
        for y in shifted:
            sprods[x * y] = sprods.get(x * y, 0) + 1
    sums: dict[int, int] = {}
    for x in a:
        for y in a:
            sums[x + y] = sums.get(x + y, 0) + 1
    diffs: dict[int, int] = {}
    for x in a:
        for y in a:
            diffs[x - y] = diffs.get(x - y, 0) + 1
    return DoublingStatsRow(
        n=n,
        prod=len(prods),
        shifted_prod=len(sprods),
        doubling=len(prods) / n,
        mult_energy=sum(v * v for v in prods.values()),
        mult_energy_shifted=sum(v * v for v in sprods.values()),
        add_energy=sum(v * v for v in sums.values()),
        speps_third=sum(1 for d, v in diffs.items() if d and v >= n ** (2 / 3)),
        speps_quarter=sum(1 for d, v in diffs.items() if d and v >= n ** (3 / 4)),
    )


# ---------------------------------------------------------------------------
# progressions inside subgroups
# ---------------------------------------------------------------------------


@dataclass
class ProgressionRow:
    p: int
    t: int
    ap_len: int
    start: int
    step: int
    ratio_sqrt_t: float
    E_P_G: int
    E3_P_G: int
    tmult2: int
    dirichlet_shape: float | None
    vinogradov_shape: float | None


def longest_progression(gamma: MultSubgroup) -> tuple[int, int, int]:
    """Longest arithmetic progression inside the subgroup: (length, start, step).

    Any progression maps to a run of consecutive residues inside a
    multiplicative coset after dividing by its step, so it suffices to scan
    the cosets when there are few of them; tiny subgroups are scanned by
    extending every start/step pair instead.
    """
    p = gamma.field.p
    t = gamma.order
    n = gamma.index
    if t == 1:
        return 1, gamma.elements[0], 1
    if t == p - 1:
        return p - 1, 1, 1
    mem = gamma.element_set
    if t * t * max(4, t // 2) < n * p:
        best = (1, gamma.elements[0], 1)
        for x in gamma.elements:
            for y in gamma.elements:
                if x == y:
                    continue
                d = (y - x) % p
                # extend forward from x; skip non-maximal starts
                if (x - d) % p in mem:
                    continue
                length = 1
                cur = x
                while (cur + d) % p in mem:
                    cur = (cur + d) % p
                    length += 1
                if length > best[0]:
                    best = (length, x, d)
        return best
    root = gamma.field.root
    best = (1, gamma.elements[0], 1)
    for j in range(n):
        xi = pow(root, j, p)
        coset = sorted((xi * e) % p for e in gamma.elements)
        inset = bytearray(p)
        for x in coset:
            inset[x] = 1
        run = 0
        run_start = 0
        for x in range(1, p):
            if inset[x]:
                if run == 0:
                    run_start = x
                run += 1
                if run > best[0]:
                    xi_inv = gamma.field.inv(xi)
                    best = (run, (run_start * xi_inv) % p, xi_inv)
            else:
                run = 0
    return best


def progression_scan(p: int, t: int) -> ProgressionRow:
    """Longest progression inside the subgroup plus its energy statistics."""
    if p > 10 ** 4:
        raise ValueError("exact progression search capped at p <= 10^4")
    fld = make_field(p)
    gamma = subgroup(fld, t)
    length, start, step = longest_progression(gamma)
    prog = [(start + i * step) % p for i in range(length)]
    if any(x not in gamma.element_set for x in prog):
        raise AssertionError("progression search produced a non-member")
    pc = autocorrelation_np(prog, p).astype(np.int64)
    gc = autocorrelation_np(gamma.elements, p).astype(np.int64)
    e_pg = int(np.sum(pc * gc))
    e3_pg = int(np.sum(pc * gc * gc))
    prods: dict[int, int] = {}
    for x in prog:
        for y in prog:
            v = (x * y) % p
            prods[v] = prods.get(v, 0) + 1
    tmult2 = sum(v * v for v in prods.values())
    logp_len = _log2(length) if length > 1 else None
    dirichlet = length ** 2 * (logp_len / 2) ** 2 if logp_len else None
    delta = 1.0 - math.log(t) / math.log(p) if t > 1 else None
    vshape = None
    if delta and 0 < delta < 1:
        exponent = math.sqrt(_log2(p) * _log2(1 / delta) / delta)
        if exponent < 700:  # shape is vacuous once it exceeds float range
            vshape = math.exp(exponent)
    return ProgressionRow(
        p=p,
        t=t,
        ap_len=length,
        start=start,
        step=step,
        ratio_sqrt_t=length / math.sqrt(t),
        E_P_G=e_pg,
        E3_P_G=e3_pg,
        tmult2=tmult2,
        dirichlet_shape=dirichlet,
        vinogradov_shape=vshape,
    )


def progression_batch(p_max: int) -> list[ProgressionRow]:
    rows = []
    for p in primes_up_to(p_max):
        if p == 2:
            continue
        for t in divisors(p - 1):
            rows.append(progression_scan(p, t))
    rows.sort(key=lambda r: (r.p, r.t))
    return rows


# ---------------------------------------------------------------------------
# CSV output
# ---------------------------------------------------------------------------


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def write_csv(path, rows) -> None:
    if not rows:
        raise ValueError("nothing to write")
    names = [f.name for f in fields(rows[0])]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(names)
        for row in rows:
            writer.writerow([_fmt(getattr(row, n)) for n in names])


def rows_to_dicts(rows) -> list[dict]:
    return [asdict(r) for r in rows]
