"""Battery runner: randomized and structured instances for every identity
and inequality check, aggregated into deterministic machine-readable reports.

A failing check halts its suite and serializes the full instance (modulus,
sets, function tables, seed) so the counterexample can be replayed.
Reports are reproducible byte-for-byte from (version, seed): wall-clock
runtime is printed, never serialized.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field

from . import __version__ as _version
from .checks import IneqCheck, _json_number
from .config import TOL
from .energy import (
    check_energy_weight_a,
    check_energy_weight_b,
    check_heart,
    check_heart_triple,
    check_katz_koester,
    check_level_thresholds,
    check_membership_identity,
    check_weight_inequality,
)
from .groups import CyclicGroup, GroupSet
from .spectral import (
    build_restricted_operator,
    check_cycle_sums,
    check_triangle_inequality,
    correlation_kernel,
    eigendecompose,
    first_eigenfunction_bounds,
)
from .subgroup import (
    Character,
    MultSubgroup,
    check_eigenbasis,
    check_exact_fourier,
    check_mu_convolution,
    check_mu_vs_jacobi,
    check_tk_characters,
    check_vinogradov_bounds,
    make_field,
    mu_alpha_direct,
    random_invariant_fn,
    subgroup,
    subgroup_autocorrelation,
)
from .transform import (
    GroupFn,
    check_commutation,
    convolve,
    correlate,
    dft,
    idft,
)


class CheckFailure(Exception):
    def __init__(self, check: IneqCheck):
        super().__init__(f"{check.name}: slack {check.slack}")
        self.check = check


@dataclass
class EqStats:
    trials: int = 0
    failures: int = 0
    worst_slack: float | None = None
    worst: IneqCheck | None = None

    def add(self, check: IneqCheck) -> None:
        self.trials += 1
        if not check.passed:
            self.failures += 1
        s = check.slack_float()
        if self.worst_slack is None or s < self.worst_slack:
            self.worst_slack = s
            self.worst = check


@dataclass
class CheckSuite:
    name: str
    params: dict
    stats: dict[str, EqStats] = field(default_factory=dict)
    halted: str | None = None
    runtime: float = 0.0

    def record(self, check: IneqCheck, instance=None, halt_on_failure: bool = True):
        if not check.passed and instance is not None:
            check = IneqCheck(
                check.name, check.lhs, check.rhs, check.slack, check.tol,
                check.passed, dict(check.detail, **instance),
            )
        self.stats.setdefault(check.name, EqStats()).add(check)
        if not check.passed and halt_on_failure:
            self.halted = check.name
            raise CheckFailure(check)
        return check

    @property
    def n_checks(self) -> int:
        return sum(s.trials for s in self.stats.values())

    @property
    def n_failed(self) -> int:
        return sum(s.failures for s in self.stats.values())

    @property
    def passed(self) -> bool:
        return self.n_failed == 0 and self.halted is None

    @property
    def worst_slack(self) -> float | None:
        vals = [s.worst_slack for s in self.stats.values() if s.worst_slack is not None]
        return min(vals) if vals else None

    def to_obj(self) -> dict:
        rows = []
        for eq in sorted(self.stats):
            st = self.stats[eq]
            w = st.worst
            row = {
                "suite": self.name,
                "eq": eq,
                "trials": st.trials,
                "failures": st.failures,
            }
            if w is not None:
                row.update(
                    {
                        "lhs": _json_number(w.lhs),
                        "rhs": _json_number(w.rhs),
                        "slack": _json_number(w.slack),
                        "pass": w.passed,
                    }
                )
                if w.detail:
                    row["instance"] = w.detail
            rows.append(row)
        return {
            "name": self.name,
            "params": self.params,
            "checks": self.n_checks,
            "failed": self.n_failed,
            "pass": self.passed,
            "halted_at": self.halted,
            "worst_slack": self.worst_slack,
            "rows": rows,
        }


@dataclass
class Report:
    suites: list[CheckSuite]

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.suites)

    def to_json(self) -> str:
        obj = {
            "version": _version,
            "pass": self.passed,
            "suites": [s.to_obj() for s in self.suites],
        }
        return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# instance generators
# ---------------------------------------------------------------------------


def random_subset(rng: random.Random, group: CyclicGroup, density: float) -> GroupSet:
    while True:
        mem = [x for x in group.elements() if rng.random() < density]
        if mem:
            return GroupSet.of(group, mem)


def random_int_fn(rng: random.Random, group: CyclicGroup, lo=-3, hi=3) -> GroupFn:
    return GroupFn(group, tuple(rng.randint(lo, hi) for _ in group.elements()))


def random_complex_fn(rng: random.Random, group: CyclicGroup) -> GroupFn:
    return GroupFn(
        group,
        tuple(
            complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in group.elements()
        ),
    )


def additive_subgroups(group: CyclicGroup) -> list[GroupSet]:
    n = group.modulus
    out = []
    for d in range(1, n + 1):
        if n % d == 0:
            out.append(GroupSet.of(group, range(0, n, d)))
    return out


def arithmetic_progression(group: CyclicGroup, start: int, step: int, length: int) -> GroupSet:
    return GroupSet.of(group, ((start + i * step) % group.modulus for i in range(length)))


def _fn_payload(f: GroupFn):
    if f.kind == "int":
        return list(f.values)
    return [[complex(v).real, complex(v).imag] for v in f.values]


# ---------------------------------------------------------------------------
# identity suite
# ---------------------------------------------------------------------------

_IDENTITY_SIZES = (5, 7, 16)


def _rel_err(approx, exact) -> float:
    return abs(approx - exact) / max(1.0, abs(exact))


def run_identity_suite(seed: int = 1, trials: int = 200) -> CheckSuite:
    """Exact identities: Fourier, convolution, generalized convolution,
    shift-duality. Integer paths must round exactly; complex paths meet
    the relative tolerance."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    suite = CheckSuite("identities", {"seed": seed, "trials": trials})
    rng = random.Random(seed)
    t0 = time.monotonic()
    try:
        for trial in range(trials):
            n = _IDENTITY_SIZES[trial % len(_IDENTITY_SIZES)]
            group = CyclicGroup(n)
            inst = {"N": n, "trial": trial, "seed": seed}

            # Parseval: N sum |f|^2 = sum |f^|^2, exact for integer f
            fi = random_int_fn(rng, group)
            fc = random_complex_fn(rng, group)
            for f, label in ((fi, "int"), (fc, "complex")):
                fourier_side = sum(abs(v) ** 2 for v in dft(f).values)
                exact = n * sum(abs(v) ** 2 for v in f.values)
                err = _rel_err(fourier_side, exact)
                if label == "int" and round(fourier_side) != exact:
                    err = 1.0
                suite.record(
                    IneqCheck.from_identity(
                        f"parseval-{label}", err,
                        TOL.dft_rel if label == "complex" else TOL.dft_rel,
                    ),
                    {**inst, "f": _fn_payload(f)},
                )

            # convolution energy identity:
            # N sum_y |(f*g)(y)|^2 = sum |f^|^2 |g^|^2
            gi = random_int_fn(rng, group)
            conv = convolve(fi, gi)
            spatial = n * sum(v * v for v in conv.values)
            fh, gh = dft(fi).values, dft(gi).values
            fourier_side = sum(abs(a) ** 2 * abs(b) ** 2 for a, b in zip(fh, gh))
            err = _rel_err(fourier_side, spatial)
            if round(fourier_side) != spatial:
                err = max(err, 1.0)
            suite.record(
                IneqCheck.from_identity("convolution-energy", err, TOL.dft_rel),
                {**inst, "f": _fn_payload(fi), "g": _fn_payload(gi)},
            )

            # inversion round trip
            back = idft(dft(fc))
            err = max(
                abs(a - b) for a, b in zip(back.values, fc.values)
            ) / max(1.0, max(abs(v) for v in fc.values))
            suite.record(
                IneqCheck.from_identity("inverse-roundtrip", err, TOL.dft_rel),
                {**inst, "f": _fn_payload(fc)},
            )

            # transform of * and ∘
            fh = dft(fi).values
            gh = dft(gi).values
            ch = dft(convolve(fi, gi)).values
            err1 = max(abs(c - a * b) for c, a, b in zip(ch, fh, gh))
            oh = dft(correlate(fi, gi)).values
            fbar_h = dft(fi.conjugate()).values
            err2 = max(
                abs(o - a.conjugate() * b) for o, a, b in zip(oh, fbar_h, gh)
            )
            scale = max(1.0, max(abs(v) for v in ch), max(abs(v) for v in oh))
            suite.record(
                IneqCheck.from_identity(
                    "product-formula", max(err1, err2) / scale, TOL.complex_rel
                ),
                {**inst, "f": _fn_payload(fi), "g": _fn_payload(gi)},
            )

            # nested convolution swap
            l, k = rng.choice(((2, 2), (2, 3), (3, 2), (3, 3))) if n <= 7 else (2, 2)
            rows = [[random_int_fn(rng, group, -2, 2) for _ in range(k)] for _ in range(l)]
            suite.record(
                check_commutation(rows, rng, samples=24),
                {**inst, "l": l, "k": k,
                 "rows": [[_fn_payload(f) for f in r] for r in rows]},
            )

            # scalar product
            l = rng.choice((2, 3))
            fs = [random_int_fn(rng, group, -2, 2) for _ in range(l)]
            gs = [random_int_fn(rng, group, -2, 2) for _ in range(l)]
            suite.record(
                IneqCheck.from_identity(
                    "scalar-product", _scalar_product_discrepancy(fs, gs)
                ),
                {**inst, "fs": [_fn_payload(f) for f in fs],
                 "gs": [_fn_payload(f) for f in gs]},
            )

            # multi-scalar product
            l, k = rng.choice(((2, 2), (2, 3), (3, 2)))
            fs = [random_int_fn(rng, group, -2, 2) for _ in range(k)]
            suite.record(
                IneqCheck.from_identity(
                    "multi-scalar-product", _multi_scalar_discrepancy(fs, l)
                ),
                {**inst, "l": l, "fs": [_fn_payload(f) for f in fs]},
            )

            # power-sum form
            l = rng.choice((2, 3))
            fs = [random_int_fn(rng, group, -2, 2) for _ in range(3)]
            suite.record(
                IneqCheck.from_identity(
                    "correlation-power-sum", _conv_power_discrepancy(fs, l)
                ),
                {**inst, "l": l, "fs": [_fn_payload(f) for f in fs]},
            )

            # shift duality + total energy identity
            a = random_subset(rng, group, rng.uniform(0.2, 0.8))
            b = random_subset(rng, group, rng.uniform(0.2, 0.8))
            k, lsh = ((1, 1) if n == 16 else rng.choice(((1, 1), (1, 2), (2, 1))))
            for c in check_membership_identity(a, b, k, lsh):
                suite.record(
                    c, {**inst, "A": list(a.members), "B": list(b.members)}
                )
    except CheckFailure:
        pass
    suite.runtime = time.monotonic() - t0
    return suite


def _scalar_product_discrepancy(fs, gs) -> int:
    from .transform import gen_convolution

    group = fs[0].group
    n = group.modulus
    tf = gen_convolution(fs)
    tg = gen_convolution(gs)
    lhs = sum(
        tf.flat[i] * tg.flat[i] for i in range(len(tf.flat))
    )
    pairs = [correlate(f, g).values for f, g in zip(fs, gs)]
    rhs = sum(
        _prod(p[z] for p in pairs) for z in range(n)
    )
    return abs(lhs - rhs)


def _prod(it):
    out = 1
    for v in it:
        out *= v
    return out


def _multi_scalar_discrepancy(fs, l: int) -> int:
    from .transform import gen_convolution

    group = fs[0].group
    n = group.modulus
    tables = [gen_convolution([f] * l) for f in fs]
    lhs = sum(
        _prod(t.flat[i] for t in tables) for i in range(n ** (l - 1))
    )
    cross = gen_convolution(fs)
    rhs = sum(v ** l for v in cross.flat)
    return abs(lhs - rhs)


def _conv_power_discrepancy(fs, l: int) -> int:
    """sum_x C_l(f0)(x) (C_l(f1) ∘ C_l(f2))(x) = sum_z (f0∘(f1∘f2))^l(z)."""
    from .transform import correlate_many, gen_convolution

    group = fs[0].group
    n = group.modulus
    t0, t1, t2 = (gen_convolution([f] * l) for f in fs)
    if l == 2:
        mid = correlate(
            GroupFn(group, t1.flat), GroupFn(group, t2.flat)
        ).values
        lhs = sum(t0.flat[x] * mid[x] for x in range(n))
    else:
        lhs = 0
        for x1 in range(n):
            for x2 in range(n):
                acc = 0
                for y1 in range(n):
                    for y2 in range(n):
                        acc += t1((y1, y2)[0], (y1, y2)[1]) * t2(
                            (y1 + x1) % n, (y2 + x2) % n
                        )
                lhs += t0(x1, x2) * acc
    rhs = sum(v ** l for v in correlate_many(fs).values)
    return abs(lhs - rhs)


# ---------------------------------------------------------------------------
# inequality suite
# ---------------------------------------------------------------------------


def run_inequality_suite(
    seed: int = 1, trials: int = 1000, modulus: int = 32, spectral_every: int = 20
) -> CheckSuite:
    """Shifted-intersection and kernel inequalities on random subsets plus
    additive-subgroup equality cases (those must have exactly zero slack on
    every exact-arithmetic check)."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    suite = CheckSuite(
        "inequalities", {"seed": seed, "trials": trials, "modulus": modulus}
    )
    rng = random.Random(seed)
    group = CyclicGroup(modulus)
    t0 = time.monotonic()
    densities = [0.1 + 0.8 * i / 8 for i in range(9)]
    try:
        for idx, a in enumerate(additive_subgroups(group)):
            _inequality_instance(
                suite, rng, a, idx, spectral=True, equality_case=True
            )
        for trial in range(trials):
            a = random_subset(rng, group, densities[trial % len(densities)])
            _inequality_instance(
                suite, rng, a, trial, spectral=(trial % spectral_every == 0)
            )
    except CheckFailure:
        pass
    suite.runtime = time.monotonic() - t0
    return suite


def _inequality_instance(
    suite: CheckSuite,
    rng: random.Random,
    a: GroupSet,
    trial: int,
    spectral: bool = False,
    equality_case: bool = False,
) -> None:
    group = a.group
    inst = {"N": group.modulus, "A": list(a.members), "trial": trial,
            "equality_case": equality_case}

    for sign in "+-":
        heart = suite.record(check_heart(a, sign), inst)
        kk = check_katz_koester(a, sign)
        worst = min(kk, key=lambda c: c.slack_float())
        suite.record(worst, inst)
        if equality_case:
            _record_zero_slack(suite, heart, inst)
            _record_zero_slack(suite, worst, inst)
    triple = suite.record(check_heart_triple(a), inst)
    if equality_case:
        _record_zero_slack(suite, triple, inst)

    q = random_int_fn(rng, group, -3, 3)
    for k in (1, 2):
        for sign in "+-":
            suite.record(
                check_weight_inequality(a, a, _flat_weight(q, group, k), k, 1, sign),
                {**inst, "q": list(q.values), "k": k},
            )
    for sign in "+-":
        wa = suite.record(check_energy_weight_a(a, None, 1, 1, sign), inst)
        wb = suite.record(check_energy_weight_b(a, None, 1, 1, sign), inst)
        if equality_case:
            _record_zero_slack(suite, wa, inst)
            _record_zero_slack(suite, wb, inst)
        for c in check_level_thresholds(a, sign):
            suite.record(c, inst)

    h = GroupFn(
        group,
        tuple(1 if rng.random() < 0.5 else 0 for _ in group.elements()),
    )
    if not any(h.values):
        h = GroupFn.delta(group, 0)
    suite.record(check_triangle_inequality(a, h), {**inst, "h": list(h.values)})
    spectrum = None
    if spectral:
        spectrum = eigendecompose(build_restricted_operator(a, correlation_kernel(h)))
    for k in (3, 4, 5):
        for c in check_cycle_sums(a, h, k, spectrum):
            suite.record(c, {**inst, "h": list(h.values)})
    report = first_eigenfunction_bounds(a, h)
    for c in report.checks:
        suite.record(c, {**inst, "h": list(h.values)})


def _record_zero_slack(suite: CheckSuite, check: IneqCheck, inst) -> None:
    """Equality-case instances of exact checks must land exactly on the bound."""
    suite.record(
        IneqCheck.from_identity(check.name + "-equality", check.slack_float()),
        inst,
    )


def _flat_weight(q: GroupFn, group: CyclicGroup, k: int):
    if k == 1:
        return q
    n = group.modulus
    return [q.values[x1] * q.values[x2] for x1 in range(n) for x2 in range(n)]


# ---------------------------------------------------------------------------
# subgroup suite
# ---------------------------------------------------------------------------


def run_subgroup_suite(p_list, seed: int = 1, tk_order_cap: int = 12) -> CheckSuite:
    """Spectral and character checks for every subgroup of every listed prime."""
    p_list = list(p_list)
    if not p_list:
        raise ValueError("p_list must be nonempty")
    if any(p > 10 ** 4 for p in p_list):
        raise ValueError("suite primes capped at 10^4")
    suite = CheckSuite("subgroups", {"p": p_list, "seed": seed})
    rng = random.Random(seed)
    t0 = time.monotonic()
    try:
        for p in p_list:
            fld = make_field(p)
            for t in sorted(d for d in range(1, p) if (p - 1) % d == 0):
                gamma = subgroup(fld, t)
                inst = {"p": p, "t": t}
                g = subgroup_autocorrelation(gamma)

                if (p, t) == (7, 3):
                    _golden_instance(suite, gamma, g, inst)

                suite.record(check_eigenbasis(gamma, g), inst)
                suite.record(check_mu_vs_jacobi(gamma, g), inst)
                _mu_trace_checks(suite, gamma, g, inst)

                h = random_invariant_fn(gamma, rng, 0, 3)
                for c in check_mu_convolution(gamma, g, h):
                    suite.record(c, inst)
                # symmetrize: invariant but not even kernels have no
                # symmetric restricted matrix unless -1 is in the subgroup
                p_mod = fld.group.modulus
                h_even = GroupFn(
                    fld.group,
                    tuple(
                        h.values[x] + h.values[(-x) % p_mod] for x in range(p_mod)
                    ),
                )
                suite.record(check_mu_vs_jacobi(gamma, h_even), inst)

                if t > 1:
                    xi = _nonresidue(gamma, rng)
                    suite.record(check_eigenbasis(gamma, g, coset=xi), {**inst, "xi": xi})

                suite.record(_orthonormality_check(gamma), inst)

                if t <= tk_order_cap:
                    f = GroupFn(
                        fld.group,
                        tuple(
                            1 if (x in gamma.element_set and rng.random() < 0.7) else 0
                            for x in range(p)
                        ),
                    )
                    if any(f.values):
                        for k in (2, 3):
                            for c in check_tk_characters(gamma, f, k):
                                suite.record(c, {**inst, "f": list(f.values)})

                asub = GroupSet.of(
                    fld.group,
                    [x for x in gamma.elements if rng.random() < 0.6] or [gamma.elements[0]],
                )
                for c in check_vinogradov_bounds(gamma, asub):
                    suite.record(c, {**inst, "A": list(asub.members)})

                u = GroupFn(
                    fld.group,
                    tuple(
                        complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
                        if x in gamma.element_set
                        else 0j
                        for x in range(p)
                    ),
                )
                fam = [GroupFn.constant(fld.group, 1), g, random_invariant_fn(gamma, rng, 0, 2)]
                lam = rng.randrange(p)
                for c in check_exact_fourier(gamma, u, lam, fam):
                    suite.record(c, {**inst, "lambda": lam})
    except CheckFailure:
        pass
    suite.runtime = time.monotonic() - t0
    return suite


def _golden_instance(suite, gamma, g, inst) -> None:
    from .energy import energy, energy_k

    gs = gamma.as_set
    suite.record(
        IneqCheck.from_identity("golden-energy", energy(gs) - 15), inst
    )
    suite.record(
        IneqCheck.from_identity("golden-energy-3", energy_k(gs, k=3) - 33), inst
    )
    mus = sorted(m.real for m in mu_alpha_direct(gamma, g).values)
    err = max(abs(a - b) for a, b in zip(mus, [2.0, 2.0, 5.0]))
    suite.record(IneqCheck.from_identity("golden-mu", err, TOL.spectrum_rel), inst)
    eigs = sorted(eigendecompose(build_restricted_operator(gs, g)).eigenvalues)
    err = max(abs(a - b) for a, b in zip(eigs, [2.0, 2.0, 5.0]))
    suite.record(IneqCheck.from_identity("golden-spectrum", err, TOL.spectrum_rel), inst)
    from .spectral import triangle_sum

    suite.record(
        IneqCheck.from_identity("golden-triangle", triangle_sum(gs, g) - 141), inst
    )


def _mu_trace_checks(suite, gamma, g, inst) -> None:
    mus = mu_alpha_direct(gamma, g).values
    t = gamma.order
    p = gamma.field.p
    from .energy import correlation_counts

    gg = correlation_counts(gamma.as_set, gamma.as_set)
    tr_exact = t * g.values[0]
    trsq_exact = sum(g.values[z] ** 2 * gg[z] for z in range(p))
    s1 = sum(m.real for m in mus)
    s2 = sum(abs(m) ** 2 for m in mus)
    ok1 = round(s1) == tr_exact and abs(s1 - tr_exact) <= TOL.spectrum_rel * max(1, tr_exact)
    ok2 = round(s2) == trsq_exact and abs(s2 - trsq_exact) <= TOL.spectrum_rel * max(1, trsq_exact)
    suite.record(
        IneqCheck.from_identity("mu-trace-int", 0 if ok1 else abs(s1 - tr_exact)), inst
    )
    suite.record(
        IneqCheck.from_identity("mu-trace-square-int", 0 if ok2 else abs(s2 - trsq_exact)),
        inst,
    )


def _orthonormality_check(gamma: MultSubgroup) -> IneqCheck:
    t = gamma.order
    chis = [Character(gamma, a).values.values for a in range(t)]
    worst = 0.0
    for a in range(t):
        for b in range(t):
            ip = sum(
                chis[a][x] * chis[b][x].conjugate() for x in gamma.elements
            )
            worst = max(worst, abs(ip - (1 if a == b else 0)))
    return IneqCheck.from_identity("character-orthonormality", worst, TOL.ortho)


def _nonresidue(gamma: MultSubgroup, rng: random.Random) -> int:
    p = gamma.field.p
    for _ in range(64):
        xi = rng.randrange(1, p)
        if xi not in gamma.element_set:
            return xi
    return 1


def run_all(
    seed: int = 1,
    identity_trials: int = 200,
    inequality_trials: int = 1000,
    p_list=(7, 13, 31, 101),
) -> Report:
    return Report(
        [
            run_identity_suite(seed, identity_trials),
            run_inequality_suite(seed, inequality_trials),
            run_subgroup_suite(p_list, seed),
        ]
    )
