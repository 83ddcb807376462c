"""Multiplicative subgroups of F_p*: characters, closed-form eigenvalues,
multiplicative energies, and invariant-set utilities.

Only prime fields are implemented; the additive structure of F_p is the
cyclic group Z/p from ``groups``, so every additive tool applies directly.
"""

from __future__ import annotations

import cmath
import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .checks import IneqCheck
from .config import MULT_ENERGY_CAP, TOL
from .energy import correlation_counts, energy_k
from .groups import CyclicGroup, GroupSet
from .spectral import build_restricted_operator, jacobi_eigh
from .transform import GroupFn


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class PrimeField:
    """F_p with a fixed primitive root and a full discrete-log table."""

    p: int
    root: int
    dlog: tuple[int, ...]  # dlog[x] for x in 1..p-1, offset by 1

    @cached_property
    def group(self) -> CyclicGroup:
        return CyclicGroup(self.p)

    def log(self, x: int) -> int:
        x %= self.p
        if x == 0:
            raise ValueError("0 has no discrete logarithm")
        return self.dlog[x - 1]

    @cached_property
    def inverse_table(self) -> tuple[int, ...]:
        return (0,) + tuple(pow(x, self.p - 2, self.p) for x in range(1, self.p))

    def inv(self, x: int) -> int:
        x %= self.p
        if x == 0:
            raise ZeroDivisionError("0 is not invertible")
        return self.inverse_table[x]


def primitive_root(p: int) -> int:
    if p == 2:
        return 1
    qs = _prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    raise ArithmeticError(f"no primitive root found for {p}")


def make_field(p: int, root: int | None = None) -> PrimeField:
    if p > 10 ** 6:
        raise ValueError("field size capped at 10^6")
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    g = primitive_root(p) if root is None else root
    dlog = [0] * (p - 1)
    acc = 1
    for k in range(p - 1):
        dlog[acc - 1] = k
        acc = (acc * g) % p
    if acc != 1:
        raise ValueError(f"{g} is not a primitive root mod {p}")
    # reject non-generators passed explicitly (table would have collisions)
    if root is not None and len({pow(g, k, p) for k in range(p - 1)}) != p - 1:
        raise ValueError(f"{g} is not a primitive root mod {p}")
    return PrimeField(p, g, tuple(dlog))


@dataclass(frozen=True)
class MultSubgroup:
    field: PrimeField
    order: int  # t

    def __post_init__(self) -> None:
        if self.order < 1 or (self.field.p - 1) % self.order != 0:
            raise ValueError("order must divide p - 1")

    @property
    def index(self) -> int:
        return (self.field.p - 1) // self.order

    @cached_property
    def elements(self) -> tuple[int, ...]:
        p, n = self.field.p, self.index
        return tuple(sorted(pow(self.field.root, n * l, p) for l in range(self.order)))

    @cached_property
    def element_set(self) -> frozenset[int]:
        return frozenset(self.elements)

    @cached_property
    def as_set(self) -> GroupSet:
        return GroupSet.of(self.field.group, self.elements)

    def char_index(self, x: int) -> int:
        """l with x = g^(n l), for x in the subgroup."""
        return self.field.log(x) // self.index

    def __len__(self) -> int:
        return self.order


def subgroup(field: PrimeField, t: int) -> MultSubgroup:
    return MultSubgroup(field, t)


@dataclass(frozen=True)
class Character:
    """chi_alpha: t^(-1/2) e(alpha l / t) on the subgroup, 0 elsewhere."""

    gamma: MultSubgroup
    alpha: int

    @cached_property
    def values(self) -> GroupFn:
        p = self.gamma.field.p
        t = self.gamma.order
        vals = [0j] * p
        scale = 1.0 / math.sqrt(t)
        for x in self.gamma.elements:
            l = self.gamma.char_index(x)
            vals[x] = scale * cmath.exp(2j * math.pi * self.alpha * l / t)
        return GroupFn(self.gamma.field.group, tuple(vals))

    def __call__(self, x: int) -> complex:
        return self.values.values[x % self.gamma.field.p]


def characters(gamma: MultSubgroup) -> list[Character]:
    return [Character(gamma, a) for a in range(gamma.order)]


# ---------------------------------------------------------------------------
# invariance utilities
# ---------------------------------------------------------------------------


def gamma_invariant_set(gamma: MultSubgroup, s: GroupSet) -> bool:
    """Is S fixed by multiplication with every subgroup element? (0 is fixed)."""
    p = gamma.field.p
    if s.group.modulus != p:
        raise ValueError("set lives on the wrong modulus")
    mem = s.member_set
    for x in s.members:
        if x == 0:
            continue
        for g in gamma.elements:
            if (x * g) % p not in mem:
                return False
    return True


def orbit_closure(gamma: MultSubgroup, s: GroupSet) -> GroupSet:
    """Smallest invariant superset: union of the orbits x * Gamma."""
    p = gamma.field.p
    out = set()
    for x in s.members:
        if x == 0:
            out.add(0)
        else:
            out.update((x * g) % p for g in gamma.elements)
    return GroupSet.of(gamma.field.group, out)


def gamma_invariant_fn(gamma: MultSubgroup, f: GroupFn, tol: float = 0.0) -> bool:
    p = gamma.field.p
    for x in range(1, p):
        base = f.values[x]
        for g in gamma.elements:
            if abs(f.values[(x * g) % p] - base) > tol:
                return False
    return True


def invariant_profile(gamma: MultSubgroup, f: GroupFn):
    """Compact storage of an invariant function: value at 0 plus one value
    per multiplicative coset, keyed by coset representative g^j, j < index."""
    p, n = gamma.field.p, gamma.index
    reps = [pow(gamma.field.root, j, p) for j in range(n)]
    return f.values[0], {r: f.values[r] for r in reps}


def fn_from_profile(gamma: MultSubgroup, zero_value, rep_values: dict) -> GroupFn:
    p, n = gamma.field.p, gamma.index
    vals = [zero_value] + [None] * (p - 1)
    for r, v in rep_values.items():
        for g in gamma.elements:
            vals[(r * g) % p] = v
    if any(v is None for v in vals):
        raise ValueError("profile does not cover every coset")
    return GroupFn(gamma.field.group, tuple(vals))


def random_invariant_fn(
    gamma: MultSubgroup, rng: random.Random, lo: int = 0, hi: int = 3
) -> GroupFn:
    p, n = gamma.field.p, gamma.index
    while True:
        reps = {pow(gamma.field.root, j, p): rng.randint(lo, hi) for j in range(n)}
        if any(reps.values()) or (lo <= 0 <= hi and n == 0):
            break
    return fn_from_profile(gamma, rng.randint(lo, hi), reps)


def subgroup_autocorrelation(gamma: MultSubgroup) -> GroupFn:
    """(Gamma ∘ Gamma) as an integer function on Z/p (always invariant)."""
    return GroupFn(gamma.field.group, correlation_counts(gamma.as_set, gamma.as_set))


# ---------------------------------------------------------------------------
# closed-form eigenvalues
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MuTable:
    gamma: MultSubgroup
    kernel: GroupFn
    values: tuple  # mu_alpha for alpha in [t]

    def __len__(self) -> int:
        return self.gamma.order


def mu_alpha_direct(gamma: MultSubgroup, g: GroupFn) -> MuTable:
    """mu_alpha(g) = sqrt(t) sum_x g(x) chi_alpha(1 - x) for invariant g."""
    if not gamma_invariant_fn(gamma, g, tol=0.0 if g.kind == "int" else 1e-12):
        raise ValueError("kernel must be invariant under the subgroup")
    p, t = gamma.field.p, gamma.order
    supp = [(x, g.values[x]) for x in range(p) if g.values[x]]
    out = []
    for alpha in range(t):
        chi = Character(gamma, alpha).values.values
        mu = math.sqrt(t) * sum(v * chi[(1 - x) % p] for x, v in supp)
        out.append(mu)
    return MuTable(gamma, g, tuple(out))


def check_eigenbasis(
    gamma: MultSubgroup, g: GroupFn, coset: int | None = None
) -> IneqCheck:
    """Characters are eigenvectors of the restricted kernel matrix.

    With ``coset`` set to xi, checks the translated characters
    chi_alpha(xi^-1 x) on the coset xi * Gamma; differences inside the
    coset are xi times differences inside the subgroup, so the matching
    eigenvalues come from the dilated kernel z -> g(xi z).
    """
    p, t = gamma.field.p, gamma.order
    if coset is None:
        base = list(gamma.elements)
        translate = lambda x: x
        mus = mu_alpha_direct(gamma, g).values
    else:
        xi_inv = gamma.field.inv(coset)
        base = sorted((coset * e) % p for e in gamma.elements)
        translate = lambda x: (xi_inv * x) % p
        dilated = GroupFn(
            gamma.field.group,
            tuple(g.values[(coset * z) % p] for z in range(p)),
        )
        mus = mu_alpha_direct(gamma, dilated).values
    worst = 0.0
    for alpha in range(t):
        chi = Character(gamma, alpha).values.values
        vec = [chi[translate(x)] for x in base]
        for i, x in enumerate(base):
            acc = sum(g.values[(x - y) % p] * vec[j] for j, y in enumerate(base))
            worst = max(worst, abs(acc - mus[alpha] * vec[i]))
    return IneqCheck.from_identity(
        "subgroup-eigenbasis" + ("" if coset is None else "-coset"),
        worst,
        TOL.eig_residual,
    )


def jacobi_spectrum(gamma: MultSubgroup, g: GroupFn) -> tuple[float, ...]:
    op = build_restricted_operator(gamma.as_set, g)
    if not op.symmetric:
        raise ValueError("kernel must be real and even for Jacobi comparison")
    eigs, _, _ = jacobi_eigh(op.matrix)
    return tuple(float(v) for v in eigs)


def check_mu_vs_jacobi(gamma: MultSubgroup, g: GroupFn) -> IneqCheck:
    """{mu_alpha} equals the Jacobi spectrum as a multiset."""
    mus = sorted((m.real for m in mu_alpha_direct(gamma, g).values), reverse=True)
    eigs = jacobi_spectrum(gamma, g)
    scale = max(1.0, max((abs(v) for v in eigs), default=0.0))
    worst = max(
        (abs(m - e) for m, e in zip(mus, eigs)), default=0.0
    )
    return IneqCheck.from_identity(
        "mu-vs-jacobi", worst / scale, TOL.spectrum_rel
    )


def check_mu_convolution(gamma: MultSubgroup, g: GroupFn, h: GroupFn) -> list[IneqCheck]:
    """Product rule and power rule for the closed-form eigenvalues.

    mu_alpha(conj(g) h) = t^-1 sum_beta conj(mu_beta(g)) mu_(alpha+beta)(h),
    and mu_alpha(g^l) = t^-(l-1) (mu *_(l-1) mu)(alpha) for l in {2, 3}.
    """
    t = gamma.order
    mug = mu_alpha_direct(gamma, g).values
    muh = mu_alpha_direct(gamma, h).values
    gh = GroupFn(
        gamma.field.group,
        tuple(
            (gv.conjugate() if isinstance(gv, complex) else gv) * hv
            for gv, hv in zip(g.values, h.values)
        ),
    )
    mugh = mu_alpha_direct(gamma, gh).values
    worst = 0.0
    scale = max(1.0, max(abs(v) for v in mugh))
    for a in range(t):
        rhs = sum(
            complex(mug[b]).conjugate() * muh[(a + b) % t] for b in range(t)
        ) / t
        worst = max(worst, abs(mugh[a] - rhs))
    out = [
        IneqCheck.from_identity(
            "eigenvalue-product-rule", worst / scale, TOL.spectrum_rel
        )
    ]
    if g.kind == "int" or all(not isinstance(v, complex) for v in g.values):
        mu = [complex(v) for v in mug]
        cur = list(mu)
        for l in (2, 3):
            nxt = [
                sum(cur[b] * mu[(a - b) % t] for b in range(t)) / t for a in range(t)
            ]
            gl = g.power(l)
            mugl = mu_alpha_direct(gamma, gl).values
            sc = max(1.0, max(abs(v) for v in mugl))
            w = max(abs(mugl[a] - nxt[a]) for a in range(t))
            out.append(
                IneqCheck.from_identity(
                    f"eigenvalue-power-rule-l{l}", w / sc, TOL.spectrum_rel
                )
            )
            cur = nxt
    return out


# ---------------------------------------------------------------------------
# restricted Fourier bound
# ---------------------------------------------------------------------------


def check_exact_fourier(
    gamma: MultSubgroup,
    u: GroupFn,
    lam: int,
    h_family: list[GroupFn],
    v: GroupFn | None = None,
) -> list[IneqCheck]:
    """|u^(lam)|^2 <= t^2 * (sum |h^|^2 |u^(.+lam)|^2) / (sum |h^|^2 |G^|^2)
    for every invariant h, with equality at h = 1; plus the three-point
    variant weighted by a nonnegative v.
    """
    from .transform import dft

    p, t = gamma.field.p, gamma.order
    if any(u.values[x] and x not in gamma.element_set for x in range(p)):
        raise ValueError("u must be supported on the subgroup")
    if not any(
        len({complex(v) for v in h.values}) == 1 and complex(h.values[0]) != 0
        for h in h_family
    ):
        raise ValueError("family must contain a nonzero constant weight")
    uh = dft(u).values
    ghat = dft(GroupFn(gamma.field.group, tuple(
        1 if x in gamma.element_set else 0 for x in range(p)
    ))).values
    target = abs(uh[lam % p]) ** 2
    out = []
    for idx, h in enumerate(h_family):
        if not gamma_invariant_fn(gamma, h, tol=1e-12):
            raise ValueError("family members must be invariant")
        hh = dft(h).values
        num = sum(abs(hh[x]) ** 2 * abs(uh[(x + lam) % p]) ** 2 for x in range(p))
        den = sum(abs(hh[x]) ** 2 * abs(ghat[x]) ** 2 for x in range(p))
        if den == 0:
            # degenerate family member: no bound is claimed, flag and move on
            out.append(
                IneqCheck(
                    f"restricted-fourier-bound-h{idx}", target, 0.0, 0.0, 0.0,
                    True, {"zero_denominator": True},
                )
            )
            continue
        bound = t * t * num / den
        is_const = len({complex(x) for x in h.values}) == 1 and complex(h.values[0]) != 0
        if is_const:
            scale = max(1.0, bound)
            out.append(
                IneqCheck.from_identity(
                    f"restricted-fourier-equality-h{idx}",
                    abs(target - bound) / scale,
                    TOL.complex_rel,
                )
            )
        else:
            out.append(
                IneqCheck.from_le(
                    f"restricted-fourier-bound-h{idx}",
                    target,
                    bound,
                    TOL.complex_rel * max(1.0, bound),
                )
            )
    if v is not None:
        out.extend(_check_exact_fourier_c3(gamma, u, h_family, v))
    return out


def _check_exact_fourier_c3(
    gamma: MultSubgroup, u: GroupFn, h_family: list[GroupFn], v: GroupFn
) -> list[IneqCheck]:
    p = gamma.field.p
    t = gamma.order
    if any(float(x) < 0 for x in v.values):
        raise ValueError("v must be nonnegative")
    mem = gamma.elements
    uv = u.values
    vv = v.values
    table = {}
    for x in mem:
        for y in mem:
            acc = 0j
            for z in range(p):
                w = vv[z]
                if w:
                    acc += w * uv[(z + x) % p] * complex(uv[(z + y) % p]).conjugate()
            table[(x, y)] = acc
    lhs = sum(table.values()).real
    gg = correlation_counts(gamma.as_set, gamma.as_set)
    out = []
    for idx, h in enumerate(h_family):
        # (h ∘ conj(h))(x) = sum_y h(y) conj(h(y+x))
        hv = h.values
        hcorr = [
            sum(hv[y] * complex(hv[(y + x) % p]).conjugate() for y in range(p))
            for x in range(p)
        ]
        e_h = sum(hcorr[x].real * gg[x] for x in range(p))
        if e_h == 0:
            continue
        s = sum(hcorr[(x - y) % p] * table[(x, y)] for x in mem for y in mem).real
        bound = t * t * s / e_h
        is_const = len({complex(x) for x in h.values}) == 1 and complex(h.values[0]) != 0
        name = f"restricted-fourier-c3-h{idx}"
        if is_const:
            out.append(
                IneqCheck.from_identity(
                    name + "-equality",
                    abs(lhs - bound) / max(1.0, abs(bound)),
                    TOL.complex_rel,
                )
            )
        else:
            out.append(
                IneqCheck.from_le(name, lhs, bound, TOL.complex_rel * max(1.0, abs(bound)))
            )
    return out


# ---------------------------------------------------------------------------
# multiplicative energies
# ---------------------------------------------------------------------------


def mult_energy_k(gamma: MultSubgroup, f: GroupFn, k: int):
    """T^x_k(f): direct enumeration of x_1...x_k = x'_1...x'_k in F_p*.

    Exact integer count for integer f; complex values are accumulated
    exactly over products and conjugates.
    """
    if k not in (2, 3):
        raise ValueError("k must be 2 or 3")
    p = gamma.field.p
    supp = [x for x in range(1, p) if f.values[x]]
    if any(f.values[x] and x not in gamma.element_set for x in range(p)):
        raise ValueError("f must be supported on the subgroup")
    if len(supp) ** (2 * k - 1) > MULT_ENERGY_CAP:
        raise ValueError("enumeration cap exceeded")
    fv = f.values
    inv = gamma.field.inverse_table
    total = 0
    if f.kind == "int":
        for xs in itertools.product(supp, repeat=k):
            px = 1
            val = 1
            for x in xs:
                px = (px * x) % p
                val *= fv[x]
            for ys in itertools.product(supp, repeat=k - 1):
                py = 1
                w = val
                for y in ys:
                    py = (py * y) % p
                    w *= fv[y]
                total += w * fv[(px * inv[py]) % p]
        return total
    acc = 0j
    for xs in itertools.product(supp, repeat=k):
        px = 1
        val = 1 + 0j
        for x in xs:
            px = (px * x) % p
            val *= fv[x]
        for ys in itertools.product(supp, repeat=k - 1):
            py = 1
            w = val
            for y in ys:
                py = (py * y) % p
                w *= complex(fv[y]).conjugate()
            acc += w * complex(fv[(px * inv[py]) % p]).conjugate()
    return acc


def mult_energy_k_dlog(gamma: MultSubgroup, f: GroupFn, k: int) -> int:
    """Exact T^x_k for integer f via the discrete-log pullback to Z/t.

    Products in the subgroup become sums of character indices, so the count
    is an additive k-fold convolution moment on Z/t.
    """
    t = gamma.order
    pull = [0] * t
    for x in gamma.elements:
        v = f.values[x]
        if v:
            pull[gamma.char_index(x)] = v
    rep = pull
    for _ in range(k - 1):
        rep = [
            sum(rep[y] * pull[(x - y) % t] for y in range(t)) for x in range(t)
        ]
    return sum(v * v for v in rep)


def check_tk_characters(gamma: MultSubgroup, f: GroupFn, k: int) -> list[IneqCheck]:
    """T^x_k(f) = t^(k-1) sum_alpha |<f, chi_alpha>|^(2k); for indicator f
    also T^x_k(A) >= |A|^(2k) / t."""
    p, t = gamma.field.p, gamma.order
    direct = mult_energy_k(gamma, f, k)
    fv = f.values
    rhs = 0.0
    for alpha in range(t):
        chi = Character(gamma, alpha).values.values
        c = sum(fv[x] * chi[x].conjugate() for x in gamma.elements)
        rhs += abs(c) ** (2 * k)
    rhs *= t ** (k - 1)
    scale = max(1.0, abs(direct), abs(rhs))
    out = [
        IneqCheck.from_identity(
            f"product-energy-character-identity-k{k}",
            abs(direct - rhs) / scale,
            TOL.cycle_rel,
            detail={"direct": direct if f.kind == "int" else abs(direct),
                    "character_side": rhs},
        )
    ]
    if f.kind == "int" and all(v in (0, 1) for v in fv):
        size = sum(fv)
        out.append(
            IneqCheck.from_ge(
                f"product-energy-lower-bound-k{k}",
                Fraction(int(direct.real) if isinstance(direct, complex) else direct),
                Fraction(size ** (2 * k), t),
            )
        )
    return out


def check_vinogradov_bounds(gamma: MultSubgroup, a: GroupSet) -> list[IneqCheck]:
    """Subset-of-subgroup bounds via multiplicative energy.

    |A| <= t^(1/4) E^x(A)^(1/4) and, for l in {2, 3},
    E_l(A, Gamma) <= t^(-1/2) E_(2l-1)(Gamma)^(1/2) E^x(A)^(1/2).
    """
    t = gamma.order
    if any(x not in gamma.element_set for x in a.members):
        raise ValueError("A must be a subset of the subgroup")
    find = GroupFn(
        gamma.field.group,
        tuple(1 if x in a.member_set else 0 for x in range(gamma.field.p)),
    )
    em = mult_energy_k_dlog(gamma, find, 2)
    out = [
        IneqCheck.from_le(
            "subset-size-bound",
            float(len(a)),
            (t * em) ** 0.25,
            TOL.complex_rel * max(1.0, (t * em) ** 0.25),
        )
    ]
    gs = gamma.as_set
    for l in (2, 3):
        lhs = energy_k(a, gs, l)
        bound = math.sqrt(energy_k(gs, gs, 2 * l - 1) * em / t)
        out.append(
            IneqCheck.from_le(
                f"subset-energy-bound-l{l}",
                float(lhs),
                bound,
                TOL.complex_rel * max(1.0, bound),
            )
        )
    return out


def check_stepanov_sum(
    gamma: MultSubgroup, q: GroupSet, q1: GroupSet, q2: GroupSet
) -> dict:
    """Report row for the invariant triple correlation sum.

    ratio = sum_{x in Q} (Q1 ∘ Q2)(x) / (t^(-1/3) (|Q||Q1||Q2|)^(2/3));
    hypothesis flags are reported, never asserted (constants unknown).
    """
    for s in (q, q1, q2):
        if not gamma_invariant_set(gamma, s):
            raise ValueError("all three sets must be invariant")
    p, t = gamma.field.p, gamma.order
    corr = correlation_counts(q1, q2)
    num = sum(corr[x] for x in q.members)
    size_prod = len(q) * len(q1) * len(q2)
    denom = (size_prod ** 2) ** (1.0 / 3.0) / t ** (1.0 / 3.0)
    return {
        "p": p,
        "t": t,
        "q": len(q),
        "q1": len(q1),
        "q2": len(q2),
        "sum": num,
        "ratio": num / denom if denom else None,
        "hyp_size": size_prod <= t ** 5,
        "hyp_field": size_prod * t <= p ** 3,
    }
