"""Restricted kernel operators psi(x - y) on a set, spectra, and bounds.

Diagonalization is a classical cyclic Jacobi sweep (symmetric matrices
only), adequate for the sizes this package targets (n <= 512).  Kernels
with nonnegative Fourier transform are always *constructed* as psi = h ∘ h
for real h, which forces the hypothesis instead of testing it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .checks import IneqCheck
from .config import TOL
from .energy import correlation_counts
from .groups import GroupSet, indicator
from .transform import GroupFn, correlate


@dataclass(frozen=True)
class SpectralOperator:
    base_set: GroupSet
    kernel: GroupFn
    matrix: np.ndarray
    symmetric: bool

    @property
    def size(self) -> int:
        return len(self.base_set)


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: tuple[float, ...]  # descending
    eigenvectors: np.ndarray | None  # columns, aligned with eigenvalues
    residual: float

    def power_sum(self, k: int) -> float:
        return float(sum(mu ** k for mu in self.eigenvalues))


def correlation_kernel(h: GroupFn) -> GroupFn:
    """psi = h ∘ h for real h: symmetric with nonnegative Fourier transform."""
    if any(isinstance(v, complex) for v in h.values):
        raise ValueError("kernel factor must be real-valued")
    return correlate(h, h)


def build_restricted_operator(a: GroupSet, psi: GroupFn) -> SpectralOperator:
    if a.group != psi.group:
        raise ValueError("kernel and set live on different moduli")
    n = a.group.modulus
    mem = a.members
    vals = psi.values
    size = len(mem)
    mat = np.empty((size, size), dtype=complex if psi.kind == "complex" else float)
    for i, x in enumerate(mem):
        for j, y in enumerate(mem):
            mat[i, j] = vals[(x - y) % n]
    symmetric = all(vals[x] == vals[(-x) % n] for x in range(n)) and psi.kind != "complex"
    if symmetric:
        mat = mat.real.astype(float)
    return SpectralOperator(a, psi, mat, symmetric)


def jacobi_eigh(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray, float]:
    """Cyclic Jacobi diagonalization of a real symmetric matrix.

    Returns (eigenvalues descending, eigenvector columns, off-diagonal
    residual).  Raises on non-symmetric input; reports the residual if the
    sweep budget runs out.
    """
    m = np.array(matrix, dtype=float)
    n = m.shape[0]
    if m.shape != (n, n) or not np.allclose(m, m.T, atol=1e-12 * (1 + np.abs(m).max())):
        raise ValueError("jacobi_eigh needs a symmetric square matrix")
    v = np.eye(n)
    if n == 1:
        return m.diagonal().copy(), v, 0.0
    fro = math.sqrt(float((m * m).sum()))
    if fro == 0.0:
        return np.zeros(n), v, 0.0
    target = TOL.jacobi_off * fro
    for _ in range(TOL.jacobi_sweeps):
        off = math.sqrt(max(0.0, float((m * m).sum() - (m.diagonal() ** 2).sum())))
        if off <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = m[p, q]
                app, aqq = m[p, p], m[q, q]
                if abs(apq) <= 1e-40 * (abs(app) + abs(aqq) + 1e-300):
                    continue
                theta = (aqq - app) / (2.0 * apq)
                if abs(theta) > 1e100:
                    t = 1.0 / (2.0 * theta)
                else:
                    t = math.copysign(1.0, theta) / (
                        abs(theta) + math.sqrt(theta * theta + 1.0)
                    )
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rp = m[p, :].copy()
                rq = m[q, :].copy()
                m[p, :] = c * rp - s * rq
                m[q, :] = s * rp + c * rq
                cp = m[:, p].copy()
                cq = m[:, q].copy()
                m[:, p] = c * cp - s * cq
                m[:, q] = s * cp + c * cq
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    off = math.sqrt(max(0.0, float((m * m).sum() - (m.diagonal() ** 2).sum())))
    eigs = m.diagonal().copy()
    order = np.argsort(-eigs, kind="stable")
    return eigs[order], v[:, order], off


def eigendecompose(op: SpectralOperator) -> Spectrum:
    if not op.symmetric:
        raise ValueError("only symmetric operators are diagonalized")
    eigs, vecs, off = jacobi_eigh(op.matrix)
    return Spectrum(tuple(float(x) for x in eigs), vecs, float(off))


def check_traces(op: SpectralOperator, spectrum: Spectrum) -> list[IneqCheck]:
    """Trace and squared-trace identities for the restricted operator.

    sum mu_j = |A| psi(0);  sum mu_j^2 = sum_z psi(z)^2 (A∘A)(z); the second
    is also cross-checked in its dual-side convolution form.
    """
    a = op.base_set
    psi = op.kernel
    n = a.group.modulus
    aa = correlation_counts(a, a)
    tr_exact = len(a) * psi.values[0]
    tr_sq_exact = sum(psi.values[z] ** 2 * aa[z] for z in range(n))
    s1 = spectrum.power_sum(1)
    s2 = spectrum.power_sum(2)
    scale1 = max(1.0, abs(tr_exact))
    scale2 = max(1.0, abs(tr_sq_exact))
    out = [
        IneqCheck.from_identity("trace-linear", abs(s1 - tr_exact) / scale1, TOL.spectrum_rel),
        IneqCheck.from_identity("trace-square", abs(s2 - tr_sq_exact) / scale2, TOL.spectrum_rel),
    ]
    # dual-side form of the squared trace via the spectral table of psi-hat
    from .transform import dft

    psihat = dft(psi)
    ahat = dft(indicator(a))
    phi = [v / n for v in psihat.values]
    dual = 0.0
    for z in range(n):
        corr_phi = sum(phi[y] * phi[(y + z) % n] for y in range(n))
        dual += (corr_phi * abs(ahat.values[z]) ** 2).real
    out.append(
        IneqCheck.from_identity(
            "trace-square-dual", abs(dual - tr_sq_exact) / scale2, TOL.spectrum_rel
        )
    )
    return out


def triangle_sum(a: GroupSet, psi: GroupFn) -> int | float:
    """sum_{x,y,z in A} psi(x-y) psi(x-z) psi(y-z), direct enumeration."""
    n = a.group.modulus
    vals = psi.values
    mem = a.members
    total = 0
    for x in mem:
        for y in mem:
            pxy = vals[(x - y) % n]
            if not pxy:
                continue
            for z in mem:
                total += pxy * vals[(x - z) % n] * vals[(y - z) % n]
    return total


def rayleigh_indicator(a: GroupSet, psi: GroupFn):
    """<T 1_A, 1_A> / |A| = |A|^-1 sum_x psi(x)(A∘A)(x), a lower bound for mu_0."""
    aa = correlation_counts(a, a)
    s = sum(p * c for p, c in zip(psi.values, aa))
    if psi.kind == "int":
        return Fraction(s, len(a))
    return s / len(a)


def check_triangle_inequality(a: GroupSet, h: GroupFn) -> IneqCheck:
    """Triple-product lower bounds for kernels psi = h ∘ h."""
    if not a.members:
        raise ValueError("A must be nonempty")
    psi = correlation_kernel(h)
    aa = correlation_counts(a, a)
    na = len(a)
    lhs = triangle_sum(a, psi)
    s1 = sum(p * c for p, c in zip(psi.values, aa))
    s2 = sum(p * p * c for p, c in zip(psi.values, aa))
    exact = psi.kind == "int"
    if exact:
        bounds = [
            Fraction(s1 ** 3, na ** 3),
            Fraction(abs(psi.values[0]) ** 3 * na),
            float(s2) ** 1.5 / math.sqrt(na),
        ]
        lhs = Fraction(lhs)
    else:
        bounds = [
            s1 ** 3 / na ** 3,
            abs(psi.values[0]) ** 3 * na,
            s2 ** 1.5 / math.sqrt(na),
        ]
    rhs = max(bounds, key=float)
    return IneqCheck.from_ge(
        "kernel-triangle-bound", lhs, rhs, TOL.spectrum_rel * max(1.0, float(rhs))
    )


def cycle_sums(a: GroupSet, psi: GroupFn, ks) -> dict:
    """Closed k-cycle kernel sums over A^k via matrix power traces.

    Integer kernels stay exact: int64 when the power bound fits, arbitrary
    precision objects otherwise.
    """
    n = a.group.modulus
    mem = a.members
    ks = sorted(set(ks))
    if psi.kind == "int":
        peak = max(1, max(abs(v) for v in psi.values)) * max(1, len(mem))
        big = peak ** max(ks) >= 2 ** 62
        m = np.array(
            [[psi.values[(x - y) % n] for y in mem] for x in mem],
            dtype=object if big else np.int64,
        )
    else:
        m = np.array(
            [[psi.values[(x - y) % n] for y in mem] for x in mem], dtype=float
        )
    out = {}
    power = m
    for k in range(2, max(ks) + 1):
        power = power @ m
        if k in ks:
            tr = power.trace()
            out[k] = int(tr) if psi.kind == "int" else float(tr)
    if 1 in ks:
        out[1] = int(m.trace()) if psi.kind == "int" else float(m.trace())
    return out


def cycle_sum(a: GroupSet, psi: GroupFn, k: int):
    return cycle_sums(a, psi, [k])[k]


def check_cycle_sums(
    a: GroupSet, h: GroupFn, k: int, spectrum: Spectrum | None = None
) -> list[IneqCheck]:
    """Closed-cycle sums: equal to sum_j mu_j^k and at least Rayleigh^k."""
    if k not in (3, 4, 5):
        raise ValueError("cycle length k must be in 3..5")
    psi = correlation_kernel(h)
    lhs = cycle_sum(a, psi, k)
    ray = rayleigh_indicator(a, psi)
    out = [
        IneqCheck.from_ge(
            f"kernel-cycle-bound-k{k}",
            lhs,
            ray ** k,
            TOL.cycle_rel * max(1.0, abs(ray) ** k),
        )
    ]
    if spectrum is not None:
        ps = spectrum.power_sum(k)
        scale = max(1.0, abs(ps), abs(lhs))
        out.append(
            IneqCheck.from_identity(
                f"kernel-cycle-eigen-k{k}", abs(lhs - ps) / scale, TOL.cycle_rel
            )
        )
    return out


def top_eigenpair(matrix: np.ndarray, iters: int = 4000) -> tuple[float, np.ndarray]:
    """Largest eigenvalue and a nonnegative unit eigenvector.

    Power iteration from the all-ones vector (the iterates stay entrywise
    nonnegative for nonnegative kernels); falls back to Jacobi plus the
    entrywise absolute value of the top eigenvector if convergence stalls.
    """
    n = matrix.shape[0]
    v = np.ones(n) / math.sqrt(n)
    mu = 0.0
    norm = float(np.abs(matrix).max())
    if norm == 0.0:
        return 0.0, v
    for _ in range(iters):
        w = matrix @ v
        nw = float(np.linalg.norm(w))
        if nw == 0.0:
            return 0.0, v
        v = w / nw
        mu = float(v @ (matrix @ v))
        if float(np.linalg.norm(matrix @ v - mu * v)) <= 1e-12 * max(1.0, abs(mu)):
            return mu, np.abs(v)
    eigs, vecs, _ = jacobi_eigh(matrix)
    mu = float(eigs[0])
    v = np.abs(vecs[:, 0])
    return mu, v


@dataclass(frozen=True)
class EigBoundReport:
    mu0: float
    vector_sum: float
    checks: list[IneqCheck] = field(default_factory=list)
    degenerate: bool = False

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def first_eigenfunction_bounds(a: GroupSet, h: GroupFn) -> EigBoundReport:
    """Size and sup-norm bounds for the top eigenfunction of psi = h ∘ h.

    Requires h >= 0 so the kernel is nonnegative and the top eigenfunction
    can be taken nonnegative.  A zero top eigenvalue skips the bounds that
    divide by it and flags the report as degenerate.
    """
    if any(v < 0 for v in h.values):
        raise ValueError("kernel factor must be nonnegative")
    psi = correlation_kernel(h)
    op = build_restricted_operator(a, psi)
    mu0, f0 = top_eigenpair(op.matrix)
    g = float(f0.sum())
    checks = [
        IneqCheck.from_ge(
            "top-vector-sum-upper", len(a), g * g, TOL.spectrum_rel * max(1.0, g * g)
        )
    ]
    degenerate = mu0 <= TOL.spectrum_rel * max(1.0, float(np.abs(op.matrix).max()))
    psi_inf = max(abs(v) for v in psi.values)
    psi_l2 = math.sqrt(float(psi.l2_norm_sq()))
    if not degenerate:
        lower = max(
            mu0 / psi_inf if psi_inf else 0.0,
            mu0 ** 2 / psi_l2 ** 2 if psi_l2 else 0.0,
        )
        checks.append(
            IneqCheck.from_ge(
                "top-vector-sum-lower", g * g, lower, TOL.spectrum_rel * max(1.0, lower)
            )
        )
        f_inf = float(np.abs(f0).max())
        checks.append(
            IneqCheck.from_le(
                "top-vector-sup-kernel",
                f_inf,
                psi_l2 / mu0,
                TOL.spectrum_rel * max(1.0, psi_l2 / mu0),
            )
        )
        h_l2 = math.sqrt(float(h.l2_norm_sq()))
        checks.append(
            IneqCheck.from_le(
                "top-vector-sup-factor",
                f_inf,
                h_l2 / math.sqrt(mu0),
                TOL.spectrum_rel * max(1.0, h_l2 / math.sqrt(mu0)),
            )
        )
    return EigBoundReport(mu0, g, checks, degenerate)


def embed_full_operator(a: GroupSet, psi: GroupFn) -> np.ndarray:
    """The N x N operator psi(x-y) A(x) A(y); same nonzero spectrum."""
    n = a.group.modulus
    ind = indicator(a).values
    mat = np.zeros((n, n))
    for x in range(n):
        if not ind[x]:
            continue
        for y in range(n):
            if ind[y]:
                mat[x, y] = psi.values[(x - y) % n]
    return mat
