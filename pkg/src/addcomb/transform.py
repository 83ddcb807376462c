"""Fourier analysis on Z/N and all convolution flavors.

The direct O(N^2) summation is the default everywhere so integer inputs give
exact integer outputs; the naive complex DFT is used only for statements that
are inherently Fourier-side.  Forward transform: F(f)(xi) = sum f(x) e(-xi x/N);
inversion carries the 1/N.
"""

from __future__ import annotations

import cmath
import itertools
import math
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .checks import IneqCheck
from .config import TOL, TUPLE_CELL_CAP
from .groups import CyclicGroup


@dataclass(frozen=True)
class GroupFn:
    """Dense function Z/N -> C; integer-valued functions stay exact ints."""

    group: CyclicGroup
    values: tuple

    def __post_init__(self) -> None:
        if len(self.values) != self.group.modulus:
            raise ValueError("value vector length must equal the modulus")

    @classmethod
    def of(cls, group: CyclicGroup, values: Sequence) -> "GroupFn":
        return cls(group, tuple(values))

    @classmethod
    def delta(cls, group: CyclicGroup, at: int = 0, height=1) -> "GroupFn":
        vals = [0] * group.modulus
        vals[at % group.modulus] = height
        return cls(group, tuple(vals))

    @classmethod
    def constant(cls, group: CyclicGroup, c=1) -> "GroupFn":
        return cls(group, (c,) * group.modulus)

    @cached_property
    def kind(self) -> str:
        return "int" if all(isinstance(v, int) for v in self.values) else "complex"

    def __call__(self, x: int):
        return self.values[x % self.group.modulus]

    def __len__(self) -> int:
        return self.group.modulus

    def conjugate(self) -> "GroupFn":
        if self.kind == "int":
            return self
        return GroupFn(self.group, tuple(complex(v).conjugate() for v in self.values))

    def reflect(self) -> "GroupFn":
        """f^c(x) = f(-x)."""
        n = self.group.modulus
        return GroupFn(self.group, tuple(self.values[(-x) % n] for x in range(n)))

    def pointwise(self, other: "GroupFn") -> "GroupFn":
        _same_group(self, other)
        return GroupFn(
            self.group, tuple(a * b for a, b in zip(self.values, other.values))
        )

    def power(self, k: int) -> "GroupFn":
        return GroupFn(self.group, tuple(v ** k for v in self.values))

    def l2_norm_sq(self):
        return sum(abs(v) ** 2 for v in self.values)


@dataclass(frozen=True)
class FourierCoeffs:
    group: CyclicGroup
    values: tuple

    def __len__(self) -> int:
        return self.group.modulus


def _same_group(*fns) -> CyclicGroup:
    g = fns[0].group
    for f in fns[1:]:
        if f.group != g:
            raise ValueError("functions live on different moduli")
    return g


def dft(f: GroupFn) -> FourierCoeffs:
    n = f.group.modulus
    w = -2.0 * math.pi / n
    out = []
    for xi in range(n):
        acc = 0j
        for x, v in enumerate(f.values):
            if v:
                acc += v * cmath.exp(1j * w * ((xi * x) % n))
        out.append(acc)
    return FourierCoeffs(f.group, tuple(out))


def idft(coeffs: FourierCoeffs) -> GroupFn:
    n = coeffs.group.modulus
    w = 2.0 * math.pi / n
    out = []
    for x in range(n):
        acc = 0j
        for xi, v in enumerate(coeffs.values):
            if v:
                acc += v * cmath.exp(1j * w * ((xi * x) % n))
        out.append(acc / n)
    return GroupFn(coeffs.group, tuple(out))


def convolve(f: GroupFn, g: GroupFn) -> GroupFn:
    """(f * g)(x) = sum_y f(y) g(x - y), direct summation."""
    n = _same_group(f, g).modulus
    fv, gv = f.values, g.values
    out = []
    for x in range(n):
        acc = 0
        for y in range(n):
            v = fv[y]
            if v:
                acc += v * gv[(x - y) % n]
        out.append(acc)
    return GroupFn(f.group, tuple(out))


def correlate(f: GroupFn, g: GroupFn) -> GroupFn:
    """(f ∘ g)(x) = sum_y f(y) g(y + x), direct summation."""
    n = _same_group(f, g).modulus
    fv, gv = f.values, g.values
    out = []
    for x in range(n):
        acc = 0
        for y in range(n):
            v = fv[y]
            if v:
                acc += v * gv[(y + x) % n]
        out.append(acc)
    return GroupFn(f.group, tuple(out))


def correlate_many(fns: Sequence[GroupFn]) -> GroupFn:
    """f_0 ∘ (f_1 ∘ (f_2 ∘ ...)), right-nested."""
    if not fns:
        raise ValueError("need at least one function")
    out = fns[-1]
    for f in reversed(fns[:-1]):
        out = correlate(f, out)
    return out


def kfold_convolve(f: GroupFn, k: int) -> GroupFn:
    """f * f * ... * f with k factors (k >= 1)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    out = f
    for _ in range(k - 1):
        out = convolve(out, f)
    return out


def kfold_correlate(f: GroupFn, k: int) -> GroupFn:
    """(f ∘_k f)(x) = sum f(y_1)...f(y_k) f(x + y_1 + ... + y_k)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return correlate(kfold_convolve(f, k), f)


@dataclass(frozen=True)
class GenConvTable:
    """Dense table of C_k(f_0,...,f_{k-1}) over Gr^{k-1} (k in {2,3})."""

    group: CyclicGroup
    arity: int  # k - 1
    flat: tuple

    def __post_init__(self) -> None:
        n = self.group.modulus
        if self.arity not in (1, 2):
            raise ValueError("table arity must be 1 or 2")
        if n ** self.arity > TUPLE_CELL_CAP:
            raise ValueError("table exceeds dense cap")
        if len(self.flat) != n ** self.arity:
            raise ValueError("flat storage has wrong length")

    def __call__(self, *xs: int):
        n = self.group.modulus
        if len(xs) != self.arity:
            raise ValueError("wrong number of arguments")
        idx = 0
        for x in xs:
            idx = idx * n + (x % n)
        return self.flat[idx]


def gen_convolution(fns: Sequence[GroupFn]) -> GenConvTable:
    """C_k(f_0,...,f_{k-1})(x_1,..,x_{k-1}) = sum_z f_0(z) f_1(z+x_1) ...."""
    k = len(fns)
    if k not in (2, 3):
        raise ValueError("k must be 2 or 3")
    n = _same_group(*fns).modulus
    vals = [f.values for f in fns]
    if k == 2:
        return GenConvTable(fns[0].group, 1, correlate(fns[0], fns[1]).values)
    f0, f1, f2 = vals
    flat = []
    for x1 in range(n):
        for x2 in range(n):
            acc = 0
            for z in range(n):
                v = f0[z]
                if v:
                    acc += v * f1[(z + x1) % n] * f2[(z + x2) % n]
            flat.append(acc)
    return GenConvTable(fns[0].group, 2, tuple(flat))


def _table_eval(tables: Sequence[GenConvTable], args, n: int):
    """C_l(T_0,...,T_{l-1}) at argument tuples over the tables' domain.

    args is a tuple of (l-1) points, each a tuple in Gr^{arity}.
    """
    arity = tables[0].arity
    acc = 0
    for z in itertools.product(range(n), repeat=arity):
        term = tables[0](*z)
        if not term:
            continue
        for t, y in zip(tables[1:], args):
            term *= t(*tuple((zi + yi) % n for zi, yi in zip(z, y)))
        acc += term
    return acc


def check_commutation(
    rows: Sequence[Sequence[GroupFn]],
    rng: random.Random | None = None,
    samples: int = 64,
) -> IneqCheck:
    """Nested generalized convolutions commute across rows and columns.

    For an l x k matrix of functions, C_l applied to the C_k of the rows
    equals C_k applied to the C_l of the columns, with the (k-1)(l-1)
    argument grid transposed.  Full grid for l = k = 2; random argument
    samples otherwise.
    """
    l = len(rows)
    k = len(rows[0])
    if not (2 <= l <= 3 and 2 <= k <= 3):
        raise ValueError("l and k must be 2 or 3")
    for r in rows:
        if len(r) != k:
            raise ValueError("ragged function matrix")
    n = _same_group(*[f for r in rows for f in r]).modulus
    row_tables = [gen_convolution(list(r)) for r in rows]
    col_tables = [gen_convolution([rows[i][j] for i in range(l)]) for j in range(k)]

    if l == 2 and k == 2:
        points = [((x,),) for x in range(n)]
    else:
        if rng is None:
            rng = random.Random(0)
        cells = (l - 1) * (k - 1)
        points = []
        for _ in range(samples):
            flatargs = [rng.randrange(n) for _ in range(cells)]
            it = iter(flatargs)
            points.append(
                tuple(tuple(next(it) for _ in range(k - 1)) for _ in range(l - 1))
            )

    worst = 0
    for y in points:
        lhs = _table_eval(row_tables, y, n)
        # transpose the argument grid for the column side
        yt = tuple(
            tuple(y[i][j] for i in range(l - 1)) for j in range(k - 1)
        )
        rhs = _table_eval(col_tables, yt, n)
        worst = max(worst, abs(lhs - rhs))
    exact = all(f.kind == "int" for r in rows for f in r)
    return IneqCheck.from_identity(
        "nested-convolution-swap", worst, 0 if exact else TOL.complex_rel
    )
