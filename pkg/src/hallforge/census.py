"""Counting representations over F_{q^s}: all, indecomposable, absolutely
indecomposable, Frobenius orbits and minimal fields of definition.

The Frobenius twist ``M -> M^[q]`` permutes the iso classes over F_{q^s}.
A class has minimal field F_{q^r} exactly when its cycle has length r, so
cycle counts give M^F and cycle lengths give M^min directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InputError, InsufficientSamples, NonIntegerResult
from .gf import FieldSpec, field_make, prime_power
from .quiver import DimVector, Quiver, fmt_dim
from .rep import (
    DEFAULT_MAX_HOM,
    Census,
    frobenius_twist,
    is_absolutely_indecomposable,
    is_indecomposable,
    minimal_field_of_definition,
    orbit_census,
)


def divisors(n: int) -> list[int]:
    if n < 1:
        raise InputError("divisors of a non-positive integer")
    return [d for d in range(1, n + 1) if n % d == 0]


def mobius(n: int) -> int:
    if n < 1:
        raise InputError("mobius of a non-positive integer")
    out, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            out = -out
        p += 1
    return -out if m > 1 else out


def working_field(q: int, s: int = 1) -> FieldSpec:
    """GF(q^s) built as GF(p, e*s)."""
    if s < 1:
        raise InputError("s must be >= 1")
    p, e = prime_power(q)
    return field_make(p, e * s)


def census_over(Q: Quiver, alpha: Sequence[int], q: int, s: int = 1, max_points: int | None = None) -> Census:
    return orbit_census(Q, tuple(alpha), working_field(q, s), max_points)


def count_M(Q: Quiver, alpha: Sequence[int], q: int, s: int = 1, max_points: int | None = None) -> int:
    return len(census_over(Q, alpha, q, s, max_points))


def count_MIA(Q: Quiver, alpha: Sequence[int], q: int, s: int = 1, max_points: int | None = None,
              max_hom: int = DEFAULT_MAX_HOM) -> tuple[int, int, int]:
    """(all, indecomposable, absolutely indecomposable) iso classes over F_{q^s}."""
    cen = census_over(Q, alpha, q, s, max_points)
    I = A = 0
    for c in cen:
        if is_indecomposable(c.rep, max_hom):
            I += 1
            if is_absolutely_indecomposable(c.rep, max_hom):
                A += 1
    return len(cen), I, A


def twist_permutation(Q: Quiver, alpha: Sequence[int], q: int, s: int = 1, max_points: int | None = None) -> list[int]:
    """Class positions of ``[M^[q]]`` for each class ``[M]`` over F_{q^s}."""
    cen = census_over(Q, alpha, q, s, max_points)
    return [cen.classify(frobenius_twist(c.rep, 1, q)).position for c in cen]


def cycle_lengths(perm: Sequence[int]) -> list[int]:
    """Length of the cycle through each point."""
    out = [0] * len(perm)
    for start in range(len(perm)):
        if out[start]:
            continue
        cyc = [start]
        j = perm[start]
        while j != start:
            cyc.append(j)
            j = perm[j]
        for k in cyc:
            out[k] = len(cyc)
    return out


def count_MF_direct(Q: Quiver, alpha: Sequence[int], q: int, s: int = 1, max_points: int | None = None) -> int:
    """Number of Frobenius orbits on iso classes over F_{q^s}."""
    lengths = cycle_lengths(twist_permutation(Q, alpha, q, s, max_points))
    return sum(Fraction(1, n) for n in lengths).numerator if lengths else 0


def count_Mmin(Q: Quiver, alpha: Sequence[int], q: int, s: int = 1, max_points: int | None = None) -> int:
    """Classes with minimal field exactly F_{q^s}, by Mobius inversion over divisors of s."""
    return sum(mobius(s // r) * count_M(Q, alpha, q, r, max_points) for r in divisors(s))


def count_Mmin_direct(Q: Quiver, alpha: Sequence[int], q: int, s: int = 1, max_points: int | None = None,
                      method: str = "cycles", max_hom: int = DEFAULT_MAX_HOM) -> int:
    """Classes with minimal field exactly F_{q^s}, classified one by one.

    ``method="cycles"`` reads cycle lengths of the twist permutation;
    ``method="iso"`` searches Hom for an isomorphism ``M ~ M^[q^r]``.
    """
    if method == "cycles":
        return sum(1 for n in cycle_lengths(twist_permutation(Q, alpha, q, s, max_points)) if n == s)
    if method == "iso":
        cen = census_over(Q, alpha, q, s, max_points)
        return sum(1 for c in cen if minimal_field_of_definition(c.rep, q, max_hom) == s)
    raise InputError(f"unknown method {method!r}")


def count_MF_formula(Q: Quiver, alpha: Sequence[int], q: int, s: int = 1, max_points: int | None = None) -> int:
    """``sum_{r|s} (1/r) sum_{t|r} mu(r/t) M(q^t)``, required to be an integer."""
    M = {t: count_M(Q, alpha, q, t, max_points) for t in divisors(s)}
    total = Fraction(0)
    for r in divisors(s):
        total += Fraction(sum(mobius(r // t) * M[t] for t in divisors(r)), r)
    if total.denominator != 1:
        raise NonIntegerResult(f"orbit-count formula gave {total} for alpha={fmt_dim(alpha)}, q={q}, s={s}")
    return int(total)


@dataclass(frozen=True)
class CensusRow:
    quiver: str
    alpha: DimVector
    q: int
    s: int
    M: int
    I: int
    A: int
    M_F_direct: int
    M_F_formula: int
    M_min: int

    @property
    def agree(self) -> bool:
        return self.M_F_direct == self.M_F_formula

    FIELDS = ("quiver", "alpha", "q", "s", "M", "I", "A", "M_F_direct", "M_F_formula", "M_min", "agree")

    def as_dict(self) -> dict:
        return {
            "quiver": self.quiver,
            "alpha": fmt_dim(self.alpha),
            "q": self.q,
            "s": self.s,
            "M": self.M,
            "I": self.I,
            "A": self.A,
            "M_F_direct": self.M_F_direct,
            "M_F_formula": self.M_F_formula,
            "M_min": self.M_min,
            "agree": self.agree,
        }


def census_row(Q: Quiver, alpha: Sequence[int], q: int, s: int = 1, max_points: int | None = None,
               max_hom: int = DEFAULT_MAX_HOM) -> CensusRow:
    M, I, A = count_MIA(Q, alpha, q, s, max_points, max_hom)
    return CensusRow(
        quiver=Q.label(),
        alpha=tuple(alpha),
        q=q,
        s=s,
        M=M,
        I=I,
        A=A,
        M_F_direct=count_MF_direct(Q, alpha, q, s, max_points),
        M_F_formula=count_MF_formula(Q, alpha, q, s, max_points),
        M_min=count_Mmin(Q, alpha, q, s, max_points),
    )


# -- polynomial fitting ------------------------------------------------------------------------


@dataclass(frozen=True)
class PolyFit:
    coeffs: tuple[Fraction, ...]  # low -> high
    exact: bool  # every held-out sample matches

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else -1

    def __call__(self, x) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("q" if k == 1 else f"q^{k}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms).replace("+ -", "- ")


def _interpolate(points: Sequence[tuple[int, Fraction]]) -> list[Fraction]:
    """Coefficients (low -> high) of the Lagrange interpolant, exactly."""
    n = len(points)
    out = [Fraction(0)] * n
    for i, (xi, yi) in enumerate(points):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            basis = [Fraction(0)] + basis  # multiply by x
            for k in range(len(basis) - 1):
                basis[k] -= xj * basis[k + 1]
            denom *= xi - xj
        for k, b in enumerate(basis):
            out[k] += yi * b / denom
    while out and out[-1] == 0:
        out.pop()
    return out


def fit_polynomial(samples: Sequence[tuple[int, int | Fraction]], degree: int | None = None,
                   holdout: Sequence[tuple[int, int | Fraction]] = ()) -> PolyFit:
    """Exact interpolation through the samples.

    With ``degree`` given, the first ``degree + 1`` samples determine the
    polynomial and the remaining ones join ``holdout`` as checks.
    """
    samples = [(x, Fraction(y)) for x, y in samples]
    if len({x for x, _ in samples}) != len(samples):
        raise InputError("sample abscissae must be distinct")
    need = 1 if degree is None else degree + 1
    if len(samples) < need:
        raise InsufficientSamples(f"{len(samples)} samples cannot fix a degree-{need - 1} polynomial")
    fit_on = samples if degree is None else samples[:need]
    checks = list(samples[len(fit_on):]) + [(x, Fraction(y)) for x, y in holdout]
    coeffs = _interpolate(fit_on)
    fit = PolyFit(tuple(coeffs), True)
    return PolyFit(fit.coeffs, all(fit(x) == y for x, y in checks))
