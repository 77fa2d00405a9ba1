"""Finite fields GF(p^e) with a deterministic polynomial model.

Elements are stored as integers ``0 <= i < p**e``: the element
``c_0 + c_1 t + ... + c_{e-1} t^{e-1}`` has index ``sum(c_k * p**k)``.
Index order is the enumeration order used everywhere downstream.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from typing import Iterator, Sequence

from .errors import DivisionByZero, FieldMismatch, NonPrime, SizeGuardExceeded

DEFAULT_FIELD_GUARD = 2**20

_TABLE_LIMIT = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Split a prime power ``q`` into ``(p, e)``."""
    fs = prime_factors(q) if q > 1 else []
    if len(fs) != 1:
        raise NonPrime(f"{q} is not a prime power")
    p = fs[0]
    e = 0
    while q > 1:
        q //= p
        e += 1
    return p, e


# -- polynomials over GF(p), coefficient lists low -> high -------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _trim(list(a))
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _is_irreducible(m: Sequence[int], p: int) -> bool:
    deg = len(m) - 1
    if deg <= 1:
        return deg == 1
    if m[0] == 0:
        return False
    for d in range(1, deg // 2 + 1):
        for tail in product(range(p), repeat=d):
            divisor = list(tail) + [1]
            if not _poly_mod(m, divisor, p):
                return False
    return True


def smallest_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Monic irreducible of degree ``e`` with the smallest integer encoding.

    Candidates ``t^e + c_{e-1} t^{e-1} + ... + c_0`` are scanned in
    lexicographic order of ``(c_{e-1}, ..., c_0)``; the returned tuple is
    ``(c_0, ..., c_{e-1}, 1)``.
    """
    if e == 1:
        return (0, 1)
    for code in range(p**e):
        low = [(code // p**k) % p for k in range(e)]
        cand = low + [1]
        if _is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


@dataclass(frozen=True)
class FieldSpec:
    p: int
    e: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.e

    size = q

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.e})" if self.e > 1 else f"GF({self.p})"

    # -- index <-> coefficients -------------------------------------------

    def coeffs(self, i: int) -> tuple[int, ...]:
        p = self.p
        return tuple((i // p**k) % p for k in range(self.e))

    def index(self, coeffs: Sequence[int]) -> int:
        p = self.p
        return sum((c % p) * p**k for k, c in enumerate(coeffs))

    # -- tables -------------------------------------------------------------

    @cached_property
    def _exp_log(self) -> tuple[list[int], list[int]]:
        q = self.q
        if q == 2:
            return [1], [0, 0]
        gen = self.primitive_element
        exp = [0] * (q - 1)
        log = [0] * q
        x = 1
        for k in range(q - 1):
            exp[k] = x
            log[x] = k
            x = self._slow_mul(x, gen)
        return exp, log

    @cached_property
    def primitive_element(self) -> int:
        q = self.q
        if q == 2:
            return 1
        order = q - 1
        factors = prime_factors(order)
        for g in range(2 if self.e == 1 else self.p, q):
            if all(self._slow_pow(g, order // r) != 1 for r in factors):
                return g
        raise AssertionError("no primitive element")  # pragma: no cover

    def _slow_mul(self, a: int, b: int) -> int:
        prod = _poly_mul(_trim(list(self.coeffs(a))), _trim(list(self.coeffs(b))), self.p)
        return self.index(_poly_mod(prod, self.modulus, self.p))

    def _slow_pow(self, a: int, n: int) -> int:
        result, base = 1, a
        while n:
            if n & 1:
                result = self._slow_mul(result, base)
            base = self._slow_mul(base, base)
            n >>= 1
        return result

    @cached_property
    def add_table(self) -> list[list[int]] | None:
        if self.q > _TABLE_LIMIT or self.e == 1:
            return None
        return [[self._digit_add(a, b) for b in range(self.q)] for a in range(self.q)]

    @cached_property
    def mul_table(self) -> list[list[int]] | None:
        if self.q > _TABLE_LIMIT:
            return None
        return [[self._log_mul(a, b) for b in range(self.q)] for a in range(self.q)]

    @cached_property
    def neg_table(self) -> list[int]:
        return [self.index([-c for c in self.coeffs(a)]) for a in range(self.q)]

    @cached_property
    def inv_table(self) -> list[int]:
        q = self.q
        exp, log = self._exp_log
        inv = [0] * q
        for a in range(1, q):
            inv[a] = exp[(-log[a]) % (q - 1)]
        return inv

    def _digit_add(self, a: int, b: int) -> int:
        p = self.p
        out = 0
        w = 1
        for _ in range(self.e):
            out += ((a % p + b % p) % p) * w
            a //= p
            b //= p
            w *= p
        return out

    def _log_mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        exp, log = self._exp_log
        return exp[(log[a] + log[b]) % (self.q - 1)]

    # -- integer-level arithmetic ------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        t = self.add_table
        return t[a][b] if t is not None else self._digit_add(a, b)

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg_table[b])

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        t = self.mul_table
        return t[a][b] if t is not None else self._log_mul(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return self.inv_table[a]

    def pow(self, a: int, n: int) -> int:
        if a == 0:
            if n < 0:
                raise DivisionByZero("negative power of zero")
            return 1 if n == 0 else 0
        exp, log = self._exp_log
        return exp[(log[a] * n) % (self.q - 1)]

    def frob(self, a: int, times: int = 1) -> int:
        """``a ** (p ** times)``."""
        if a == 0:
            return 0
        exp, log = self._exp_log
        return exp[(log[a] * pow(self.p, times, self.q - 1)) % (self.q - 1)]

    def element(self, value: int | Sequence[int]) -> "FieldElement":
        if isinstance(value, int):
            if not 0 <= value < self.q:
                raise ValueError(f"index {value} out of range for {self}")
            return FieldElement(self, self.coeffs(value))
        return FieldElement(self, tuple(c % self.p for c in value) + (0,) * (self.e - len(value)))

    def format(self, a: int) -> str:
        """Human-readable polynomial form of an element index."""
        if self.e == 1:
            return str(a)
        terms = []
        for k, c in reversed(list(enumerate(self.coeffs(a)))):
            if c == 0:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}{mono}")
        return "+".join(terms) if terms else "0"


@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    coeffs: tuple[int, ...]

    @property
    def index(self) -> int:
        return self.spec.index(self.coeffs)

    def _check(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement) or other.spec != self.spec:
            raise FieldMismatch(f"operands over different fields: {self.spec} vs {getattr(other, 'spec', other)}")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return self.spec.element(self.spec.add(self.index, other.index))

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return self.spec.element(self.spec.sub(self.index, other.index))

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return self.spec.element(self.spec.mul(self.index, other.index))

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return self.spec.element(self.spec.mul(self.index, self.spec.inv(other.index)))

    def __neg__(self) -> "FieldElement":
        return self.spec.element(self.spec.neg(self.index))

    def __pow__(self, n: int) -> "FieldElement":
        return self.spec.element(self.spec.pow(self.index, n))

    def inverse(self) -> "FieldElement":
        return self.spec.element(self.spec.inv(self.index))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __repr__(self) -> str:
        return self.spec.format(self.index)


def _field_guard() -> int:
    return int(os.environ.get("HALLFORGE_MAX_FIELD", DEFAULT_FIELD_GUARD))


@lru_cache(maxsize=None)
def _make(p: int, e: int) -> FieldSpec:
    return FieldSpec(p, e, smallest_irreducible(p, e))


def field_make(p: int, e: int = 1, guard: int | None = None) -> FieldSpec:
    """Canonical GF(p^e); repeated calls return the same object."""
    if not is_prime(p):
        raise NonPrime(f"{p} is not prime")
    if e < 1:
        raise ValueError("extension degree must be >= 1")
    limit = _field_guard() if guard is None else guard
    if p**e > limit:
        raise SizeGuardExceeded("field size", p**e, limit)
    return _make(p, e)


def arith(op: str, x: FieldElement, y: FieldElement | None = None) -> FieldElement:
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "neg":
        return -x
    if op == "inv":
        return x.inverse()
    raise ValueError(f"unknown operation {op!r}")


def frobenius(x: FieldElement, times: int = 1) -> FieldElement:
    """``x ** (p ** times)``; ``times = e`` is the q-power map."""
    return x.spec.element(x.spec.frob(x.index, times))


def enumerate_field(spec: FieldSpec) -> list[FieldElement]:
    return [spec.element(i) for i in range(spec.q)]


def iter_indices(spec: FieldSpec) -> Iterator[int]:
    return iter(range(spec.q))
