"""The Hall algebra of a quiver over a finite field, evaluated at fixed q.

Coefficients live in Q(sqrt q) and are kept exact. A :class:`HallAlgebra`
is one run: a quiver, a field and the size guards. It owns the censuses it
touches and memoises Hall numbers per total dimension vector.

Conventions: ``F[L][(M, N)]`` counts subrepresentations ``X`` of ``L`` with
``X ~ N`` and ``L/X ~ M``; ``h_L^{MN} = F a_M a_N / a_L``; the twisted
product and coproduct carry ``v^<dim M, dim N>`` with ``v = sqrt q``.
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from . import linalg as la
from .errors import InputError, SizeGuardExceeded, UnknownClassId
from .gf import FieldSpec
from .quiver import DimVector, Quiver, euler_form, fmt_dim, inner
from .rep import (
    DEFAULT_MAX_HOM,
    Census,
    IsoClass,
    codec,
    default_max_points,
    orbit_census,
    parse_class_id,
)

Rational = int | Fraction


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _parse_frac(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"bad rational {s!r}") from None


# -- coefficients -----------------------------------------------------------------


@dataclass(frozen=True)
class HallCoef:
    """The exact number ``a + b*sqrt(q)``."""

    a: Fraction
    b: Fraction
    q: int

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        r = math.isqrt(self.q)
        if r * r == self.q and self.b:
            object.__setattr__(self, "a", self.a + self.b * r)
            object.__setattr__(self, "b", Fraction(0))

    @classmethod
    def of(cls, x: "HallCoef | Rational", q: int) -> "HallCoef":
        if isinstance(x, HallCoef):
            if x.q != q:
                raise InputError(f"coefficient over q={x.q} used with q={q}")
            return x
        return cls(Fraction(x), Fraction(0), q)

    @classmethod
    def v_power(cls, n: int, q: int) -> "HallCoef":
        """``v^n`` with ``v = sqrt q``."""
        base = Fraction(q) ** (n // 2)
        return cls(0, base, q) if n % 2 else cls(base, 0, q)

    def _other(self, y) -> "HallCoef":
        return HallCoef.of(y, self.q)

    def __add__(self, y):
        y = self._other(y)
        return HallCoef(self.a + y.a, self.b + y.b, self.q)

    __radd__ = __add__

    def __neg__(self):
        return HallCoef(-self.a, -self.b, self.q)

    def __sub__(self, y):
        return self + (-self._other(y))

    def __rsub__(self, y):
        return self._other(y) - self

    def __mul__(self, y):
        y = self._other(y)
        return HallCoef(self.a * y.a + self.b * y.b * self.q, self.a * y.b + self.b * y.a, self.q)

    __rmul__ = __mul__

    def inverse(self) -> "HallCoef":
        norm = self.a * self.a - self.b * self.b * self.q
        if norm == 0:
            raise ZeroDivisionError("inverse of zero coefficient")
        return HallCoef(self.a / norm, -self.b / norm, self.q)

    def __truediv__(self, y):
        return self * self._other(y).inverse()

    def __rtruediv__(self, y):
        return self._other(y) * self.inverse()

    def __bool__(self) -> bool:
        return bool(self.a or self.b)

    def __eq__(self, y) -> bool:
        if isinstance(y, HallCoef):
            return (self.a, self.b, self.q) == (y.a, y.b, y.q)
        if isinstance(y, (int, Fraction)):
            return self.b == 0 and self.a == y
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.a, self.b, self.q))

    def is_rational(self) -> bool:
        return self.b == 0

    def __str__(self) -> str:
        a, b = self.a, self.b
        if not b:
            return str(a)
        root = f"sqrt({self.q})"
        bpart = root if b == 1 else ("-" + root if b == -1 else f"{b}*{root}")
        if not a:
            return bpart
        if bpart.startswith("-"):
            return f"{a} - {bpart[1:]}"
        return f"{a} + {bpart}"

    def __repr__(self) -> str:
        return f"HallCoef({self})"

    def to_json(self) -> dict:
        return {"a": _frac_str(self.a), "b": _frac_str(self.b)}

    @classmethod
    def from_json(cls, data: Mapping, q: int) -> "HallCoef":
        return cls(_parse_frac(data["a"]), _parse_frac(data["b"]), q)


def v_binomial(n: int, k: int, q: int) -> HallCoef:
    """Gaussian binomial ``[n; k]`` at ``v = sqrt q``."""
    if not 0 <= k <= n:
        raise InputError(f"need 0 <= k <= n, got n={n}, k={k}")
    out = HallCoef.of(1, q)
    for i in range(1, k + 1):
        m = n - i + 1
        num = HallCoef.v_power(m, q) - HallCoef.v_power(-m, q)
        den = HallCoef.v_power(i, q) - HallCoef.v_power(-i, q)
        out = out * num / den
    return out


# -- elements -----------------------------------------------------------------------


def class_sort_key(cid: str) -> tuple:
    dim, idx = parse_class_id(cid)
    return (sum(dim), dim, idx)


def _key_sort(key: tuple[str, ...]) -> tuple:
    return tuple(class_sort_key(c) for c in key)


class _Sparse:
    """Shared behaviour of Hall elements and tensors: sparse exact vectors."""

    _arity = 1

    def __init__(self, q: int, terms: Mapping | Iterable = ()):
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for k, c in items:
            k = self._norm_key(k)
            c = HallCoef.of(c, q)
            acc[k] = acc[k] + c if k in acc else c
        self.q = q
        self._terms = {k: acc[k] for k in sorted(acc, key=self._sort) if acc[k]}

    @staticmethod
    def _norm_key(k):
        return k

    @staticmethod
    def _sort(k):
        return class_sort_key(k)

    def items(self):
        return self._terms.items()

    def keys(self):
        return self._terms.keys()

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def __getitem__(self, k) -> HallCoef:
        return self._terms.get(self._norm_key(k), HallCoef.of(0, self.q))

    def coeff(self, k) -> HallCoef:
        return self[k]

    def is_zero(self) -> bool:
        return not self._terms

    def _check(self, other) -> None:
        if type(other) is not type(self) or other.q != self.q:
            raise InputError("operands belong to different runs")

    def __eq__(self, other) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return self.q == other.q and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.q, tuple(self._terms.items())))

    def __add__(self, other):
        self._check(other)
        return type(self)(self.q, list(self.items()) + list(other.items()))

    def __neg__(self):
        return type(self)(self.q, {k: -c for k, c in self.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "_Sparse":
        c = HallCoef.of(c, self.q)
        return type(self)(self.q, {k: c * v for k, v in self.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def _fmt_key(self, k) -> str:
        return f"[{k}]"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for k, c in self.items():
            basis = self._fmt_key(k)
            if c == 1:
                term = basis
            elif c == -1:
                term = "-" + basis
            elif c.is_rational():
                term = f"{c.a}{basis}"
            else:
                term = f"({c}){basis}"
            parts.append(term)
        out = parts[0]
        for t in parts[1:]:
            out += " - " + t[1:] if t.startswith("-") else " + " + t
        return out

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self})"

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "terms": [self._key_json(k) | c.to_json() for k, c in self.items()],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))


class HallElement(_Sparse):
    """Finite linear combination of iso classes."""

    def _key_json(self, k) -> dict:
        return {"class": k}

    @classmethod
    def from_json(cls, data: Mapping | str) -> "HallElement":
        if isinstance(data, str):
            data = json.loads(data)
        q = int(data["q"])
        return cls(q, [(t["class"], HallCoef.from_json(t, q)) for t in data["terms"]])

    @classmethod
    def basis(cls, cid: str, q: int) -> "HallElement":
        return cls(q, {cid: 1})

    def grades(self) -> set[DimVector]:
        return {parse_class_id(k)[0] for k in self}


class TensorElement(_Sparse):
    """Finite linear combination of tensors ``[M1] x ... x [Mr]``."""

    @staticmethod
    def _norm_key(k):
        return tuple(k)

    @staticmethod
    def _sort(k):
        return _key_sort(k)

    def _fmt_key(self, k) -> str:
        return "(x)".join(f"[{c}]" for c in k)

    def _key_json(self, k) -> dict:
        return {"classes": list(k)}

    @classmethod
    def from_json(cls, data: Mapping | str) -> "TensorElement":
        if isinstance(data, str):
            data = json.loads(data)
        q = int(data["q"])
        return cls(q, [(tuple(t["classes"]), HallCoef.from_json(t, q)) for t in data["terms"]])

    def arity(self) -> int:
        return len(next(iter(self._terms))) if self._terms else 0


# -- per-dimension tables ---------------------------------------------------------------


_subspace_cache: dict = {}


def _subspace_list(F: FieldSpec, n: int, k: int) -> list:
    key = (F, n, k)
    hit = _subspace_cache.get(key)
    if hit is None:
        hit = []
        for rows, piv in la.subspaces(F, n, k):
            free = tuple(c for c in range(n) if c not in piv)
            hit.append((rows, piv, free))
        _subspace_cache[key] = hit
    return hit


def _apply(F: FieldSpec, x, v: Sequence[int]) -> list[int]:
    add, mul = F.add, F.mul
    out = []
    for row in x:
        acc = 0
        for a, b in zip(row, v):
            if a and b:
                acc = add(acc, mul(a, b))
        out.append(acc)
    return out


class _GradeTables:
    """Hall numbers of every class of one dimension vector ``gamma``."""

    def __init__(self):
        self.by_L: dict[str, dict[tuple[str, str], int]] = {}
        self.by_pair: dict[tuple[str, str], dict[str, int]] = {}


class HallAlgebra:
    """One run: a quiver over a field, with memoised structure constants."""

    def __init__(self, quiver: Quiver, field: FieldSpec, max_points: int | None = None, max_hom: int | None = None):
        self.quiver = quiver
        self.field = field
        self.q = field.q
        self.max_points = default_max_points() if max_points is None else max_points
        self.max_hom = DEFAULT_MAX_HOM if max_hom is None else max_hom
        self._grades: dict[DimVector, _GradeTables] = {}
        self._direct: dict[tuple[str, str], dict[str, int]] = {}
        self._antipodes: dict = {}
        self._direct_terms: dict[str, dict[tuple[str, str], Fraction]] = {}
        self._locks: dict = {}
        self._guard = threading.Lock()

    def __repr__(self) -> str:
        return f"HallAlgebra({self.quiver.label()} over {self.field})"

    # -- classes ----------------------------------------------------------------

    def census(self, alpha: Sequence[int]) -> Census:
        return orbit_census(self.quiver, tuple(alpha), self.field, self.max_points)

    def classes(self, alpha: Sequence[int]) -> list[IsoClass]:
        return self.census(alpha).classes

    def iso_class(self, cid: str) -> IsoClass:
        try:
            dim, _ = parse_class_id(cid)
        except InputError:
            raise UnknownClassId(cid) from None
        if len(dim) != self.quiver.n or any(d < 0 for d in dim):
            raise UnknownClassId(cid)
        c = self.census(dim).by_id.get(cid)
        if c is None:
            raise UnknownClassId(cid)
        return c

    def dim(self, cid: str) -> DimVector:
        return parse_class_id(cid)[0]

    def aut(self, cid: str) -> int:
        return self.iso_class(cid).aut_count

    @property
    def zero(self) -> str:
        return self.classes(self.quiver.zero())[0].id

    def simple(self, vertex: int | str) -> str:
        i = self.quiver.vertex_index(vertex)
        return self.classes(self.quiver.unit(i))[0].id

    def one(self) -> HallElement:
        return HallElement(self.q, {self.zero: 1})

    def basis(self, cid: str) -> HallElement:
        self.iso_class(cid)
        return HallElement(self.q, {cid: 1})

    def element(self, terms: Mapping[str, Rational | HallCoef]) -> HallElement:
        for cid in terms:
            self.iso_class(cid)
        return HallElement(self.q, terms)

    def euler(self, a: str | Sequence[int], b: str | Sequence[int]) -> int:
        da = self.dim(a) if isinstance(a, str) else tuple(a)
        db = self.dim(b) if isinstance(b, str) else tuple(b)
        return euler_form(self.quiver, da, db)

    def v(self, n: int) -> HallCoef:
        return HallCoef.v_power(n, self.q)

    def coef(self, x) -> HallCoef:
        return HallCoef.of(x, self.q)

    # -- memo plumbing ----------------------------------------------------------

    def _lock(self, key) -> threading.Lock:
        with self._guard:
            return self._locks.setdefault(key, threading.Lock())

    def grade_tables(self, gamma: Sequence[int]) -> _GradeTables:
        gamma = tuple(gamma)
        hit = self._grades.get(gamma)
        if hit is not None:
            return hit
        with self._lock(("grade", gamma)):
            hit = self._grades.get(gamma)
            if hit is None:
                hit = self._build_grade(gamma)
                self._grades[gamma] = hit
        return hit

    def _build_grade(self, gamma: DimVector) -> _GradeTables:
        Q, F = self.quiver, self.field
        top = self.census(gamma)
        guard = 1
        for g in gamma:
            guard *= sum(la.gaussian_binomial(g, k, F.q) for k in range(g + 1))
        if guard > self.max_points:
            raise SizeGuardExceeded(f"graded subspaces of dimension {fmt_dim(gamma)}", guard, self.max_points)
        tables = _GradeTables()
        splits = [eta for eta in product(*(range(g + 1) for g in gamma))]
        for L in top.classes:
            counts: dict[tuple[str, str], int] = {}
            x = L.rep.matrices
            for eta in splits:
                xi = tuple(g - e for g, e in zip(gamma, eta))
                sub_c, quo_c = self.census(eta), self.census(xi)
                sub_cd, quo_cd = codec(Q, eta, F), codec(Q, xi, F)
                for W in product(*(_subspace_list(F, g, e) for g, e in zip(gamma, eta))):
                    pieces = _restrict(F, Q, x, W)
                    if pieces is None:
                        continue
                    sub_m, quo_m = pieces
                    N = sub_c.classify_index(sub_cd.encode(sub_m)).id
                    M = quo_c.classify_index(quo_cd.encode(quo_m)).id
                    counts[(M, N)] = counts.get((M, N), 0) + 1
            tables.by_L[L.id] = counts
            for pair, c in counts.items():
                tables.by_pair.setdefault(pair, {})[L.id] = c
        return tables

    # -- Hall numbers --------------------------------------------------------------

    def _check_ids(self, *cids: str) -> None:
        for c in cids:
            self.iso_class(c)

    def hall_number(self, M: str, N: str, L: str) -> int:
        """``F_{MN}^L``: subrepresentations ``X`` of ``L`` with ``X ~ N``, ``L/X ~ M``."""
        self._check_ids(M, N, L)
        gamma = self.dim(L)
        if tuple(a + b for a, b in zip(self.dim(M), self.dim(N))) != gamma:
            return 0
        return self.grade_tables(gamma).by_L[L].get((M, N), 0)

    def product_terms(self, M: str, N: str) -> dict[str, int]:
        """``L -> F_{MN}^L`` for all ``L``."""
        self._check_ids(M, N)
        gamma = tuple(a + b for a, b in zip(self.dim(M), self.dim(N)))
        return dict(self.grade_tables(gamma).by_pair.get((M, N), {}))

    def hall_number_multi(self, parts: Sequence[str], M: str) -> int:
        """``F^M_{M1...Mr}``: filtrations of ``M`` with subquotients ``Mr, ..., M1`` from the bottom."""
        self._check_ids(*parts, M)
        if not parts:
            raise InputError("need at least one part")
        if len(parts) == 1:
            return int(parts[0] == M)
        total = 0
        dim_rest = tuple(sum(col) for col in zip(*(self.dim(p) for p in parts[1:])))
        if tuple(a + b for a, b in zip(self.dim(parts[0]), dim_rest)) != self.dim(M):
            return 0
        for (A, X), c in self.grade_tables(self.dim(M)).by_L[M].items():
            if A == parts[0] and self.dim(X) == dim_rest:
                total += c * self.hall_number_multi(parts[1:], X)
        return total

    # -- direct extension counting -------------------------------------------------------

    def gluing_indices(self, M: str, N: str) -> np.ndarray:
        """Point indices of all gluings ``[[y_N, d], [0, y_M]]`` as ``d`` ranges over D(alpha, beta)."""
        Q, F = self.quiver, self.field
        rm, rn = self.iso_class(M).rep, self.iso_class(N).rep
        alpha, beta = rm.dim, rn.dim
        gamma = tuple(a + b for a, b in zip(alpha, beta))
        cd = codec(Q, gamma, F)
        mats = []
        slots = []
        pos = 0
        for h, (s, t) in enumerate(Q.arrows):
            m = la.zeros(gamma[t], gamma[s])
            for r in range(beta[t]):
                for c in range(beta[s]):
                    m[r][c] = rn.matrices[h][r][c]
                for c in range(alpha[s]):
                    slots.append(pos + r * gamma[s] + beta[s] + c)
            for r in range(alpha[t]):
                for c in range(alpha[s]):
                    m[beta[t] + r][beta[s] + c] = rm.matrices[h][r][c]
            mats.append(m)
            pos += gamma[t] * gamma[s]
        count = F.q ** len(slots)
        if count > self.max_points:
            raise SizeGuardExceeded("gluing maps D(alpha, beta)", count, self.max_points)
        idx = np.array([cd.encode(mats)], dtype=np.int64)
        steps = np.arange(F.q, dtype=np.int64)
        for p in slots:
            idx = (idx[:, None] + steps[None, :] * cd.weights[p]).ravel()
        return idx

    def direct_counts(self, M: str, N: str) -> dict[str, int]:
        """``L -> |D(alpha, beta)_L|`` by enumerating every gluing."""
        key = (M, N)
        hit = self._direct.get(key)
        if hit is not None:
            return hit
        idx = self.gluing_indices(M, N)
        gamma = tuple(a + b for a, b in zip(self.dim(M), self.dim(N)))
        cen = self.census(gamma)
        counts = np.bincount(cen.positions(idx), minlength=len(cen))
        out = {cen.classes[i].id: int(c) for i, c in enumerate(counts.tolist()) if c}
        self._direct[key] = out
        return out

    def direct_ext_count(self, M: str, N: str, L: str) -> int:
        self._check_ids(L)
        if tuple(a + b for a, b in zip(self.dim(M), self.dim(N))) != self.dim(L):
            return 0
        return self.direct_counts(M, N).get(L, 0)

    # -- h numbers --------------------------------------------------------------------

    def h(self, L: str, M: str, N: str, route: str = "rp") -> Fraction:
        """``h_L^{MN} = |Ext^1(M, N)_L| / |Hom(M, N)|``."""
        if route == "rp":
            F = self.hall_number(M, N, L)
            return Fraction(F * self.aut(M) * self.aut(N), self.aut(L))
        if route == "direct":
            d = self.direct_ext_count(M, N, L)
            return Fraction(d, self.q ** inner(self.dim(M), self.dim(N)))
        raise InputError(f"unknown route {route!r}")

    def coproduct_terms(self, L: str, route: str = "rp") -> dict[tuple[str, str], Fraction]:
        """``(M, N) -> h_L^{MN}`` over all nonzero terms."""
        self._check_ids(L)
        gamma = self.dim(L)
        aL = self.aut(L)
        if route == "rp":
            out = {}
            for (M, N), F in self.grade_tables(gamma).by_L[L].items():
                out[(M, N)] = Fraction(F * self.aut(M) * self.aut(N), aL)
            return out
        if route == "direct":
            hit = self._direct_terms.get(L)
            if hit is None:
                # pure function of L, so a racing duplicate is harmless
                hit = self._direct_terms[L] = self._direct_coproduct(L, gamma)
            return dict(hit)
        raise InputError(f"unknown route {route!r}")

    def _direct_coproduct(self, L: str, gamma: DimVector) -> dict[tuple[str, str], Fraction]:
        out = {}
        for beta in product(*(range(g + 1) for g in gamma)):
            alpha = tuple(g - b for g, b in zip(gamma, beta))
            scale = self.q ** inner(alpha, beta)
            for cm in self.classes(alpha):
                for cn in self.classes(beta):
                    d = self.direct_counts(cm.id, cn.id).get(L, 0)
                    if d:
                        out[(cm.id, cn.id)] = Fraction(d, scale)
        return out

    # -- algebra operations ---------------------------------------------------------

    def _as_element(self, x: HallElement | str) -> HallElement:
        if isinstance(x, str):
            return self.basis(x)
        if x.q != self.q:
            raise InputError("element belongs to a different run")
        return x

    def multiply(self, x: HallElement | str, y: HallElement | str, twisted: bool = False) -> HallElement:
        x, y = self._as_element(x), self._as_element(y)
        acc: dict[str, HallCoef] = {}
        for M, cm in x.items():
            for N, cn in y.items():
                c = cm * cn
                if twisted:
                    c = c * self.v(self.euler(M, N))
                for L, F in self.product_terms(M, N).items():
                    acc[L] = acc.get(L, 0) + c * F
        return HallElement(self.q, acc)

    def multiply_many(self, factors: Sequence[HallElement | str], twisted: bool = False) -> HallElement:
        out = self.one()
        for f in factors:
            out = self.multiply(out, f, twisted)
        return out

    def comultiply(self, x: HallElement | str, twisted: bool = False, route: str = "rp") -> TensorElement:
        x = self._as_element(x)
        acc: dict[tuple[str, str], HallCoef] = {}
        for L, c in x.items():
            for (M, N), h in self.coproduct_terms(L, route).items():
                coef = c * h
                if twisted:
                    coef = coef * self.v(self.euler(M, N))
                acc[(M, N)] = acc.get((M, N), 0) + coef
        return TensorElement(self.q, acc)

    def comultiply_leg(self, t: TensorElement, leg: int, twisted: bool = False, route: str = "rp") -> TensorElement:
        """Apply the coproduct to one tensor leg."""
        acc: dict[tuple, HallCoef] = {}
        for key, c in t.items():
            for (M, N), h in self.coproduct_terms(key[leg], route).items():
                coef = c * h
                if twisted:
                    coef = coef * self.v(self.euler(M, N))
                new = key[:leg] + (M, N) + key[leg + 1:]
                acc[new] = acc.get(new, 0) + coef
        return TensorElement(self.q, acc)

    def r_fold_comultiply(self, x: HallElement | str, r: int, twisted: bool = False, route: str = "rp") -> TensorElement:
        """``delta^r``, an ``(r+1)``-fold tensor, expanding the last leg each step."""
        if r < 1:
            raise InputError("r must be >= 1")
        t = self.comultiply(x, twisted, route)
        for k in range(1, r):
            t = self.comultiply_leg(t, k, twisted, route)
        return t

    def tensor_multiply(self, s: TensorElement, t: TensorElement, twist: str = "green") -> TensorElement:
        """Product on ``H (x) H``.

        ``twist="green"`` uses ``(M1 x N1)(M2 x N2) = q^{-<M1, N2>} M1*M2 x N1*N2``;
        ``twist="none"`` is the plain componentwise product.
        """
        acc: dict[tuple, HallCoef] = {}
        for (M1, N1), c1 in s.items():
            for (M2, N2), c2 in t.items():
                c = c1 * c2
                if twist == "green":
                    c = c * Fraction(self.q) ** (-self.euler(M1, N2))
                left = self.product_terms(M1, M2)
                right = self.product_terms(N1, N2)
                for A, fa in left.items():
                    for B, fb in right.items():
                        acc[(A, B)] = acc.get((A, B), 0) + c * (fa * fb)
        return TensorElement(self.q, acc)

    # -- antipode ------------------------------------------------------------------------

    def _compositions(self, gamma: DimVector) -> Iterator[tuple[DimVector, ...]]:
        """Ordered sequences of nonzero dimension vectors summing to ``gamma``."""
        if not any(gamma):
            yield ()
            return
        for first in product(*(range(g + 1) for g in gamma)):
            if not any(first):
                continue
            rest = tuple(g - f for g, f in zip(gamma, first))
            for tail in self._compositions(rest):
                yield (first,) + tail

    def antipode_matrix(self, gamma: Sequence[int], twisted: bool = False, convention: str = "strict") -> dict[str, dict[str, Fraction]]:
        """``M -> sigma([M])`` for every class of dimension ``gamma``.

        Evaluates the defining alternating sum over ordered tuples of nonzero
        classes: ``h_M^{M1..Mr} F^N_{M1..Mr} = P[M] P[N] prod(a_Mi) / a_M``
        with ``P = [M1]*...*[Mr]``. The twisted weight is
        ``v^{2 sum_{i<j} <Mi, Mj>}`` (``convention="strict"``) or with
        ``i <= j`` (``convention="inclusive"``); it is always rational.
        """
        gamma = tuple(gamma)
        if convention not in ("strict", "inclusive"):
            raise InputError(f"unknown convention {convention!r}")
        key = (gamma, twisted, convention)
        hit = self._antipodes.get(key)
        if hit is not None:
            return hit
        with self._lock(("antipode",) + key):
            hit = self._antipodes.get(key)
            if hit is None:
                hit = self._antipode_grade(gamma, twisted, convention)
                self._antipodes[key] = hit
        return hit

    def _antipode_grade(self, gamma: DimVector, twisted: bool, convention: str) -> dict[str, dict[str, Fraction]]:
        top = self.classes(gamma)
        if not any(gamma):
            return {top[0].id: {top[0].id: Fraction(1)}}
        pos = {c.id: i for i, c in enumerate(top)}
        n = len(top)
        suffix: dict[tuple[str, ...], dict[str, int]] = {}

        def chain(ids: tuple[str, ...]) -> dict[str, int]:
            if len(ids) == 1:
                return {ids[0]: 1}
            hit = suffix.get(ids)
            if hit is None:
                acc: dict[str, int] = {}
                for X, cx in chain(ids[1:]).items():
                    for L, f in self.product_terms(ids[0], X).items():
                        acc[L] = acc.get(L, 0) + cx * f
                suffix[ids] = hit = acc
            return hit

        # sum_t w_t P_t[M] P_t[N], grouped by the q-exponent of the twist weight
        groups: dict[int, tuple[list, list]] = {}
        for dims in self._compositions(gamma):
            r = len(dims)
            k = 0
            if twisted:
                for i in range(r):
                    for j in range(i if convention == "inclusive" else i + 1, r):
                        k += euler_form(self.quiver, dims[i], dims[j])
            rows, weights = groups.setdefault(k, ([], []))
            for ids in product(*([c.id for c in self.classes(d)] for d in dims)):
                P = chain(ids)
                if not P:
                    continue
                w = (-1) ** r
                for c in ids:
                    w *= self.aut(c)
                vec = [0] * n
                for L, f in P.items():
                    vec[pos[L]] = f
                rows.append(vec)
                weights.append(w)
        out: dict[str, dict[str, Fraction]] = {M.id: {} for M in top}
        for k, (rows, weights) in groups.items():
            if not rows:
                continue
            G = exact_gram(rows, weights)
            scale = Fraction(self.q) ** k
            for i, M in enumerate(top):
                row = out[M.id]
                for j in np.flatnonzero(G[i]).tolist():
                    row[top[j].id] = row.get(top[j].id, 0) + scale * Fraction(int(G[i, j]), M.aut_count)
        return {m: {c: v for c, v in row.items() if v} for m, row in out.items()}

    def antipode(self, x: HallElement | str, twisted: bool = False, convention: str = "strict") -> HallElement:
        x = self._as_element(x)
        acc: dict[str, HallCoef] = {}
        for M, c in x.items():
            for N, val in self.antipode_matrix(self.dim(M), twisted, convention)[M].items():
                acc[N] = acc.get(N, 0) + c * val
        return HallElement(self.q, acc)

    # -- pairing -------------------------------------------------------------------------

    def hopf_pairing(self, x, y) -> HallCoef:
        """Green's pairing ``([M], [N]) = delta_{MN} / a_M``, extended to tensors legwise."""
        if isinstance(x, str):
            x = self.basis(x)
        if isinstance(y, str):
            y = self.basis(y)
        if type(x) is not type(y):
            raise InputError("cannot pair an element with a tensor")
        total = HallCoef.of(0, self.q)
        for k, c in x.items():
            d = y[k]
            if not d:
                continue
            keys = (k,) if isinstance(x, HallElement) else k
            denom = 1
            for cid in keys:
                denom *= self.aut(cid)
            total = total + c * d / denom
        return total


def exact_gram(rows: Sequence[Sequence[int]], weights: Sequence[int]) -> np.ndarray:
    """``P^T diag(w) P`` over the integers; int64 when provably safe."""
    big = max(max((abs(v) for r in rows for v in r), default=0), 1)
    wmax = max((abs(w) for w in weights), default=1)
    if big * big * wmax * len(rows) < 2**62:
        P = np.array(rows, dtype=np.int64)
        w = np.array(weights, dtype=np.int64)
        return (P * w[:, None]).T @ P
    P = np.array(rows, dtype=object)
    w = np.array(weights, dtype=object)
    return np.dot((P * w[:, None]).T, P)


def _restrict(F: FieldSpec, Q: Quiver, x, W) -> tuple[list, list] | None:
    """Sub and quotient matrices of ``x`` along a graded subspace ``W``, or None if unstable."""
    sub_m, quo_m = [], []
    for h, (s, t) in enumerate(Q.arrows):
        xs = x[h]
        Bs, piv_s, free_s = W[s]
        Bt, piv_t, free_t = W[t]
        cols = []
        for w in Bs:
            v = _apply(F, xs, w)
            coords = [v[p] for p in piv_t]
            if any(la.reduce_mod(F, v, Bt, piv_t)):
                return None
            cols.append(coords)
        sub_m.append(la.transpose(cols, len(Bs), len(piv_t)))
        qcols = []
        for c in free_s:
            v = [row[c] for row in xs]
            red = la.reduce_mod(F, v, Bt, piv_t)
            qcols.append([red[p] for p in free_t])
        quo_m.append(la.transpose(qcols, len(free_s), len(free_t)))
    return sub_m, quo_m
