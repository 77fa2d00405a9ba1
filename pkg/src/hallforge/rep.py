"""Representations over finite fields, Hom/Ext, and the orbit census.

A point of ``E_alpha`` is identified with an integer index: entries are
listed arrow by arrow (declaration order), each matrix row-major, the
first entry most significant, each entry contributing its field index.
Index order is therefore the lexicographic enumeration order.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from itertools import product
from typing import Iterator, Sequence

import numpy as np

from . import linalg as la
from .errors import FieldMismatch, InputError, QuiverMismatch, SizeGuardExceeded
from .gf import FieldSpec, field_make
from .quiver import DimVector, Quiver, euler_form, fmt_dim

DEFAULT_MAX_POINTS = 10**7
DEFAULT_MAX_HOM = 10**6


def default_max_points() -> int:
    return int(os.environ.get("HALLFORGE_MAX_POINTS", DEFAULT_MAX_POINTS))


MatrixT = tuple[tuple[int, ...], ...]


def _freeze(m: Sequence[Sequence[int]]) -> MatrixT:
    return tuple(tuple(int(x) for x in row) for row in m)


@dataclass(frozen=True)
class Representation:
    quiver: Quiver
    field: FieldSpec
    dim: DimVector
    matrices: tuple[MatrixT, ...]  # one dim[t] x dim[s] matrix per arrow

    def __post_init__(self):
        self.quiver.check(self.dim)
        if len(self.matrices) != len(self.quiver.arrows):
            raise InputError("one matrix per arrow required")
        for (s, t), m in zip(self.quiver.arrows, self.matrices):
            if len(m) != self.dim[t] or any(len(row) != self.dim[s] for row in m):
                raise InputError(f"matrix for arrow {s}->{t} must be {self.dim[t]}x{self.dim[s]}")

    @classmethod
    def build(cls, quiver: Quiver, field: FieldSpec, dim: Sequence[int], matrices: Sequence[Sequence[Sequence[int]]]) -> "Representation":
        return cls(quiver, field, tuple(dim), tuple(_freeze(m) for m in matrices))

    @classmethod
    def zero(cls, quiver: Quiver, field: FieldSpec, dim: Sequence[int]) -> "Representation":
        dim = tuple(dim)
        return cls(quiver, field, dim, tuple(_freeze(la.zeros(dim[t], dim[s])) for s, t in quiver.arrows))

    @classmethod
    def simple(cls, quiver: Quiver, field: FieldSpec, vertex: int) -> "Representation":
        return cls.zero(quiver, field, quiver.unit(vertex))

    @property
    def total_dim(self) -> int:
        return sum(self.dim)

    @cached_property
    def index(self) -> int:
        return codec(self.quiver, self.dim, self.field).encode(self.matrices)

    def map(self, h: int) -> list[list[int]]:
        return [list(r) for r in self.matrices[h]]

    def direct_sum(self, other: "Representation") -> "Representation":
        _same_run(self, other)
        dim = tuple(a + b for a, b in zip(self.dim, other.dim))
        mats = []
        for h, (s, t) in enumerate(self.quiver.arrows):
            m = la.zeros(dim[t], dim[s])
            for r in range(self.dim[t]):
                for c in range(self.dim[s]):
                    m[r][c] = self.matrices[h][r][c]
            for r in range(other.dim[t]):
                for c in range(other.dim[s]):
                    m[self.dim[t] + r][self.dim[s] + c] = other.matrices[h][r][c]
            mats.append(m)
        return Representation.build(self.quiver, self.field, dim, mats)

    def base_change(self, big: FieldSpec) -> "Representation":
        """The same matrices read in an extension field."""
        emb = embedding(self.field, big)
        mats = [[[emb[x] for x in row] for row in m] for m in self.matrices]
        return Representation.build(self.quiver, big, self.dim, mats)

    def __repr__(self) -> str:
        fmt = self.field.format
        mats = "; ".join(
            "[" + ",".join("(" + " ".join(fmt(x) for x in row) + ")" for row in m) + "]" for m in self.matrices
        )
        return f"Rep({fmt_dim(self.dim)} over {self.field}: {mats})"


def _same_run(M: Representation, N: Representation) -> None:
    if M.quiver != N.quiver:
        raise QuiverMismatch("representations of different quivers")
    if M.field != N.field:
        raise FieldMismatch(f"representations over {M.field} and {N.field}")


_embed_cache: dict[tuple[FieldSpec, FieldSpec], list[int]] = {}


def embedding(small: FieldSpec, big: FieldSpec) -> list[int]:
    """Index map of a field embedding ``small -> big`` (sends t to the least root)."""
    if small == big:
        return list(range(small.q))
    key = (small, big)
    if key in _embed_cache:
        return _embed_cache[key]
    if small.p != big.p or big.e % small.e:
        raise FieldMismatch(f"{small} does not embed in {big}")
    if small.e == 1:
        emb = list(range(small.p))
    else:
        def evaluate(coeffs, x):
            acc = 0
            for c in reversed(coeffs):
                acc = big.add(big.mul(acc, x), c)
            return acc

        root = next(x for x in range(big.q) if evaluate(small.modulus, x) == 0)
        powers = [1]
        for _ in range(1, small.e):
            powers.append(big.mul(powers[-1], root))
        emb = []
        for i in range(small.q):
            acc = 0
            for c, pw in zip(small.coeffs(i), powers):
                if c:
                    acc = big.add(acc, big.mul(c, pw))
            emb.append(acc)
    _embed_cache[key] = emb
    return emb


# -- point codec --------------------------------------------------------------


class PointCodec:
    """Bijection between points of ``E_alpha`` over a field and integers."""

    def __init__(self, quiver: Quiver, alpha: DimVector, field: FieldSpec):
        self.quiver = quiver
        self.alpha = alpha
        self.field = field
        self.shapes = [(alpha[t], alpha[s]) for s, t in quiver.arrows]
        self.n_entries = sum(r * c for r, c in self.shapes)
        self.npoints = field.q**self.n_entries
        q = field.q
        self.weights = [q ** (self.n_entries - 1 - j) for j in range(self.n_entries)]

    def encode(self, matrices: Sequence[Sequence[Sequence[int]]]) -> int:
        idx = 0
        q = self.field.q
        for m in matrices:
            for row in m:
                for x in row:
                    idx = idx * q + x
        return idx

    def flat(self, index: int) -> list[int]:
        q = self.field.q
        out = [0] * self.n_entries
        for j in range(self.n_entries - 1, -1, -1):
            index, out[j] = divmod(index, q)
        return out

    def unflat(self, entries: Sequence[int]) -> tuple[MatrixT, ...]:
        mats = []
        pos = 0
        for r, c in self.shapes:
            mats.append(tuple(tuple(entries[pos + i * c: pos + (i + 1) * c]) for i in range(r)))
            pos += r * c
        return tuple(mats)

    def decode(self, index: int) -> tuple[MatrixT, ...]:
        return self.unflat(self.flat(index))

    def rep(self, index: int) -> Representation:
        return Representation(self.quiver, self.field, self.alpha, self.decode(index))

    def offsets(self) -> list[int]:
        """Flat offset of each arrow's matrix."""
        out, pos = [], 0
        for r, c in self.shapes:
            out.append(pos)
            pos += r * c
        return out


_codecs: dict = {}


def codec(quiver: Quiver, alpha: DimVector, field: FieldSpec) -> PointCodec:
    key = (quiver, tuple(alpha), field)
    c = _codecs.get(key)
    if c is None:
        c = _codecs[key] = PointCodec(quiver, tuple(alpha), field)
    return c


def enumerate_reps(quiver: Quiver, alpha: Sequence[int], field: FieldSpec, max_points: int | None = None) -> Iterator[Representation]:
    quiver.check(alpha)
    cd = codec(quiver, tuple(alpha), field)
    limit = default_max_points() if max_points is None else max_points
    if cd.npoints > limit:
        raise SizeGuardExceeded(f"points of E_{fmt_dim(alpha)} over {field}", cd.npoints, limit)
    return (cd.rep(i) for i in range(cd.npoints))


def group_order(alpha: Sequence[int], q: int) -> int:
    """``|G_alpha(F_q)| = prod_i |GL_{alpha_i}(F_q)|``."""
    out = 1
    for n in alpha:
        for j in range(n):
            out *= q**n - q**j
    return out


# -- Hom and Ext --------------------------------------------------------------


@dataclass(frozen=True)
class HomSpace:
    source: Representation
    target: Representation
    basis: tuple[tuple[MatrixT, ...], ...]  # per basis element: one dim_N[i] x dim_M[i] matrix per vertex

    @property
    def dim(self) -> int:
        return len(self.basis)

    def element(self, coeffs: Sequence[int]) -> list[list[list[int]]]:
        F = self.source.field
        M, N = self.source, self.target
        out = [la.zeros(N.dim[i], M.dim[i]) for i in range(M.quiver.n)]
        for c, b in zip(coeffs, self.basis):
            if not c:
                continue
            for i, bi in enumerate(b):
                oi = out[i]
                for r, row in enumerate(bi):
                    for k, x in enumerate(row):
                        if x:
                            oi[r][k] = F.add(oi[r][k], F.mul(c, x))
        return out

    def elements(self) -> Iterator[list[list[list[int]]]]:
        for coeffs in product(range(self.source.field.q), repeat=self.dim):
            yield self.element(coeffs)


def _hom_system(M: Representation, N: Representation) -> tuple[list[list[int]], list[tuple[int, int, int]]]:
    """Linear map ``f -> (f_t x_h - y_h f_s)_h`` as a matrix over the field.

    Columns index the entries of ``f_i`` (``N.dim[i] x M.dim[i]``), vertex
    by vertex, row-major.
    """
    F = M.field
    a, b = M.dim, N.dim
    var = []
    offset = {}
    for i in range(M.quiver.n):
        offset[i] = len(var)
        for r in range(b[i]):
            for k in range(a[i]):
                var.append((i, r, k))
    nvar = len(var)
    rows = []
    for h, (s, t) in enumerate(M.quiver.arrows):
        x = M.matrices[h]  # a[t] x a[s]
        y = N.matrices[h]  # b[t] x b[s]
        for r in range(b[t]):
            for c in range(a[s]):
                row = [0] * nvar
                # sum_k f_t[r,k] x[k,c]
                for k in range(a[t]):
                    if x[k][c]:
                        j = offset[t] + r * a[t] + k
                        row[j] = F.add(row[j], x[k][c])
                # - sum_k y[r,k] f_s[k,c]
                for k in range(b[s]):
                    if y[r][k]:
                        j = offset[s] + k * a[s] + c
                        row[j] = F.sub(row[j], y[r][k])
                rows.append(row)
    return rows, var


_hom_cache: dict = {}
_hom_lock = threading.Lock()


def hom_space(M: Representation, N: Representation) -> HomSpace:
    _same_run(M, N)
    key = (M, N)
    hit = _hom_cache.get(key)
    if hit is not None:
        return hit
    rows, var = _hom_system(M, N)
    nvar = len(var)
    basis_vecs = la.nullspace(M.field, rows, nvar) if nvar else []
    basis = []
    for v in basis_vecs:
        mats = [la.zeros(N.dim[i], M.dim[i]) for i in range(M.quiver.n)]
        for val, (i, r, k) in zip(v, var):
            mats[i][r][k] = val
        basis.append(tuple(_freeze(m) for m in mats))
    hs = HomSpace(M, N, tuple(basis))
    with _hom_lock:
        if len(_hom_cache) > 200_000:
            _hom_cache.clear()
        _hom_cache[key] = hs
    return hs


def hom_dim(M: Representation, N: Representation) -> int:
    return hom_space(M, N).dim


def ext_dim(M: Representation, N: Representation) -> int:
    """``dim Ext^1(M, N) = dim Hom(M, N) - <dim M, dim N>``."""
    return hom_dim(M, N) - euler_form(M.quiver, M.dim, N.dim)


def ext_dim_cokernel(M: Representation, N: Representation) -> int:
    """Ext^1 as the cokernel dimension of the same linear map (independent route)."""
    _same_run(M, N)
    rows, var = _hom_system(M, N)
    d_dim = len(rows)
    r = la.rank(M.field, rows, len(var)) if var and rows else 0
    return d_dim - r


def _is_iso_map(F: FieldSpec, f: Sequence[Sequence[Sequence[int]]]) -> bool:
    return all(la.is_invertible(F, fi) for fi in f)


def is_isomorphic(M: Representation, N: Representation, max_hom: int = DEFAULT_MAX_HOM) -> bool:
    _same_run(M, N)
    if M.dim != N.dim:
        return False
    if M == N:
        return True
    H = hom_space(M, N)
    d = H.dim
    if not (d == hom_dim(M, M) == hom_dim(N, N)):
        return False
    count = M.field.q**d
    if count > max_hom:
        raise SizeGuardExceeded("elements of Hom(M,N)", count, max_hom)
    return any(_is_iso_map(M.field, f) for f in H.elements())


# -- Frobenius twist, fields of definition -----------------------------------


def frobenius_twist(M: Representation, r: int = 1, q: int | None = None) -> Representation:
    """Raise every entry to the power ``q**r`` (``q`` defaults to the characteristic)."""
    F = M.field
    base_e = 1 if q is None else _log_p(F, q)
    times = base_e * r
    mats = [[[F.frob(x, times) for x in row] for row in m] for m in M.matrices]
    return Representation.build(M.quiver, F, M.dim, mats)


def _log_p(F: FieldSpec, q: int) -> int:
    e, x = 0, q
    while x % F.p == 0 and x > 1:
        x //= F.p
        e += 1
    if x != 1 or F.e % e:
        raise InputError(f"q={q} is not a subfield size of {F}")
    return e


def minimal_field_of_definition(M: Representation, q: int | None = None, max_hom: int = DEFAULT_MAX_HOM) -> int:
    """Smallest ``r`` with ``M`` isomorphic to its ``q**r`` twist."""
    base_e = 1 if q is None else _log_p(M.field, q)
    s = M.field.e // base_e
    for r in range(1, s + 1):
        if s % r == 0 and is_isomorphic(M, frobenius_twist(M, r, M.field.p**base_e), max_hom):
            return r
    raise AssertionError("q^s twist must be the identity")  # pragma: no cover


# -- indecomposability ---------------------------------------------------------


def _compose(F: FieldSpec, f, g):
    return [la.matmul(F, fi, gi) for fi, gi in zip(f, g)]


def _fitting_splits(F: FieldSpec, f, total: int) -> bool:
    """True when ``f^total`` is neither nilpotent nor invertible."""
    g = f
    k = 1
    while k < total:
        g = _compose(F, g, g)
        k *= 2
    zero = all(all(x == 0 for row in gi for x in row) for gi in g)
    return not zero and not _is_iso_map(F, g)


def is_indecomposable(M: Representation, max_hom: int = DEFAULT_MAX_HOM) -> bool:
    if M.total_dim == 0:
        return False
    F = M.field
    E = hom_space(M, M)
    # Fitting: any endomorphism that is neither nilpotent nor invertible splits M.
    for i, b in enumerate(E.basis):
        if _fitting_splits(F, [list(map(list, bi)) for bi in b], M.total_dim):
            return False
        for b2 in E.basis[i + 1:]:
            s = [la.matadd(F, x, y) for x, y in zip(b, b2)]
            if _fitting_splits(F, s, M.total_dim):
                return False
    count = F.q**E.dim
    if count > max_hom:
        raise SizeGuardExceeded("elements of End(M)", count, max_hom)
    ident = [la.identity(n) for n in M.dim]
    zero = [la.zeros(n, n) for n in M.dim]
    for f in E.elements():
        if f == ident or f == zero:
            continue
        if _compose(F, f, f) == f:
            return False
    return True


def is_absolutely_indecomposable(M: Representation, max_hom: int = DEFAULT_MAX_HOM) -> bool:
    d = hom_dim(M, M)
    if not is_indecomposable(M, max_hom):
        return False
    F = M.field
    for t in range(2, d + 1):
        big = field_make(F.p, F.e * t)
        if not is_indecomposable(M.base_change(big), max_hom):
            return False
    return True


# -- orbit census ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class IsoClass:
    id: str
    rep: Representation
    orbit_size: int
    aut_count: int
    position: int = dc_field(default=0)  # index within its census

    @property
    def dim(self) -> DimVector:
        return self.rep.dim

    @property
    def canonical_index(self) -> int:
        return self.rep.index

    @cached_property
    def hom_fingerprint(self) -> tuple[int, ...]:
        Q, F = self.rep.quiver, self.rep.field
        probes = [hom_dim(self.rep, Representation.simple(Q, F, i)) for i in range(Q.n)]
        return tuple(probes) + (hom_dim(self.rep, self.rep),)

    def __repr__(self) -> str:
        return f"IsoClass({self.id}, orbit={self.orbit_size}, a={self.aut_count})"


def class_id(alpha: Sequence[int], index: int) -> str:
    return f"{fmt_dim(alpha)}:{index}"


def parse_class_id(cid: str) -> tuple[DimVector, int]:
    try:
        dims, idx = cid.rsplit(":", 1)
        return tuple(int(x) for x in dims.split(",")), int(idx)
    except ValueError:
        raise InputError(f"malformed class id {cid!r}") from None


def _gl_generators(F: FieldSpec, n: int) -> list[list[list[int]]]:
    """A generating set of GL_n(F)."""
    if n == 0:
        return []
    gens = []
    d = la.identity(n)
    d[0][0] = F.primitive_element
    if F.q > 2:
        gens.append(d)
    if n >= 2:
        swap = la.identity(n)
        swap[0][0] = swap[1][1] = 0
        swap[0][1] = swap[1][0] = 1
        gens.append(swap)
        if n >= 3:
            cyc = la.zeros(n, n)
            for i in range(n):
                cyc[(i + 1) % n][i] = 1
            gens.append(cyc)
        tv = la.identity(n)
        tv[0][1] = 1
        gens.append(tv)
    return gens


def _action_matrix(cd: PointCodec, vertex: int, g, ginv) -> np.ndarray:
    """The F_p-linear action of ``g`` at ``vertex`` on base-p digit vectors."""
    F = cd.field
    p, e = F.p, F.e
    n = cd.n_entries
    D = n * e
    A = np.zeros((D, D), dtype=np.int64)
    for j in range(n):
        for k in range(e):
            entries = [0] * n
            entries[j] = p**k
            mats = [list(map(list, m)) for m in cd.unflat(entries)]
            out = []
            for h, (s, t) in enumerate(cd.quiver.arrows):
                x = mats[h]
                if t == vertex and cd.alpha[t]:
                    x = la.matmul(F, g, x)
                if s == vertex and cd.alpha[s]:
                    x = la.matmul(F, x, ginv) if x else x
                out.extend(v for row in x for v in row)
            d_in = (n - 1 - j) * e + k
            for jj, val in enumerate(out):
                if val:
                    for kk, c in enumerate(F.coeffs(val)):
                        A[d_in, (n - 1 - jj) * e + kk] = c
    return A


def _digit_blocks(p: int, D: int) -> tuple[int, np.ndarray]:
    b = 1
    while b < D and p ** (b + 1) <= 1 << 16:
        b += 1
    B = p**b
    vals = np.arange(B)
    table = np.stack([(vals // p**k) % p for k in range(b)], axis=1).astype(np.float32)
    return b, table


def _generator_perms(cd: PointCodec, chunk: int = 1 << 20) -> list[np.ndarray]:
    """Index permutations of E_alpha induced by a generating set of G_alpha.

    Each generator acts F_p-linearly on base-p digit vectors, so images are
    computed blockwise: table decode, one exact float32 matmul, a mod-p
    table, and a blockwise re-encode.
    """
    N = cd.npoints
    F = cd.field
    p = F.p
    D = cd.n_entries * F.e
    idx_dtype = np.int32 if N < 2**31 else np.int64
    mats = []
    for v in range(cd.quiver.n):
        for g in _gl_generators(F, cd.alpha[v]):
            A = _action_matrix(cd, v, g, la.inverse(F, g))
            if not np.array_equal(A, np.eye(D, dtype=np.int64)):
                mats.append(A.astype(np.float32))
    if not mats:
        return []
    b, table = _digit_blocks(p, D)
    B = p**b
    nblocks = -(-D // b)
    bound = D * (p - 1) ** 2
    modtab = (np.arange(bound + 1) % p).astype(np.float32)
    small = np.uint8 if bound < 256 else np.uint16
    weights = (p ** np.arange(b)).astype(np.float32)
    perms = [np.empty(N, dtype=idx_dtype) for _ in mats]
    for start in range(0, N, chunk):
        stop = min(N, start + chunk)
        x = np.arange(start, stop, dtype=np.int64)
        digits = np.zeros((stop - start, nblocks * b), dtype=np.float32)
        for j in range(nblocks):
            digits[:, j * b:(j + 1) * b] = table[(x // B**j) % B]
        digits = digits[:, :D]
        for A, perm in zip(mats, perms):
            img = modtab[(digits @ A).astype(small)]
            out = np.zeros(stop - start, dtype=np.int64)
            for j in range(nblocks):
                blk = img[:, j * b:(j + 1) * b]
                out += (blk @ weights[: blk.shape[1]]).astype(np.int64) * B**j
            perm[start:stop] = out
    return perms


def _orbit_labels(cd: PointCodec) -> np.ndarray:
    """Least point index in each orbit, for every point (min-label propagation)."""
    N = cd.npoints
    idx_dtype = np.int32 if N < 2**31 else np.int64
    if N == 1:
        return np.zeros(1, dtype=idx_dtype)
    perms = _generator_perms(cd)
    labels = np.arange(N, dtype=idx_dtype)
    while perms:
        before = labels.copy()
        for perm in perms:
            np.minimum(labels, labels[perm], out=labels)
        while True:
            jumped = labels[labels]
            if np.array_equal(jumped, labels):
                break
            labels = jumped
        if np.array_equal(labels, before):
            break
    return labels


class Census:
    """Iso classes of ``E_alpha`` over one field, with a point classifier."""

    def __init__(self, quiver: Quiver, alpha: DimVector, field: FieldSpec, labels: np.ndarray):
        self.quiver = quiver
        self.alpha = alpha
        self.field = field
        self.codec = codec(quiver, alpha, field)
        self.labels = labels
        N = len(labels)
        roots = np.flatnonzero(labels == np.arange(N, dtype=labels.dtype))
        counts = np.bincount(labels, minlength=N)[roots] if N > 1 else np.array([1])
        g = group_order(alpha, field.q)
        self.roots = roots
        self.classes: list[IsoClass] = []
        for pos, (root, size) in enumerate(zip(roots.tolist(), counts.tolist())):
            aut, rem = divmod(g, size)
            if rem:
                raise AssertionError(f"orbit size {size} does not divide |G| = {g}")
            self.classes.append(IsoClass(class_id(alpha, root), self.codec.rep(root), size, aut, pos))
        self.by_id = {c.id: c for c in self.classes}
        self._root_pos = {int(r): i for i, r in enumerate(roots.tolist())}

    def __len__(self) -> int:
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    @property
    def group_order(self) -> int:
        return group_order(self.alpha, self.field.q)

    def classify_index(self, index: int) -> IsoClass:
        return self.classes[self._root_pos[int(self.labels[index])]]

    def classify(self, M: Representation) -> IsoClass:
        if M.dim != self.alpha or M.field != self.field:
            raise InputError("representation does not belong to this census")
        return self.classify_index(self.codec.encode(M.matrices))

    def positions(self, indices: np.ndarray) -> np.ndarray:
        """Vectorised: class positions of many point indices."""
        return np.searchsorted(self.roots, self.labels[indices])


_census_cache: dict = {}
_census_locks: dict = {}
_census_guard = threading.Lock()


def orbit_census(quiver: Quiver, alpha: Sequence[int], field: FieldSpec, max_points: int | None = None) -> Census:
    quiver.check(alpha)
    alpha = tuple(alpha)
    cd = codec(quiver, alpha, field)
    limit = default_max_points() if max_points is None else max_points
    # guard before the cache, so the outcome never depends on what ran earlier
    if cd.npoints > limit:
        raise SizeGuardExceeded(f"points of E_{fmt_dim(alpha)} over {field}", cd.npoints, limit)
    key = (quiver, alpha, field)
    hit = _census_cache.get(key)
    if hit is not None:
        return hit
    with _census_guard:
        lock = _census_locks.setdefault(key, threading.Lock())
    with lock:
        hit = _census_cache.get(key)
        if hit is None:
            hit = _census_cache[key] = Census(quiver, alpha, field, _orbit_labels(cd))
    return hit


def clear_caches() -> None:
    _census_cache.clear()
    _hom_cache.clear()
