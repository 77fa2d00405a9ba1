"""Dense linear algebra over GF(p^e) on element indices.

Matrices are lists of rows of element indices; the field supplies the
arithmetic. Everything here is desk-scale and pure Python.
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Iterator, Sequence

from .gf import FieldSpec

Matrix = list[list[int]]


def zeros(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(F: FieldSpec, A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    mul, add = F.mul, F.add
    out = []
    for row in A:
        new = [0] * cols
        for k in range(inner):
            a = row[k]
            if a:
                bk = B[k]
                for j in range(cols):
                    if bk[j]:
                        new[j] = add(new[j], mul(a, bk[j]))
        out.append(new)
    return out


def matsub(F: FieldSpec, A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    return [[F.sub(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def matadd(F: FieldSpec, A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    return [[F.add(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def scale(F: FieldSpec, c: int, A: Sequence[Sequence[int]]) -> Matrix:
    return [[F.mul(c, a) for a in row] for row in A]


def rref(F: FieldSpec, M: Sequence[Sequence[int]], ncols: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form; returns the nonzero rows and pivot columns."""
    rows = [list(r) for r in M]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    mul, sub, inv = F.mul, F.sub, F.inv
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        lead = inv(rows[r][c])
        if lead != 1:
            rows[r] = [mul(lead, x) for x in rows[r]]
        pr = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [sub(x, mul(f, y)) if y else x for x, y in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(F: FieldSpec, M: Sequence[Sequence[int]], ncols: int | None = None) -> int:
    return len(rref(F, M, ncols)[1])


def nullspace(F: FieldSpec, M: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """Basis of ``{v : M v = 0}`` as a list of vectors of length ``ncols``."""
    R, pivots = rref(F, M, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, pc in zip(R, pivots):
            if row[f]:
                v[pc] = F.neg(row[f])
        basis.append(v)
    return basis


def is_invertible(F: FieldSpec, A: Sequence[Sequence[int]]) -> bool:
    n = len(A)
    if n == 0:
        return True
    return rank(F, A, n) == n


def inverse(F: FieldSpec, A: Sequence[Sequence[int]]) -> Matrix:
    n = len(A)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(A)]
    R, pivots = rref(F, aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(R) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R]


def reduce_mod(F: FieldSpec, v: Sequence[int], R: Sequence[Sequence[int]], pivots: Sequence[int]) -> list[int]:
    """Subtract from ``v`` its component along the row space of an RREF basis."""
    v = list(v)
    for row, pc in zip(R, pivots):
        c = v[pc]
        if c:
            v = [F.sub(x, F.mul(c, y)) if y else x for x, y in zip(v, row)]
    return v


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def subspaces(F: FieldSpec, n: int, k: int) -> Iterator[tuple[Matrix, tuple[int, ...]]]:
    """All ``k``-dimensional subspaces of ``F^n`` as (RREF basis, pivots).

    Ordered by pivot pattern, then lexicographically by free entries.
    """
    if k == 0:
        yield [], ()
        return
    q = F.q
    for pivots in combinations(range(n), k):
        pset = set(pivots)
        slots = [(r, c) for r, pc in enumerate(pivots) for c in range(pc + 1, n) if c not in pset]
        for values in product(range(q), repeat=len(slots)):
            rows = [[0] * n for _ in range(k)]
            for r, pc in enumerate(pivots):
                rows[r][pc] = 1
            for (r, c), val in zip(slots, values):
                rows[r][c] = val
            yield rows, pivots


def transpose(A: Sequence[Sequence[int]], rows: int | None = None, cols: int | None = None) -> Matrix:
    if rows is None:
        rows = len(A)
    if cols is None:
        cols = len(A[0]) if A else 0
    return [[A[i][j] for i in range(rows)] for j in range(cols)]
