"""Brute-force reference implementations over prime fields.

Nothing here imports hallforge's linear algebra or census code. Orbits are
computed by applying every group element, submodules by listing every
subspace tuple, so these are only usable on tiny dimension vectors.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product


def all_matrices(rows, cols, p):
    for entries in product(range(p), repeat=rows * cols):
        yield tuple(tuple(entries[r * cols:(r + 1) * cols]) for r in range(rows))


def mat_mul(A, B, p):
    if not A:
        return ()
    inner = len(B)
    cols = len(B[0]) if B else 0
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(inner)) % p for j in range(cols)) for i in range(len(A)))


def det(A, p):
    n = len(A)
    if n == 0:
        return 1
    if n == 1:
        return A[0][0] % p
    total = 0
    for j in range(n):
        minor = tuple(tuple(r[:j] + r[j + 1:]) for r in A[1:])
        total += (-1) ** j * A[0][j] * det(minor, p)
    return total % p


def mat_inv(A, p):
    n = len(A)
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(A)]
    for c in range(n):
        piv = next(i for i in range(c, n) if aug[i][c] % p)
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = pow(aug[c][c], p - 2, p)
        aug[c] = [x * inv % p for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [(x - f * y) % p for x, y in zip(aug[i], aug[c])]
    return tuple(tuple(r[n:]) for r in aug)


@lru_cache(maxsize=None)
def gl(n, p):
    """Invertible matrices paired with their inverses."""
    return tuple((g, mat_inv(g, p)) for g in all_matrices(n, n, p) if det(g, p))


@lru_cache(maxsize=None)
def group(alpha, p):
    return list(product(*(gl(a, p) for a in alpha)))


def act(g, x, arrows, p):
    out = []
    for (s, t), m in zip(arrows, x):
        out.append(mat_mul(mat_mul(g[t][0], m, p), g[s][1], p) if m and m[0] else m)
    return tuple(out)


def orbit(x, arrows, alpha, p):
    return {act(g, x, arrows, p) for g in group(tuple(alpha), p)}


def canon(x, arrows, alpha, p):
    """Smallest point in the orbit of ``x``."""
    return min(orbit(x, arrows, alpha, p))


def points(arrows, alpha, p):
    spaces = [all_matrices(alpha[t], alpha[s], p) for s, t in arrows]
    return list(product(*[list(sp) for sp in spaces]))


def orbits(arrows, alpha, p):
    """canonical point -> orbit size."""
    seen, out = set(), {}
    for x in points(arrows, alpha, p):
        if x in seen:
            continue
        orb = orbit(x, arrows, alpha, p)
        seen |= orb
        out[min(orb)] = len(orb)
    return out


# -- subspaces and submodules ------------------------------------------------------------


def span(vectors, n, p):
    out = {tuple([0] * n)}
    for v in vectors:
        out = {tuple((a + c * b) % p for a, b in zip(u, v)) for u in out for c in range(p)}
    return frozenset(out)


@lru_cache(maxsize=None)
def all_subspaces(n, p):
    vecs = list(product(range(p), repeat=n))
    subs = {span([], n, p)}
    frontier = set(subs)
    while frontier:
        new = set()
        for S in frontier:
            for v in vecs:
                if v not in S:
                    T = span(basis_of(S, n, p) + [v], n, p)
                    if T not in subs:
                        new.add(T)
        subs |= new
        frontier = new
    return sorted(subs, key=lambda S: (len(S), sorted(S)))


def basis_of(S, n, p):
    basis = []
    cur = span([], n, p)
    for v in sorted(S):
        if v not in cur:
            basis.append(v)
            cur = span(basis, n, p)
    return basis


def apply(m, v, p):
    return tuple(sum(r[k] * v[k] for k in range(len(v))) % p for r in m)


def solve(B, v, p):
    """Coordinates of ``v`` in the basis ``B`` (columns), by exhaustive search."""
    for c in product(range(p), repeat=len(B)):
        w = tuple(sum(ci * b[k] for ci, b in zip(c, B)) % p for k in range(len(v)))
        if w == v:
            return c
    raise ValueError("not in span")


def sub_and_quotient(x, arrows, gamma, U, p):
    """Matrices of the restriction to ``U`` and of the quotient, in chosen bases."""
    bases, full = [], []
    for i, n in enumerate(gamma):
        b = basis_of(U[i], n, p)
        ext = list(b)
        cur = span(ext, n, p)
        for e in range(n):
            v = tuple(int(k == e) for k in range(n))
            if v not in cur:
                ext.append(v)
                cur = span(ext, n, p)
        bases.append(b)
        full.append(ext)
    sub, quo = [], []
    for (s, t), m in zip(arrows, x):
        ks, kt = len(bases[s]), len(bases[t])
        cols = [solve(full[t], apply(m, v, p), p) for v in full[s]] if gamma[s] else []
        sub.append(tuple(tuple(cols[c][r] for c in range(ks)) for r in range(kt)))
        quo.append(tuple(tuple(cols[c][r] for c in range(ks, gamma[s])) for r in range(kt, gamma[t])))
    return tuple(sub), tuple(quo)


def hall_numbers(arrows, gamma, x, p):
    """``((alpha, quotient canon), (beta, sub canon)) -> count`` over all subrepresentations of ``x``.

    Dimension vectors are part of the key: points of different grades can
    have identical (empty) matrices.
    """
    out = {}
    for U in product(*(all_subspaces(n, p) for n in gamma)):
        ok = all(apply(m, v, p) in U[t] for (s, t), m in zip(arrows, x) for v in U[s])
        if not ok:
            continue
        sub, quo = sub_and_quotient(x, arrows, gamma, U, p)
        beta = tuple(len(basis_of(S, n, p)) for S, n in zip(U, gamma))
        alpha = tuple(g - b for g, b in zip(gamma, beta))
        key = ((alpha, canon(quo, arrows, alpha, p)), (beta, canon(sub, arrows, beta, p)))
        out[key] = out.get(key, 0) + 1
    return out


def hom_count(x, y, arrows, alpha, beta, p):
    """|Hom(X, Y)| by listing every vertexwise linear map."""
    total = 0
    for f in product(*(list(all_matrices(beta[i], alpha[i], p)) for i in range(len(alpha)))):
        if all(mat_mul(f[t], mx, p) == mat_mul(my, f[s], p)
               for (s, t), mx, my in zip(arrows, x, y)
               if beta[t] and alpha[s]):
            total += 1
    return total
