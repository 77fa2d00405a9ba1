import json
from itertools import product

import pytest
from hypothesis import given, strategies as st

from hallforge import linalg as la
from hallforge.errors import InputError, QuiverMismatch
from hallforge.gf import field_make
from hallforge.quiver import (
    Quiver,
    a2,
    builtin,
    euler_form,
    fmt_dim,
    jordan,
    kronecker,
    parse_dim,
    space_dims,
    symmetric_form,
    twist_form,
)

FIELDS = [field_make(2), field_make(3), field_make(2, 2)]


def matrices(F, max_rows=3, max_cols=4):
    return st.tuples(st.integers(1, max_rows), st.integers(1, max_cols)).flatmap(
        lambda rc: st.lists(st.lists(st.integers(0, F.q - 1), min_size=rc[1], max_size=rc[1]), min_size=rc[0], max_size=rc[0])
    )


@given(st.sampled_from(FIELDS).flatmap(lambda F: st.tuples(st.just(F), matrices(F))))
def test_rank_nullity_and_kernel(case):
    F, M = case
    n = len(M[0])
    N = la.nullspace(F, M, n)
    assert la.rank(F, M, n) + len(N) == n
    for v in N:
        assert all(row[0] == 0 for row in la.matmul(F, M, [[c] for c in v]))


@given(st.sampled_from(FIELDS).flatmap(lambda F: st.tuples(st.just(F), matrices(F, 2, 3))))
def test_kernel_size_brute_force(case):
    F, M = case
    n = len(M[0])
    zero = [[0] for _ in M]
    count = sum(1 for v in product(range(F.q), repeat=n) if la.matmul(F, M, [[c] for c in v]) == zero)
    assert count == F.q ** len(la.nullspace(F, M, n))


@pytest.mark.parametrize("F", FIELDS, ids=repr)
@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_subspaces_count_and_distinct(F, n):
    for k in range(n + 1):
        subs = [tuple(map(tuple, rows)) for rows, _ in la.subspaces(F, n, k)]
        assert len(subs) == len(set(subs)) == la.gaussian_binomial(n, k, F.q)
        for rows in subs:
            assert la.rank(F, rows, n) == k


def test_gaussian_binomial_values():
    assert la.gaussian_binomial(2, 1, 2) == 3
    assert la.gaussian_binomial(4, 2, 2) == 35
    assert la.gaussian_binomial(3, 1, 3) == 13
    assert la.gaussian_binomial(3, 4, 3) == 0


@given(st.sampled_from(FIELDS).flatmap(lambda F: st.tuples(st.just(F), st.lists(st.lists(st.integers(0, F.q - 1), min_size=2, max_size=2), min_size=2, max_size=2))))
def test_inverse_roundtrip(case):
    F, A = case
    if la.is_invertible(F, A):
        assert la.matmul(F, A, la.inverse(F, A)) == la.identity(2)
    else:
        with pytest.raises(ZeroDivisionError):
            la.inverse(F, A)


# -- quivers -------------------------------------------------------------------


def test_euler_examples():
    assert euler_form(a2(), (1, 0), (0, 1)) == -1
    assert euler_form(jordan(), (1,), (1,)) == 0
    assert euler_form(kronecker(), (1, 1), (1, 1)) == 0


def test_twist_examples():
    assert twist_form(a2(), (1, 0), (0, 1)) == 1
    assert twist_form(jordan(), (1,), (1,)) == 2
    assert twist_form(a2(), (1, 1), (1, 1)) == 3


def test_space_dims_examples():
    assert space_dims(a2(), (1, 1)) == (1, 2)
    assert space_dims(kronecker(), (1, 1)) == (2, 2)
    assert space_dims(jordan(), (2,)) == (4, 4)


QUIVERS = [a2(), jordan(), kronecker(), builtin("A3")]


@given(st.sampled_from(QUIVERS), st.data())
def test_forms_bilinear_and_related(Q, data):
    vec = st.lists(st.integers(0, 4), min_size=Q.n, max_size=Q.n).map(tuple)
    a, b, c = data.draw(vec), data.draw(vec), data.draw(vec)
    ab = tuple(x + y for x, y in zip(a, b))
    assert euler_form(Q, ab, c) == euler_form(Q, a, c) + euler_form(Q, b, c)
    assert euler_form(Q, c, ab) == euler_form(Q, c, a) + euler_form(Q, c, b)
    assert twist_form(Q, a, b) + euler_form(Q, a, b) == 2 * sum(x * y for x, y in zip(a, b))
    assert symmetric_form(Q, a, b) == euler_form(Q, a, b) + euler_form(Q, b, a)


def test_json_roundtrip(tmp_path):
    Q = Quiver.from_json({"vertices": ["a", "b", "c"], "arrows": [{"src": "a", "tgt": "b"}, {"src": "b", "tgt": "c"}, {"src": "a", "tgt": "c"}]})
    path = tmp_path / "q.json"
    path.write_text(json.dumps(Q.to_json()))
    R = Quiver.load(path)
    assert (R.vertices, R.arrows) == (Q.vertices, Q.arrows)
    assert Q.arrows == ((0, 1), (1, 2), (0, 2))


def test_quiver_errors(tmp_path):
    with pytest.raises(InputError):
        Quiver.from_json({"vertices": ["a", "a"], "arrows": []})
    with pytest.raises(InputError):
        Quiver.from_json({"vertices": ["a"], "arrows": [{"src": "a", "tgt": "z"}]})
    with pytest.raises(InputError):
        Quiver.from_json("{not json")
    with pytest.raises(InputError):
        Quiver.load(tmp_path / "missing.json")
    with pytest.raises(QuiverMismatch):
        euler_form(a2(), (1,), (1, 0))
    with pytest.raises(InputError):
        builtin("E8")


def test_dim_text():
    assert parse_dim("1,2, 0") == (1, 2, 0)
    assert fmt_dim((3, 0)) == "3,0"
    with pytest.raises(InputError):
        parse_dim("1,x")
