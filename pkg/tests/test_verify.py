from fractions import Fraction
from itertools import product

import pytest

import oracles
from hallforge.errors import InputError, LoopVertex
from hallforge.gf import field_make
from hallforge.hall import HallAlgebra, TensorElement
from hallforge.quiver import Quiver, a2, builtin, euler_form, jordan, kronecker
from hallforge.rep import Representation
from hallforge.verify import (
    check_adjointness,
    check_antipode_anticomultiplicative,
    check_antipode_antimultiplicative,
    check_antipode_axiom,
    check_bialgebra,
    check_coassociativity,
    check_coincide,
    check_green_formula,
    check_green_theorem,
    check_riedtmann_peng,
    check_serre,
    dims_within,
    serre_element,
    sweep_antipode_relations,
    sweep_bialgebra,
    sweep_coincide,
    sweep_green,
    sweep_hopf,
    sweep_riedtmann_peng,
    sweep_serre,
)

A2, J, K, A3 = a2(), jordan(), kronecker(), builtin("A3")


def algebra(Q, p, e=1):
    return HallAlgebra(Q, field_make(p, e))


def named(H):
    ids = [c.id for c in H.classes((1, 1))]
    return H.simple(0), H.simple(1), ids[1], ids[0]


def jordan_class(H, matrix):
    return H.census((len(matrix),)).classify(Representation.build(H.quiver, H.field, (len(matrix),), [matrix])).id


# -- Green's formula against a brute-force model -----------------------------------------------


class BruteGreen:
    """Both sides of Green's formula from explicit orbits and submodule lists."""

    def __init__(self, Q, p, limit):
        self.Q, self.p = Q, p
        self.classes = {}  # dim -> {canon: aut}
        for d in dims_within(Q.n, limit):
            g = 1
            for k in d:
                g *= len(oracles.gl(k, p))
            self.classes[d] = {x: g // size for x, size in oracles.orbits(Q.arrows, d, p).items()}
        self.F = {}
        for d, cls in self.classes.items():
            for L in cls:
                self.F[(d, L)] = oracles.hall_numbers(Q.arrows, d, L, p)

    def f(self, A, B, L):
        """Points are ``(dim, matrices)`` pairs."""
        return self.F[L].get((A, B), 0)

    def lhs(self, M1, M2, N1, N2):
        dm1, dm2, dn1, dn2 = (c[0] for c in (M1, M2, N1, N2))
        gamma = tuple(a + b for a, b in zip(dm1, dn1))
        if gamma != tuple(a + b for a, b in zip(dm2, dn2)):
            return Fraction(0)
        pre = self.aut(M1) * self.aut(M2) * self.aut(N1) * self.aut(N2)
        total = Fraction(0)
        for L, aL in self.classes[gamma].items():
            L = (gamma, L)
            total += Fraction(pre * self.f(M1, N1, L) * self.f(M2, N2, L), aL)
        return total

    def rhs(self, M1, M2, N1, N2):
        dm1, dm2, dn1, dn2 = (c[0] for c in (M1, M2, N1, N2))
        if tuple(a + b for a, b in zip(dm1, dn1)) != tuple(a + b for a, b in zip(dm2, dn2)):
            return Fraction(0)
        total = Fraction(0)
        for x in product(*(range(min(a, b) + 1) for a, b in zip(dm1, dm2))):
            y1 = tuple(a - b for a, b in zip(dm1, x))
            y2 = tuple(a - b for a, b in zip(dm2, x))
            z = tuple(a - b for a, b in zip(dn1, y2))
            if min(z, default=0) < 0:
                continue
            ratio = Fraction(self.p) ** (-euler_form(self.Q, x, z))
            for X in self._points(x):
                for Z in self._points(z):
                    for Y1 in self._points(y1):
                        for Y2 in self._points(y2):
                            t = self.f(X, Y1, M1) * self.f(Y1, Z, N2) * self.f(X, Y2, M2) * self.f(Y2, Z, N1)
                            if t:
                                total += ratio * t * self.aut(X) * self.aut(Y1) * self.aut(Y2) * self.aut(Z)
        return total

    def _points(self, d):
        return [(d, x) for x in self.classes[d]]

    def aut(self, point):
        d, x = point
        return self.classes[d][x]


@pytest.mark.parametrize("Q,p,limit", [(A2, 2, 3), (A2, 3, 2), (J, 2, 3), (K, 2, 2)], ids=str)
def test_green_matches_brute_force(Q, p, limit):
    H = algebra(Q, p)
    model = BruteGreen(Q, p, limit)
    ids = [c.id for d in dims_within(Q.n, limit) for c in H.classes(d)]
    pts = {c: (H.dim(c), H.iso_class(c).rep.matrices) for c in ids}
    seen = 0
    for M1, M2, N1, N2 in product(ids, repeat=4):
        dims = tuple(H.dim(c) for c in (M1, M2, N1, N2))
        gamma = tuple(a + b for a, b in zip(dims[0], dims[2]))
        if sum(gamma) > limit or gamma != tuple(a + b for a, b in zip(dims[1], dims[3])):
            continue
        r = check_green_formula(H, M1, M2, N1, N2)
        key = tuple(pts[c] for c in (M1, M2, N1, N2))
        assert r.lhs == model.lhs(*key)
        assert r.rhs == model.rhs(*key)
        assert r.equal
        seen += 1
    assert seen > 0


@pytest.mark.parametrize("q", [2, 3])
def test_green_all_s1_anchor(q):
    H = algebra(A2, q)
    s1 = H.simple(0)
    r = check_green_formula(H, s1, s1, s1, s1)
    expect = Fraction((q - 1) ** 2 * (q + 1), q)
    assert r.equal and r.lhs == expect and r.rhs == expect


def test_green_mismatched_dims():
    H = algebra(A2, 2)
    s1, s2 = H.simple(0), H.simple(1)
    r = check_green_formula(H, s1, s2, s1, s2)
    assert r.equal and r.lhs == 0 and r.rhs == 0


def test_green_sweep_counts_agree_with_singles():
    H = algebra(A2, 2)
    res = sweep_green(H, 2)
    ids = [c.id for d in dims_within(2, 2) for c in H.classes(d)]
    expected = 0
    for M1, M2, N1, N2 in product(ids, repeat=4):
        a = tuple(x + y for x, y in zip(H.dim(M1), H.dim(N1)))
        b = tuple(x + y for x, y in zip(H.dim(M2), H.dim(N2)))
        if a == b and sum(a) <= 2:
            expected += 1
    assert res.ok and res.checked == expected


# -- single-instance checkers --------------------------------------------------------------------


def test_riedtmann_peng_examples():
    H = algebra(A2, 3)
    s1, s2, p1, _ = named(H)
    r = check_riedtmann_peng(H, s1, s2, p1)
    assert r.equal and r.lhs == 4
    r = check_riedtmann_peng(H, H.zero, p1, p1)
    assert r.equal and r.lhs == H.aut(p1)
    HJ = algebra(J, 2)
    m0 = HJ.classes((1,))[0].id
    block = jordan_class(HJ, [[0, 1], [0, 0]])
    assert check_riedtmann_peng(HJ, m0, m0, block).equal


def test_bialgebra_examples():
    H = algebra(A2, 2)
    s1, s2, p1, split = named(H)
    assert check_bialgebra(H, s1, s2, (0, 1), (1, 0)).equal
    r = check_bialgebra(H, s1, s2, (1, 1), (0, 0))
    assert r.equal and r.lhs == TensorElement(2, {(p1, H.zero): 1, (split, H.zero): 1})
    HK = algebra(K, 2)
    assert check_bialgebra(HK, HK.simple(0), HK.simple(0), (1, 0), (1, 0)).equal
    with pytest.raises(InputError):
        check_bialgebra(H, s1, s2, (1, 0), (1, 0))
    assert check_green_theorem(H, p1, s1).equal


def test_adjointness_examples():
    for q in (2, 3):
        H = algebra(A2, q)
        s1, s2, p1, _ = named(H)
        r = check_adjointness(H, p1, s1, s2)
        assert r.equal and r.lhs == Fraction(1, q - 1)
        r = check_adjointness(H, p1, s1, s1)
        assert r.equal and r.lhs == 0
    HJ = algebra(J, 2)
    m0 = HJ.classes((1,))[0].id
    split = jordan_class(HJ, [[0, 0], [0, 0]])
    assert check_adjointness(HJ, split, m0, m0).equal


@pytest.mark.parametrize("q", [2, 3])
def test_antipode_axiom_examples(q):
    H = algebra(A2, q)
    s1 = H.simple(0)
    s11 = H.classes((2, 0))[0].id
    for twisted in (False, True):
        assert check_antipode_axiom(H, s1, twisted).equal
        assert check_antipode_axiom(H, s11, twisted).equal
        r = check_antipode_axiom(H, H.zero, twisted)
        assert r.equal and r.lhs == H.one()


def test_inclusive_exponent_is_flagged():
    H = algebra(A2, 2)
    s11 = H.classes((2, 0))[0].id
    r = check_antipode_axiom(H, s11, twisted=True, convention="inclusive")
    assert not r.equal and r.note.startswith("ConventionMismatch")
    assert H.antipode(s11, True, "inclusive") == H.basis(s11).scale(-4)


def test_serre_examples():
    assert check_serre(algebra(A2, 2), 0, 1).equal
    assert check_serre(algebra(A2, 3), "2", "1").equal
    HK = algebra(K, 2)
    r = check_serre(HK, 0, 1)
    assert r.equal and r.lhs.is_zero()
    loopy = Quiver.from_json({"vertices": ["x", "y"], "arrows": [{"src": "x", "tgt": "x"}, {"src": "x", "tgt": "y"}]})
    with pytest.raises(LoopVertex):
        check_serre(algebra(loopy, 2), "x", "y")
    with pytest.raises(InputError):
        serre_element(algebra(A2, 2), 0, 0)


def test_serre_terms_do_not_vanish_individually():
    H = algebra(A2, 2)
    s1, s2 = H.simple(0), H.simple(1)
    assert not H.multiply_many([s1, s1, s2], twisted=True).is_zero()


def test_coincide_examples():
    H = algebra(A2, 2)
    assert check_coincide(H, ["1", "2"]).equal
    assert check_coincide(H, ["1"]).equal
    assert check_coincide(algebra(A3, 2), ["1", "2", "3"]).equal
    with pytest.raises(InputError):
        check_coincide(H, ["1", "1"])


def test_coassociativity_examples():
    H = algebra(K, 2)
    for c in H.classes((1, 1)):
        assert check_coassociativity(H, c.id).equal
        assert check_coassociativity(H, c.id, twisted=True).equal


def test_antipode_relations_are_braided():
    H = algebra(A2, 2)
    s1, s2, p1, _ = named(H)
    r = check_antipode_antimultiplicative(H, s1, s2)
    assert not r.equal and "braided form holds" in r.note
    r = check_antipode_anticomultiplicative(H, p1)
    assert not r.equal and "braided form holds" in r.note
    res = sweep_antipode_relations(algebra(J, 2), 2)
    assert res.ok and not res.diagnostics
    res = sweep_antipode_relations(H, 2)
    assert res.ok and res.diagnostics
    assert all("braided form holds" in d.note for d in res.diagnostics)


# -- sweeps -----------------------------------------------------------------------------------


@pytest.mark.parametrize("Q,p", [(A2, 2), (J, 2), (K, 2), (A3, 2)], ids=str)
def test_small_sweeps_pass(Q, p):
    H = algebra(Q, p)
    assert sweep_green(H, 2).ok
    assert sweep_riedtmann_peng(H, 2).ok
    for r in sweep_hopf(H, 2).values():
        assert r.ok and r.checked
    assert sweep_coincide(H).ok
    assert sweep_serre(H).ok


def test_bialgebra_sweep_vector_bound():
    res = sweep_bialgebra(algebra(A2, 2), (1, 1))
    assert res.ok and res.checked > 0


def test_sweeps_independent_of_threads():
    H1, H8 = algebra(A2, 3), algebra(A2, 3)
    a, b = sweep_riedtmann_peng(H1, 3, threads=1), sweep_riedtmann_peng(H8, 3, threads=8)
    assert (a.checked, a.ok) == (b.checked, b.ok)
    a, b = sweep_green(H1, 3, threads=1), sweep_green(H8, 3, threads=8)
    assert (a.checked, a.ok) == (b.checked, b.ok)


def test_report_json_has_no_timing():
    H = algebra(A2, 2)
    r = check_serre(H, 0, 1)
    assert r.elapsed >= 0
    assert "elapsed" not in r.to_json()
    assert str(r).startswith("ok serre")
