"""Field, polynomial and resultant arithmetic checked against sympy."""
import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy import Poly, symbols
from sympy.polys.subresultants_qq_zz import sylvester

from weilcert.algebra import upoly
from weilcert.algebra.field import field_make, is_irreducible
from weilcert.algebra.forms import Form
from weilcert.algebra.intpoly import (IntPoly, newton_power_sums, poly_from_power_sums,
                                      poly_gcd_z, resultant_z)
from weilcert.algebra.resultant import (PolyCoeffForm, macaulay_resultant,
                                        macaulay_resultant_poly, resultant_field)
from weilcert.errors import BothZero, BudgetExceeded, NonPrime

T = symbols("T")


def sym_poly(cs, p):
    return Poly(list(reversed(cs)) or [0], T, modulus=p)


def sym_coeffs(P, p):
    return [int(c) % p for c in reversed(P.all_coeffs())]


FIELDS = [(2, 1), (2, 4), (3, 3), (5, 2), (7, 1), (13, 2), (2, 9)]


@pytest.mark.parametrize("p,k", FIELDS)
def test_multiplication_matches_sympy(p, k):
    F = field_make(p, k)
    mod = sym_poly(list(F.modulus), p)
    rnd = random.Random(p * 100 + k)
    for _ in range(200):
        a, b = rnd.randrange(F.q), rnd.randrange(F.q)
        want = (sym_poly(F.coords(a), p) * sym_poly(F.coords(b), p)).rem(mod)
        assert F.coords(F.mul(a, b)) == (sym_coeffs(want, p) + [0] * k)[:k]
        want_add = sym_poly(F.coords(a), p) + sym_poly(F.coords(b), p)
        assert F.coords(F.add(a, b)) == (sym_coeffs(want_add, p) + [0] * k)[:k]


@pytest.mark.parametrize("p,k", FIELDS)
def test_modulus_irreducible_per_sympy(p, k):
    F = field_make(p, k)
    assert sym_poly(list(F.modulus), p).is_irreducible


@given(st.integers(0, 10 ** 6), st.integers(0, 10 ** 6), st.integers(1, 10 ** 6))
@settings(max_examples=200, deadline=None)
def test_field_axioms(x, y, z):
    F = field_make(3, 5)
    a, b, c = x % F.q, y % F.q, z % F.q
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.neg(a)) == 0
    if c:
        assert F.mul(c, F.inv(c)) == 1
        assert F.div(F.mul(a, c), c) == a
    assert F.pow(a, F.q) == a


def test_field_errors_and_caching():
    with pytest.raises(NonPrime):
        field_make(9)
    with pytest.raises(BudgetExceeded):
        field_make(2, 80)
    with pytest.raises(ValueError):
        field_make(5, 2, modulus=(1, 0, 1))   # T^2 + 1 = (T - 2)(T + 2) mod 5
    assert field_make(5, 3) is field_make(5, 3)


def test_seeded_modulus_is_deterministic():
    a = field_make(3, 4, seed=11)
    b = field_make(3, 4, seed=11)
    assert a.modulus == b.modulus
    assert is_irreducible(list(a.modulus), 3)


@pytest.mark.parametrize("p,k,e", [(2, 1, 4), (3, 2, 3), (5, 1, 2)])
def test_extension_embedding_is_a_homomorphism(p, k, e):
    F = field_make(p, k)
    K, emb = F.extension(e)
    assert K.q == F.q ** e
    rnd = random.Random(7)
    for _ in range(100):
        a, b = rnd.randrange(F.q), rnd.randrange(F.q)
        assert emb(F.mul(a, b)) == K.mul(emb(a), emb(b))
        assert emb(F.add(a, b)) == K.add(emb(a), emb(b))
        assert K.pow(emb(a), F.q) == emb(a)


def test_sqrt_and_squares():
    F = field_make(11, 2)
    squares = {F.mul(x, x) for x in F.elements()}
    for a in F.elements():
        assert F.is_square(a) == (a in squares)
        if a in squares:
            r = F.sqrt(a)
            assert F.mul(r, r) == a


# -- univariate polynomials over F ------------------------------------------------

@pytest.mark.parametrize("p", [2, 5, 13])
def test_upoly_gcd_and_roots_match_sympy(p):
    F = field_make(p)
    rnd = random.Random(p)
    for _ in range(40):
        a = [rnd.randrange(p) for _ in range(rnd.randint(1, 7))]
        b = [rnd.randrange(p) for _ in range(rnd.randint(1, 7))]
        if not upoly.trim(a) or not upoly.trim(b):
            continue
        g = upoly.gcd(F, a, b)
        want = sympy.gcd(sym_poly(a, p), sym_poly(b, p)).monic()
        assert g == sym_coeffs(want, p)
        brute = sorted(x for x in range(p) if upoly.evaluate(F, a, x) == 0)
        assert upoly.roots(F, a) == brute


def test_ddf_degrees_match_sympy_factorization():
    p = 3
    F = field_make(p)
    rnd = random.Random(5)
    for _ in range(20):
        f = [rnd.randrange(p) for _ in range(8)] + [1]
        if len(upoly.gcd(F, f, upoly.deriv(F, f))) > 1:
            continue
        got = sorted(e for e, g in upoly.ddf(F, f) for _ in range((len(g) - 1) // e))
        _, facs = sym_poly(f, p).factor_list()
        assert got == sorted(P.degree() for P, m in facs for _ in range(m))


# -- integer polynomials ---------------------------------------------------------------

small_polys = st.lists(st.integers(-9, 9), min_size=1, max_size=6)


@given(small_polys, small_polys, small_polys)
@settings(max_examples=100, deadline=None)
def test_gcd_z_against_sympy(a, b, c):
    A, B = IntPoly(a) * IntPoly(c), IntPoly(b) * IntPoly(c)
    if A.is_zero() and B.is_zero():
        with pytest.raises(BothZero):
            poly_gcd_z(A, B)
        return
    got = poly_gcd_z(A, B)
    want = sympy.gcd(Poly(list(reversed(A.coeffs)) or [0], T),
                     Poly(list(reversed(B.coeffs)) or [0], T))
    want = list(reversed(want.primitive()[1].all_coeffs()))
    low = next(x for x in want if x)
    if low < 0:
        want = [-x for x in want]
    assert list(got.coeffs) == [int(x) for x in want]


def sylvester_det(a, b):
    # sympy.resultant (1.14) returns Res(b, a) for some degree pairs, so the
    # oracle is sympy's own Sylvester matrix determinant instead
    fa = sum(c * T ** i for i, c in enumerate(a))
    fb = sum(c * T ** i for i, c in enumerate(b))
    return int(sylvester(fa, fb, T).det())


def test_resultant_sign_convention_by_root_product():
    # Res(f, g) = lc(f)^deg(g) * prod g(alpha) over the roots alpha of f
    assert resultant_z(IntPoly([1, 1]), IntPoly([0, 0, 0, 1])) == -1
    assert resultant_z(IntPoly([2, 1]), IntPoly([0, 0, 0, 1])) == -8
    assert resultant_z(IntPoly([-6, 1, 1]), IntPoly([1, 0, 1])) == (4 + 1) * (9 + 1)


@given(small_polys, small_polys)
@settings(max_examples=100, deadline=None)
def test_resultant_z_against_sympy(a, b):
    A, B = IntPoly(a), IntPoly(b)
    if A.is_zero() or B.is_zero() or A.degree + B.degree == 0:
        return
    want = sylvester_det(A.coeffs, B.coeffs)
    assert resultant_z(A, B) == want


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=5))
@settings(max_examples=100, deadline=None)
def test_newton_round_trip(tail):
    P = IntPoly([1] + tail)
    n = P.degree
    if n < 1:
        return
    s = newton_power_sums(P, n)
    assert poly_from_power_sums(s, n) == P


def test_newton_power_sums_against_roots():
    # P = (1 - 2T)(1 + 3T): alpha = 2, -3
    s = newton_power_sums(IntPoly([1, 1, -6]), 5)
    assert s == [2 ** j + (-3) ** j for j in range(1, 6)]


@pytest.mark.parametrize("p", [3, 7, 11])
def test_resultant_field_against_sympy(p):
    F = field_make(p)
    rnd = random.Random(p + 1)
    for _ in range(30):
        a = [rnd.randrange(p) for _ in range(rnd.randint(2, 6))] + [rnd.randrange(1, p)]
        b = [rnd.randrange(p) for _ in range(rnd.randint(2, 6))] + [rnd.randrange(1, p)]
        assert resultant_field(F, a, b) == sylvester_det(a, b) % p


def test_macaulay_of_linear_forms_is_the_determinant():
    F = field_make(7)
    rnd = random.Random(3)
    for _ in range(20):
        M = [[rnd.randrange(7) for _ in range(3)] for _ in range(3)]
        forms = [Form.linear(F, row) for row in M]
        val, ok = macaulay_resultant(F, forms)
        if not ok:
            continue
        assert val == int(sympy.Matrix(M).det()) % 7


def test_macaulay_detects_common_zero():
    F = field_make(11)
    x2 = Form(F, 3, 2, {(2, 0, 0): 1, (0, 1, 1): 10})       # x^2 - y z, vanishes at (0, 0, 1)
    y2 = Form(F, 3, 2, {(0, 2, 0): 1, (1, 0, 1): 3})        # y^2 + 3 x z, vanishes at (0, 0, 1)
    z1 = Form(F, 3, 1, {(1, 0, 0): 1, (0, 1, 0): 2})        # x + 2y, vanishes at (0, 0, 1)
    val, ok = macaulay_resultant(F, [x2, y2, z1])
    assert ok and val == 0


def test_macaulay_poly_specializes():
    # forms with coefficients in F[t]: (x, y + t z, z - t x); resultant = det = 1 + t^2
    F = field_make(5)
    forms = [PolyCoeffForm(F, 3, 1, {(1, 0, 0): (1,)}),
             PolyCoeffForm(F, 3, 1, {(0, 1, 0): (1,), (0, 0, 1): (0, 1)}),
             PolyCoeffForm(F, 3, 1, {(0, 0, 1): (1,), (1, 0, 0): (0, 4)})]
    val, ok = macaulay_resultant_poly(F, forms)
    assert ok
    for t in range(5):
        M = [[1, 0, 0], [0, 1, t], [(-t) % 5, 0, 1]]
        assert upoly.evaluate(F, val, t) == int(sympy.Matrix(M).det()) % 5
