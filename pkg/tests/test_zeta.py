import random
import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from weilcert.algebra.intpoly import IntPoly
from weilcert.curve import count_points
from weilcert.errors import Ambiguous, DescentFailed, Inconsistent, NoSolution
from weilcert.zeta import (HasseWeilInterval, RootModulusWarning, ZetaNumerator,
                           admissible_extensions, check_descent_pair, descend, expected_counts,
                           extension_power, jacobian_order, p1_from_counts,
                           p1_from_jacobian_orders, random_numerator, root_modulus_check,
                           weil_box)


def inverse_roots(P):
    """alpha_i with P = prod(1 - alpha_i T), numerically."""
    return 1 / np.roots(list(reversed(P.coeffs)))


def numeric_counts(P, jmax):
    al = inverse_roots(P)
    return [P.q ** j + 1 - int(round(float(np.sum(al ** j).real))) for j in range(1, jmax + 1)]


def test_klein_quartic_numerator(klein_f5):
    counts = [count_points(klein_f5, j) for j in (1, 2, 3)]
    P = p1_from_counts(counts, 5, 3)
    assert P.coeffs == [1, 0, 0, 0, 0, 0, 125]
    assert P.symmetric()
    assert P.value_at_one() in HasseWeilInterval.of(5, 3)


@pytest.mark.parametrize("q,g", [(2, 1), (5, 1), (3, 2), (9, 2), (5, 3), (4, 3)])
def test_counts_round_trip_and_numeric_oracle(q, g):
    rnd = random.Random(q * 10 + g)
    for _ in range(5):
        P = random_numerator(q, g, rnd)
        counts = expected_counts(P, 2 * g)
        assert counts == numeric_counts(P, 2 * g)
        assert p1_from_counts(counts[:g], q, g) == P


@pytest.mark.parametrize("r", [2, 3, 5])
def test_extension_power_against_numeric_roots(r):
    rnd = random.Random(r)
    for _ in range(5):
        P = random_numerator(3, 2, rnd)
        Pr = extension_power(P, r)
        # prod(1 - a T) has the coefficients of prod(X - a), read from the top
        want = [int(round(c.real)) for c in np.poly(inverse_roots(P) ** r)]
        assert Pr.coeffs == want
        assert jacobian_order(P, r) == Pr.poly(1)


def test_hasse_weil_interval_against_mpmath():
    with mpmath.workdps(50):
        for q in (2, 3, 4, 5, 7, 9, 25, 121, 2039, 10 ** 6 + 3):
            for g in (1, 2, 3, 5):
                iv = HasseWeilInterval.of(q, g)
                s = mpmath.sqrt(q)
                assert iv.lo == int(mpmath.ceil((s - 1) ** (2 * g)))
                assert iv.hi == int(mpmath.floor((s + 1) ** (2 * g)))


def test_interval_multiples():
    iv = HasseWeilInterval.of(5, 1)   # [2, 10]
    assert (iv.lo, iv.hi) == (2, 10)
    assert iv.multiples(4) == [4, 8]


def test_weil_box():
    assert weil_box(5, 1, 1) == 4          # floor(2 sqrt 5)
    assert weil_box(4, 2, 2) == 24         # C(4,2) * 4


def test_invariant_violations():
    with pytest.raises(Inconsistent):
        ZetaNumerator(5, 1, [1, 2, 3])          # q a_0 != a_2
    with pytest.raises(Inconsistent):
        ZetaNumerator(5, 1, [2, 0, 5])
    with pytest.raises(Inconsistent):
        ZetaNumerator(2, 1, [1, 9, 2])          # P(1) = 12 outside [0.17, 5.8]
    assert ZetaNumerator(5, 1, [1, 9, 2], check=False).violations()


def test_counts_errors():
    with pytest.raises(ValueError):
        p1_from_counts([6], 5, 2)
    with pytest.raises(Inconsistent):
        p1_from_counts([100], 5, 1)
    assert p1_from_counts([], 7, 0).coeffs == [1]


@given(st.integers(0, 10 ** 6))
@settings(max_examples=40, deadline=None)
def test_descent_round_trip(seed):
    rnd = random.Random(seed)
    q = rnd.choice([2, 3, 4, 5, 7])
    g = rnd.choice([1, 2])
    P = random_numerator(q, g, rnd)
    m1, m2 = admissible_extensions(q, g)
    assert not check_descent_pair(q, g, m1, m2)
    assert descend(extension_power(P, m1), m1, extension_power(P, m2), m2, q, g) == P


def test_admissible_extensions():
    assert admissible_extensions(3, 1) == (7, 11)
    assert admissible_extensions(2, 2) == (11, 23)
    assert not check_descent_pair(3, 1, 7, 13)
    assert check_descent_pair(3, 1, 5, 7)       # 5 - 1 = 4 has no prime factor > 2
    assert check_descent_pair(3, 1, 7, 9)


def test_descend_rejects_inconsistent_inputs():
    rnd = random.Random(4)
    P = random_numerator(3, 1, rnd)
    R = P
    while R == P:
        R = random_numerator(3, 1, rnd)
    with pytest.raises(DescentFailed):
        descend(extension_power(P, 7), 7, extension_power(R, 13), 13, 3, 1)
    with pytest.raises(ValueError):
        descend(extension_power(P, 5), 5, extension_power(P, 7), 7, 3, 1)


def test_p1_from_orders():
    rnd = random.Random(8)
    for g in (1, 2):
        for _ in range(5):
            P = random_numerator(3, g, rnd)
            orders = [jacobian_order(P, j) for j in range(1, 2 * g + 3)]
            assert p1_from_jacobian_orders(orders, 3, g) == P
    # one order cannot fix a genus-2 numerator in general
    P = ZetaNumerator(3, 2, IntPoly([1, 0, 0, 0, 9]))
    with pytest.raises(Ambiguous):
        p1_from_jacobian_orders([P.poly(1)], 3, 2)
    with pytest.raises(NoSolution):
        p1_from_jacobian_orders([1000], 3, 1)


def test_root_modulus_diagnostic():
    rnd = random.Random(2)
    for g in (1, 2, 3):
        ok, worst = root_modulus_check(random_numerator(7, g, rnd))
        assert ok and worst < 1e-9
    fake = ZetaNumerator(4, 1, IntPoly([1, 0, 4]))
    assert root_modulus_check(fake)[0]
    # symmetric with P(1) = 7 inside the interval, but 16u^2 - 10u + 1 = (8u - 1)(2u - 1)
    # puts the roots at modulus 8^(-1/2) and 2^(-1/2) instead of 1/2
    bad = ZetaNumerator(4, 2, IntPoly([1, 0, -10, 0, 16]), check=False)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        ok, worst = root_modulus_check(bad)
    assert not ok
    assert any(issubclass(w.category, RootModulusWarning) for w in caught)


def test_json_round_trip():
    P = random_numerator(9, 2, random.Random(1))
    assert ZetaNumerator.from_json(P.to_json()) == P
