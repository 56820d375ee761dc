import itertools
from collections import Counter

import numpy as np
import pytest
import sympy
from sympy import Matrix, Poly, symbols

from weilcert.errors import BudgetExceeded, EmptyInterval
from weilcert.symplectic import (CharPolyClass, all_classes, charpoly, charpoly_distribution,
                                 choose_ell, coprime_proportion, count_charpoly, enumerate_sp,
                                 gsp_check, gsp_order, lemma_bracket, random_gsp, shares_root,
                                 similitude, sp_order)

X = symbols("X")


def brute_gl2(ell, gamma):
    """Every 2x2 matrix over F_l with determinant gamma (Sp(2) = SL(2), so GSp^gamma)."""
    for a, b, c, d in itertools.product(range(ell), repeat=4):
        if (a * d - b * c) % ell == gamma % ell:
            yield a, b, c, d


def sympy_shares_root(f, h, ell):
    F = Poly(list(reversed(f)), X, modulus=ell)
    H = Poly(list(reversed(h)), X, modulus=ell)
    return sympy.gcd(F, H).degree() > 0


def test_orders_against_brute_force_and_known_values():
    for ell in (3, 5, 7):
        assert sp_order(1, ell) == sum(1 for _ in brute_gl2(ell, 1)) == ell * (ell ** 2 - 1)
    assert sp_order(2, 3) == 51840
    assert gsp_order(2, 3) == 2 * 51840


def test_bfs_enumeration_is_the_whole_group():
    elems = enumerate_sp(2, 3, budget=10 ** 5)
    assert len(elems) == 51840
    J = np.array([[0, 0, 1, 0], [0, 0, 0, 1], [2, 0, 0, 0], [0, 2, 0, 0]])
    for flat in list(elems)[:200]:
        A = np.array(flat).reshape(4, 4)
        assert np.array_equal((A.T @ J @ A) % 3, J)
    with pytest.raises(BudgetExceeded):
        enumerate_sp(2, 5, budget=1000)


@pytest.mark.parametrize("ell", [5, 7, 11])
def test_charpoly_against_sympy(ell, rng):
    for n in (2, 4, 6):
        for _ in range(10):
            A = rng.integers(0, ell, size=(n, n))
            monic = Matrix(A.tolist()).charpoly(X).all_coeffs()        # det(X - A), top first
            want = tuple(int(c) % ell for c in monic)                  # reversed = det(1 - TA)
            assert charpoly(A, ell) == want


@pytest.mark.parametrize("r,ell,gamma", [(1, 5, 2), (2, 7, 3), (3, 5, 4)])
def test_random_gsp_has_the_right_multiplicator(r, ell, gamma, rng):
    for _ in range(20):
        g = random_gsp(r, ell, gamma, rng)
        assert gsp_check(g.A, ell) == gamma
        assert CharPolyClass(g.charpoly(), gamma, ell).in_class()
    assert gsp_check(similitude(r, ell, gamma), ell) == gamma
    assert gsp_check(np.eye(2 * r, dtype=np.int64) * 0, ell) is None


def test_random_gl2_is_uniform(rng):
    # exact r = 1 sampler: every one of the l(l^2 - 1) matrices is equally likely
    ell, gamma, n = 5, 3, 24000
    counts = Counter()
    for _ in range(n):
        A = random_gsp(1, ell, gamma, rng).A
        counts[tuple(A.ravel())] += 1
    assert len(counts) == 120
    expected = n / 120
    chi2 = sum((c - expected) ** 2 / expected for c in counts.values())
    assert chi2 < 119 + 5 * (2 * 119) ** 0.5


@pytest.mark.parametrize("ell", [5, 7])
def test_distribution_r1_matches_brute_force(ell):
    for gamma in (1, 2):
        want = Counter()
        for a, b, c, d in brute_gl2(ell, gamma):
            want[(1, (-(a + d)) % ell, gamma)] += 1
        assert charpoly_distribution(1, ell, gamma) == want


def test_count_charpoly_and_bracket():
    ell = 7
    lo, hi = lemma_bracket(1, ell)
    assert (lo, hi) == (16, 100)
    dist = charpoly_distribution(1, ell, 1)
    for cls in all_classes(1, ell, 1):
        n = count_charpoly(1, ell, 1, cls, dist=dist)
        assert lo <= n <= hi
    assert sum(count_charpoly(1, ell, 1, c, dist=dist) for c in all_classes(1, ell, 1)) == 336
    assert count_charpoly(1, ell, 1, (1, 0, 3)) == 0          # not of the form 1 + aT + T^2


def test_r2_distribution_sums_to_group_order():
    dist = charpoly_distribution(2, 3, 2, budget=10 ** 5)
    assert sum(dist.values()) == sp_order(2, 3)
    assert all(CharPolyClass(f, 2, 3).in_class() for f in dist)
    assert len(list(all_classes(2, 3, 2))) == 9


def test_shares_root_against_sympy_gcd(rng):
    ell = 11
    for _ in range(200):
        f = [1] + [int(x) for x in rng.integers(0, ell, 2)]
        h = [1] + [int(x) for x in rng.integers(0, ell, 2)]
        if f[-1] == 0 or h[-1] == 0:
            continue
        assert shares_root(f, h, ell) == sympy_shares_root(f, h, ell)


def test_exact_proportion_against_brute_force():
    ell, gamma = 5, 1
    f = (1, 3, 1)     # (1 - T)^2 mod 5: eigenvalue 1
    bad = sum(sympy_shares_root(f, (1, (-(a + d)) % ell, gamma), ell)
              for a, b, c, d in brute_gl2(ell, gamma))
    got = coprime_proportion(1, ell, gamma, f, method="exact")
    assert got.value == pytest.approx(bad / sp_order(1, ell), abs=0)


def test_monte_carlo_agrees_with_exact(rng):
    ell, gamma, f = 7, 3, (1, 2, 3)
    exact = coprime_proportion(1, ell, gamma, f, method="exact").value
    mc = coprime_proportion(1, ell, gamma, f, samples=20000, rng=rng)
    assert abs(mc.value - exact) <= 4 * mc.sigma
    assert mc.within_bound
    with pytest.raises(ValueError):
        coprime_proportion(1, ell, gamma, f, method="guess")


def test_choose_ell_is_the_first_admissible_prime():
    assert choose_ell(2, 3, 7) == sympy.nextprime(4096 - 1) == 4099
    assert choose_ell(2, 3, 4099) == sympy.nextprime(4099)
    assert choose_ell(3, 3, 7) == sympy.nextprime(12 ** 4)
    with pytest.raises(EmptyInterval):
        choose_ell(2, 1, 7)            # [4096, 4096] holds no prime
