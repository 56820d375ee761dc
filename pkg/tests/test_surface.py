import json
import math
import random
import warnings

import numpy as np
import pytest

from weilcert.algebra import upoly
from weilcert.algebra.field import field_make
from weilcert.algebra.intpoly import IntPoly
from weilcert.curve import count_points, genus
from weilcert.errors import InconsistentBetti, PencilInvalid
from weilcert.surface import (BelowThresholdWarning, Hypersurface, SyntheticPencilParams,
                              budget_params, euler_consistency, fiber, fiber_p1,
                              hypersurface_beta2, lefschetz_pencil, p1_surface_gcd,
                              pencil_bounds, slice, synthetic_pencil_trial, theorem_threshold)
from conftest import data_path
from oracles import naive_count, naive_singular


@pytest.fixture(scope="module")
def fermat():
    return Hypersurface.fermat(field_make(7), 3, 3)


@pytest.fixture(scope="module")
def pencil(fermat):
    return lefschetz_pencil(fermat, random.Random(4))


def test_fermat_smoothness_and_cone(fermat):
    assert fermat.is_smooth()
    F = field_make(7)
    cone = Hypersurface.from_terms(F, 3, 3, {(3, 0, 0, 0): 1, (0, 3, 0, 0): 1, (0, 0, 3, 0): 1})
    assert not cone.is_smooth()          # singular at (0 : 0 : 0 : 1)


def test_json_round_trip(fermat):
    back = Hypersurface.from_json(json.loads(json.dumps(fermat.to_json())))
    assert back.form == fermat.form and back.N == 3
    with open(data_path("fermat_cubic_surface.json")) as fh:
        assert Hypersurface.from_json(json.load(fh)).form == fermat.form


def test_pencil_invariants(pencil):
    assert pencil.field.q == 49                  # F_7 extended until q > D (D - 1)^2 = 12
    assert len(pencil.discriminant) - 1 == 12
    assert pencil.num_critical == 12
    assert pencil.g_fiber == 1
    assert pencil.base_points == 3
    assert pencil_bounds(3, 3) == {"num_critical_max": 81, "genus_max": 4,
                                   "expected_critical": 12}
    K = pencil.field
    d = pencil.discriminant
    assert len(upoly.gcd(K, d, upoly.deriv(K, d))) == 1


def test_critical_fibers_are_exactly_the_singular_ones(pencil):
    # every rational parameter: Delta(t) = 0 iff the fiber has a singular point over F_49
    # (a one-node fiber's node is Galois-fixed, so it is rational when t is)
    K = pencil.field
    crit = [t for t in range(K.q) if pencil.is_critical(t)]
    rnd = random.Random(0)
    smooth = rnd.sample([t for t in range(K.q) if t not in crit], 6)
    for t in crit:
        assert len(naive_singular(fiber(pencil, t))) == 1
    for t in smooth:
        assert naive_singular(fiber(pencil, t)) == []


def test_fiber_counts_and_p1(pencil):
    K = pencil.field
    t = next(t for t in range(K.q) if not pencil.is_critical(t))
    c = fiber(pencil, t)
    assert genus(c) == 1
    assert count_points(c) == naive_count(c)
    P = fiber_p1(pencil, t, K)
    assert P.poly(1) == count_points(c)          # for an elliptic curve #E = P1(1)


def test_euler_consistency_and_blowup(pencil):
    b2 = euler_consistency(pencil.num_critical, pencil.g_fiber, 0, pencil.base_points, D=3)
    assert b2 == 10
    # blowing up the 3 base points raises beta_2 of the cubic surface (7) by 3
    assert hypersurface_beta2(3) + pencil.base_points == b2
    with pytest.raises(InconsistentBetti):
        euler_consistency(12, 1, 4)
    with pytest.raises(InconsistentBetti):
        euler_consistency(0, 3, 0)
    with pytest.raises(ValueError):
        euler_consistency(-1, 1, 0)


def test_pencil_preconditions(fermat):
    with pytest.raises(ValueError):
        lefschetz_pencil(Hypersurface.fermat(field_make(3), 3, 3))
    with pytest.raises(PencilInvalid):
        lefschetz_pencil(fermat, random.Random(0), F=[1, 0, 0, 0], G=[2, 0, 0, 0], retries=1)


def test_slice_of_threefold():
    with open(data_path("fermat_cubic_threefold.json")) as fh:
        X4 = Hypersurface.from_json(json.load(fh))
    S = slice(X4, rng=random.Random(1))
    assert S.N == 3 and S.degree == 3
    assert S.is_smooth()


def test_surface_gcd_is_one(pencil, fermat):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        res = p1_surface_gcd(fermat, random.Random(2), pairs=6, pencil=pencil)
    assert any(issubclass(w.category, BelowThresholdWarning) for w in caught)
    assert res.below_threshold and res.Q == 49 < theorem_threshold(3)
    assert res.gcd == IntPoly([1])
    assert res.agreement >= 2 / 3
    with pytest.raises(ValueError):
        p1_surface_gcd(fermat, random.Random(2), Q_override=50, pencil=pencil)


def test_synthetic_params_validation():
    with pytest.raises(ValueError):
        SyntheticPencilParams(1, 2, 127, 10 ** 6, 12)      # odd beta1
    with pytest.raises(ValueError):
        SyntheticPencilParams(2, 2, 121, 10 ** 6, 12)      # 121 is not prime
    with pytest.raises(ValueError):
        SyntheticPencilParams(2, 2, 7, 49, 12)             # ell | Q
    assert SyntheticPencilParams(4, 2, 7, 100, 3).error_term() == 0.0


def test_budget_params_meets_the_error_target():
    p = budget_params(2, 2, 127, 12)
    assert p.error_term() <= 1 / 12
    root = math.isqrt(p.Q)
    assert root * root == p.Q and root % 127
    # the next smaller admissible square already misses the target
    prev = root - 1 if (root - 1) % 127 else root - 2
    assert SyntheticPencilParams(2, 2, 127, prev * prev, 12).error_term() > 1 / 12


def test_synthetic_trial_r1(rng):
    p = SyntheticPencilParams(2, 2, 127, 121, 12)
    res = synthetic_pencil_trial(p, 300, rng)
    assert res.success_rate >= 0.9
    assert res.to_json()["meets_two_thirds"]


def test_synthetic_trial_is_deterministic():
    p = SyntheticPencilParams(0, 3, 5, 121, 4)
    a = synthetic_pencil_trial(p, 50, np.random.default_rng(9)).to_json()
    b = synthetic_pencil_trial(p, 50, np.random.default_rng(9)).to_json()
    assert a == b
