import random

import pytest

from weilcert.algebra.field import field_make
from weilcert.curve import (PlaneCurve, check_weil, count_cost, count_points, genus,
                            is_smooth, rational_points, random_smooth_curve, singular_points,
                            weil_ok)
from weilcert.errors import BudgetExceeded, InfiniteSingularLocus, NotNodal
from oracles import naive_count, naive_points, naive_singular


def test_klein_counts_match_naive_enumeration(klein_f5):
    for j in (1, 2, 3):
        assert count_points(klein_f5, j) == naive_count(klein_f5, j)
    assert [count_points(klein_f5, j) for j in (1, 2, 3)] == [6, 26, 126]


@pytest.mark.parametrize("q,d,seed", [(3, 3, 1), (4, 3, 2), (5, 4, 3), (7, 2, 4), (9, 3, 5),
                                      (2, 4, 6), (8, 3, 7)])
def test_count_points_matches_naive(q, d, seed):
    p = {2: 2, 3: 3, 4: 2, 5: 5, 7: 7, 8: 2, 9: 3}[q]
    k = {4: 2, 8: 3, 9: 2}.get(q, 1)
    F = field_make(p, k)
    c = random_smooth_curve(F, d, random.Random(seed))
    assert count_points(c, 1) == naive_count(c, 1)
    if q <= 5:
        assert count_points(c, 2) == naive_count(c, 2)


def test_rational_points_agree_with_count(elliptic_f5):
    for e in (1, 2, 3):
        K, pts = rational_points(elliptic_f5, e)
        assert len(pts) == count_points(elliptic_f5, e)
        assert len(set(pts)) == len(pts)
        assert all(elliptic_f5.form.map_coeffs(K, K.embedding_from(elliptic_f5.field))(P) == 0
                   for P in pts)


def test_quadratic_fast_path_equals_grid():
    # y^2 z = x^3 + 2 x z^2 + 3 z^3 over F_11: counted by the quadratic-character path
    F = field_make(11)
    c = PlaneCurve.from_terms(F, 3, {(0, 2, 1): 1, (3, 0, 0): -1, (1, 0, 2): -2, (0, 0, 3): -3})
    assert count_cost(c, 1) == 12
    assert count_points(c, 1) == naive_count(c, 1)


def test_count_budget():
    F = field_make(7)
    c = random_smooth_curve(F, 4, random.Random(0))
    with pytest.raises(BudgetExceeded):
        count_points(c, 4, budget=1000)
    with pytest.raises(ValueError):
        count_points(c, 0)


def test_genus_of_smooth_curves():
    F = field_make(7)
    for d, g in ((1, 0), (2, 0), (3, 1), (4, 3)):
        c = random_smooth_curve(F, d, random.Random(d))
        assert genus(c) == g


def test_nodal_cubic():
    # y^2 z = x^3 + x^2 z has a node at (0 : 0 : 1)
    F = field_make(7)
    c = PlaneCurve.from_terms(F, 3, {(0, 2, 1): 1, (3, 0, 0): -1, (2, 0, 1): -1})
    assert not is_smooth(c)
    sps = singular_points(c)
    assert [s.point for s in sps] == [(0, 0, 1)]
    assert sps[0].is_node and sps[0].multiplicity == 2
    assert naive_singular(c) == [(0, 0, 1)]
    assert genus(c) == 0


def test_cusp_is_not_nodal():
    F = field_make(7)
    c = PlaneCurve.from_terms(F, 3, {(0, 2, 1): 1, (3, 0, 0): -1})
    sps = singular_points(c)
    assert len(sps) == 1 and not sps[0].is_node
    with pytest.raises(NotNodal):
        genus(c)


def test_singular_point_over_extension():
    # two lines conjugate over F_9 meeting in the rational point (0 : 0 : 1)
    F = field_make(3)
    c = PlaneCurve.from_terms(F, 2, {(2, 0, 0): 1, (0, 2, 0): 1})   # x^2 + y^2, -1 nonsquare mod 3
    sps = singular_points(c)
    assert len(sps) == 1 and sps[0].point == (0, 0, 1)
    assert naive_singular(c) == [(0, 0, 1)]


def test_smoothness_agrees_with_naive_search():
    # every singular point of a plane curve of degree d is defined over F_{q^k} with k <= (d-1)^2;
    # for conics over F_5 that means over F_5 itself
    F = field_make(5)
    rnd = random.Random(11)
    from weilcert.algebra.forms import random_form
    for _ in range(30):
        f = random_form(F, 3, 2, rnd, density=0.5)
        if f.is_zero():
            continue
        c = PlaneCurve(F, f)
        assert is_smooth(c) == (not naive_singular(c))


def test_weil_ok_exact_edges():
    assert weil_ok(1 + 4 + 4, 4, 1)       # N = Q + 1 + 2 sqrt Q is allowed
    assert not weil_ok(1 + 4 + 5, 4, 1)
    assert weil_ok(0, 1, 1)


def test_json_round_trip(klein_f5):
    c = PlaneCurve.from_json(klein_f5.to_json())
    assert c.form == klein_f5.form
    F = field_make(3, 2)
    d = random_smooth_curve(F, 3, random.Random(2))
    d2 = PlaneCurve.from_json(d.to_json())
    assert d2.field == F and d2.form == d.form
    assert check_weil(d2)


def test_repeated_component_is_singular():
    # (x0 + x1)^2 over F_2 and x0^2 x1 over F_5: every point of the doubled line is singular
    for F, terms, d in ((field_make(2), {(2, 0, 0): 1, (0, 2, 0): 1}, 2),
                        (field_make(5), {(2, 1, 0): 1}, 3)):
        c = PlaneCurve.from_terms(F, d, terms)
        assert not is_smooth(c)
        assert naive_singular(c)
        with pytest.raises(InfiniteSingularLocus):
            singular_points(c)


@pytest.mark.parametrize("p,a,b", [(5, 1, 1), (7, 3, 2), (3, 2, 1)])
def test_quadratic_fast_path_points(p, a, b):
    from weilcert.protocol import weierstrass
    c = weierstrass(field_make(p), a, b)
    for e in (1, 2):
        K, pts = rational_points(c, e)
        assert pts == sorted(naive_points(c, e))
    # conics go through the same path, including a degenerate fibre of the projection
    conic = PlaneCurve.from_terms(field_make(7), 2, {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 3})
    assert rational_points(conic)[1] == sorted(naive_points(conic))


def test_singular_conic_in_characteristic_two():
    # the partials x1 + x2, x0 + x2, x0 + x1 meet at (1 : 1 : 1); a random combination of
    # two of them can coincide with the third over F_2, which must not hide the point
    F = field_make(2)
    c = PlaneCurve.from_terms(F, 2, {(2, 0, 0): 1, (1, 1, 0): 1, (1, 0, 1): 1, (0, 2, 0): 1,
                                     (0, 1, 1): 1, (0, 0, 2): 1})
    assert naive_singular(c) == [(1, 1, 1)]
    assert [s.point for s in singular_points(c)] == [(1, 1, 1)]
    assert not is_smooth(c)
