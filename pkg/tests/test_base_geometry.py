from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropmorse import (CirclePoint, IntersectionPoint, Lagrangian,
                       auto_perturb, hom_generators, intersection_points,
                       is_transversal, self_hom_generators)
from tropmorse.base_geometry import arc_distance


def test_circle_point_reduces_mod_d():
    p = CirclePoint(Fraction(7, 2), 3)
    assert p.value == Fraction(1, 2)
    assert p.lift(2) == Fraction(1, 2) + 6
    assert p == CirclePoint(Fraction(-5, 2), 3)


def test_arc_distance_shorter_arc():
    p = CirclePoint(Fraction(1, 10), 1)
    q = CirclePoint(Fraction(9, 10), 1)
    assert arc_distance(p, q) == Fraction(1, 5)
    assert arc_distance(q, p) == Fraction(1, 5)


@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(1, 3),
       st.fractions(min_value=-2, max_value=2),
       st.fractions(min_value=-2, max_value=2))
@settings(max_examples=60, deadline=None)
def test_intersection_count_is_d_times_slope_gap(n1, n2, d, o1, o2):
    L1 = Lagrangian(n1, o1, d)
    L2 = Lagrangian(n2, o2, d)
    pts = intersection_points(L1, L2)
    if n1 == n2:
        assert len(pts) == 1
        assert pts[0].base.value == 0
    else:
        assert len(pts) == d * abs(n2 - n1)
        want = 1 if n2 < n1 else 0
        assert all(p.degree == want for p in pts)
        # every base actually solves the section equation mod 1
        for p in pts:
            gap = L1.height(p.base.value) - L2.height(p.base.value)
            assert gap.denominator == 1


def test_degree_one_iff_slope_drops():
    L0 = Lagrangian(0, 0, 1)
    L2 = Lagrangian(2, Fraction(1, 7), 1)
    assert all(p.degree == 0 for p in intersection_points(L0, L2))
    assert all(p.degree == 1 for p in intersection_points(L2, L0))


def test_dual_swaps_degree_and_direction():
    L0 = Lagrangian(0, 0, 1)
    L1 = Lagrangian(1, Fraction(1, 16), 1)
    for p in intersection_points(L0, L1):
        q = p.dual()
        assert q.base == p.base
        assert q.degree == 1 - p.degree
        assert (q.source, q.target) == (p.target, p.source)
        assert q.dual() == p


def test_self_hom_avatars():
    L = Lagrangian(2, Fraction(1, 10), 1)
    lo, hi = self_hom_generators(L)
    assert (lo.degree, hi.degree) == (0, 1)
    assert lo.base.value == hi.base.value == 0
    assert lo.dual() == hi and hi.dual() == lo
    assert hom_generators(L, L) == [lo, hi]


def test_transversality_requires_increasing_offsets():
    L = [Lagrangian(0, 0, 1), Lagrangian(1, 0, 1)]
    ok, why = is_transversal(L)
    assert not ok
    assert "not increasing" in why


def test_transversality_rejects_wide_gap_spread():
    # bases of slope-gap-2 pairs are 1/2 apart, so gap differences must
    # stay below 1/4
    L = [Lagrangian(0, 0, 1), Lagrangian(1, Fraction(1, 3), 1),
         Lagrangian(2, Fraction(2, 3) + Fraction(1, 3), 1)]
    ok, _ = is_transversal(L)
    assert not ok


def test_transversality_needs_two_lagrangians():
    with pytest.raises(ValueError):
        is_transversal([Lagrangian(0, 0, 1)])


@given(st.lists(st.integers(-3, 3), min_size=1, max_size=4, unique=True),
       st.integers(1, 2))
@settings(max_examples=40, deadline=None)
def test_auto_perturb_is_transversal(slopes, d):
    L = auto_perturb(slopes, d)
    assert [l.n for l in L] == slopes
    assert all(l.d == d for l in L)
    if len(L) >= 2:
        ok, why = is_transversal(L)
        assert ok, why


def test_intersection_point_identity_is_exact():
    base = CirclePoint(Fraction(1, 3), 1)
    L0, L1 = Lagrangian(0, 0, 1), Lagrangian(1, Fraction(1, 3), 1)
    p = IntersectionPoint(base, L0, L1, 0)
    q = IntersectionPoint(CirclePoint(Fraction(2, 6), 1), L0, L1, 0)
    assert p == q
    assert hash(p) == hash(q)
