import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fanocalc.criteria import RationalBound, cmp_exceeds_sqrt, floor_add_sqrt
from fanocalc.surd import QuadraticSurd, floor_sqrt, sqrt_exact, surd_from_sqrt

rationals = st.fractions(
    min_value=Fraction(-500), max_value=Fraction(500), max_denominator=400
)
nonneg_rationals = st.fractions(
    min_value=Fraction(0), max_value=Fraction(10**6), max_denominator=400
)


def test_sqrt_exact():
    assert sqrt_exact(Fraction(9, 4)) == Fraction(3, 2)
    assert sqrt_exact(Fraction(0)) == 0
    assert sqrt_exact(Fraction(2)) is None
    assert sqrt_exact(Fraction(2240)) is None
    with pytest.raises(ValueError):
        sqrt_exact(Fraction(-1))


@given(nonneg_rationals)
def test_floor_sqrt_definition(x):
    n = floor_sqrt(x)
    assert n * n <= x < (n + 1) * (n + 1)


def test_surd_normalisation():
    assert QuadraticSurd(Fraction(1), Fraction(2), 9).is_rational
    assert QuadraticSurd(Fraction(1), Fraction(2), 9).a == 7
    assert not QuadraticSurd(Fraction(1), Fraction(2), 8).is_rational


def test_surd_compare_and_floor():
    value = surd_from_sqrt(Fraction(8), Fraction(1), Fraction(2240))
    assert value > 55
    assert value < 56
    assert value.floor() == 55
    assert value.ceil() == 56
    negative = surd_from_sqrt(Fraction(0), Fraction(-1), Fraction(2))
    assert negative.floor() == -2
    assert negative.ceil() == -1


def test_surd_render():
    value = surd_from_sqrt(Fraction(8), Fraction(1), Fraction(2240))
    assert value.render() == "8 + 1*sqrt(2240)"
    half = surd_from_sqrt(Fraction(0), Fraction(1), Fraction(1, 2))
    assert half.render() == "0 + 1/2*sqrt(2)"
    assert abs(value.approx() - (8 + math.sqrt(2240))) < 1e-9


@given(rationals, rationals, st.integers(0, 10**6))
def test_surd_floor_ceil_against_float(a, b, d):
    value = QuadraticSurd(a, b, d)
    approx = float(a) + float(b) * math.sqrt(d)
    fl = value.floor()
    assert fl <= approx + 1e-6
    assert approx - 1e-6 <= fl + 1
    assert value.ceil() == -((-value).floor())


# -- the decision kernels ------------------------------------------------------


def test_cmp_exceeds_sqrt_examples():
    assert cmp_exceeds_sqrt(Fraction(23), Fraction(-3, 4), Fraction(7046737, 13072))
    assert not cmp_exceeds_sqrt(Fraction(5), Fraction(5), Fraction(0))
    assert not cmp_exceeds_sqrt(Fraction(3), Fraction(0), Fraction(9))
    assert cmp_exceeds_sqrt(Fraction(4), Fraction(0), Fraction(9))
    with pytest.raises(ValueError):
        cmp_exceeds_sqrt(Fraction(1), Fraction(0), Fraction(-1))


def test_floor_add_sqrt_examples():
    assert floor_add_sqrt(RationalBound.exact(8), Fraction(2240)) == 55
    assert floor_add_sqrt(RationalBound.strict(1), Fraction(2240)) == 48
    assert floor_add_sqrt(RationalBound.exact(0), Fraction(0)) == 0


def test_floor_add_sqrt_rational_boundaries():
    # sup over x < 1 of floor(x + 2) is 2: the endpoint is excluded
    assert floor_add_sqrt(RationalBound.strict(1), Fraction(4)) == 2
    assert floor_add_sqrt(RationalBound.exact(1), Fraction(4)) == 3
    # non-integer rational endpoint: both semantics agree
    assert floor_add_sqrt(RationalBound.strict(Fraction(1, 2)), Fraction(4)) == 2
    assert floor_add_sqrt(RationalBound.exact(Fraction(1, 2)), Fraction(4)) == 2


def test_rational_bound_affine_parts():
    strict = RationalBound.strict(2)
    exact = RationalBound.exact(2)
    assert strict.floor_affine() == 1 and exact.floor_affine() == 2
    assert strict.ceil_affine() == 2 and exact.ceil_affine() == 2
    # 3 * mu0 for mu0 < 2 tops out just under 6
    assert strict.floor_affine(3) == 5
    # (5/3)(mu0 + 25) for mu0 < 2 tops out just under 45
    assert strict.floor_affine(Fraction(5, 3), Fraction(5, 3) * 25) == 44
    below_one = RationalBound.strict(1)
    assert below_one.floor_affine() == 0
    assert below_one.ceil_affine() == 1


def mp_reference(lhs, base, radicand):
    import mpmath

    with mpmath.workprec(200):
        return mpmath.mpf(lhs.numerator) / lhs.denominator > mpmath.mpf(
            base.numerator
        ) / base.denominator + mpmath.sqrt(
            mpmath.mpf(radicand.numerator) / radicand.denominator
        )


def test_cmp_against_high_precision_oracle_sample():
    rng = random.Random(5)
    agree = 0
    for _ in range(2000):
        lhs = Fraction(rng.randint(-300, 300), rng.randint(1, 60))
        base = Fraction(rng.randint(-300, 300), rng.randint(1, 60))
        radicand = Fraction(rng.randint(0, 90000), rng.randint(1, 60))
        if (lhs - base) ** 2 == radicand:
            continue  # exact-boundary inputs are tested separately
        assert cmp_exceeds_sqrt(lhs, base, radicand) == mp_reference(
            lhs, base, radicand
        )
        agree += 1
    assert agree > 1900
