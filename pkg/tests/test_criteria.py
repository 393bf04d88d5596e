import dataclasses
import random
from fractions import Fraction

import pytest

from fanocalc.basket import FanoNumerics, anti_plurigenus, validate_basket
from fanocalc.criteria import (
    INAPPLICABLE,
    CriterionParams,
    InvalidBeta,
    RationalBound,
    baseline_parameters,
    beta_bound,
    growth_holds_at,
    growth_min_m,
    n0_lower_bound,
    nonpencil_by_degree,
    nonpencil_by_slope,
    nonpencil_holds_at,
    nonpencil_min_m,
    optimal_beta,
    pencil_equality_analysis,
    plurigenus_lower_bound,
    sqrt_bound,
    sqrt_gate_holds,
    two_system_bound,
)

F = Fraction


def test_baseline_parameters():
    general = baseline_parameters(1, True, False)
    assert (general.m0, general.k3_lower) == (8, F(1, 330))
    assert "840" in general.rx_fact and "660" in general.rx_fact
    special = baseline_parameters(0, True, False)
    assert (special.m0, special.k3_lower, special.m0_alt) == (6, F(1, 70), None)
    stronger = baseline_parameters(0, True, True)
    assert (stronger.m0, stronger.k3_lower, stronger.m0_alt) == (6, F(1, 30), 4)
    with pytest.raises(ValueError):
        baseline_parameters(1, False, False)


def test_plurigenus_lower_bound_values():
    value = plurigenus_lower_bound(16, F(24, 5), F(13, 420))
    assert value == F(612, 35)
    assert value > 17  # certifies P_{-16} - 1 > 16
    assert plurigenus_lower_bound(1, F(2), F(1, 2)) == F(1, 4)
    example = validate_basket([(1, 2), (1, 2), (2, 5), (3, 7), (4, 9)])
    bound22 = plurigenus_lower_bound(22, F(38, 5), F(43, 315))
    assert bound22 <= anti_plurigenus(FanoNumerics(example, 0), 22) == 260


def test_plurigenus_lower_bound_never_exceeds_exact_value():
    # the bound is hypothesised on m >= t, as in the non-pencil solvers
    import math

    example = FanoNumerics(validate_basket([(1, 2), (1, 2), (2, 5), (3, 7), (4, 9)]), 0)
    k3 = F(43, 315)
    for t in (F(38, 5), F(18, 5), F(2)):
        for m in range(math.ceil(t), 41):
            assert plurigenus_lower_bound(m, t, k3) <= anti_plurigenus(example, m)


def test_nonpencil_by_degree():
    assert not nonpencil_by_degree(24, 169, 102, F(7, 102))  # equality, not strict
    assert nonpencil_by_degree(1, 3, 1, F(1))
    assert not nonpencil_by_degree(22, 260, 630, F(43, 315))


def test_nonpencil_by_slope():
    assert not nonpencil_by_slope(22, 260)
    assert nonpencil_by_slope(1, 14)
    assert not nonpencil_by_slope(1, 13)


def test_nonpencil_min_m_values():
    assert nonpencil_min_m(F(38, 5), F(43, 315), 630, 9, 2) == 23
    assert nonpencil_min_m(F(36, 23), F(10, 23), 23, 23, 1) == 12
    assert nonpencil_min_m(F(2), F(3, 14), 14, 14, 1) == 10


def test_growth_min_m_values():
    assert growth_min_m(F(24, 5), F(1), F(13, 420), 10) == 16
    assert growth_min_m(F(9, 2), F(1), F(47, 840), 8) == 12
    assert growth_min_m(F(17, 5), F(1), F(1, 30), 15) == 17


def test_n0_lower_bound_values():
    assert n0_lower_bound(840, 36, 1, 8) == 3
    assert n0_lower_bound(630, 63, 1, 9) == 2
    assert n0_lower_bound(60, 100, 2, 6) == 1


def test_two_system_bound_values():
    no1_5 = CriterionParams(
        m0=8, mu0=RationalBound.strict(2), nu0=1, r_max=11, r_x=84, m1=25
    )
    assert two_system_bound(2, no1_5) == 48
    rx840 = CriterionParams(
        m0=8, mu0=RationalBound.exact(8), nu0=1, r_max=8, r_x=840, m1=12
    )
    assert two_system_bound(3, rx840) == 36
    no13 = CriterionParams(
        m0=4, mu0=RationalBound.strict(1), nu0=1, r_max=17, r_x=102, m1=25
    )
    assert two_system_bound(2, no13) == 59
    assert two_system_bound(1, no13) == max(35, 2 + 75)
    with pytest.raises(ValueError):
        two_system_bound(4, no13)
    with pytest.raises(ValueError):
        two_system_bound(1, CriterionParams(m0=4, mu0=RationalBound.exact(4), nu0=1, r_max=9, r_x=9))


def test_beta_bound_rational_surd_case():
    params = CriterionParams(
        m0=8, mu0=RationalBound.exact(8), nu0=1, r_max=8, r_x=144, n0=1
    )
    # at beta = 9, sqrt(1 - 8/9) = 1/3 and every term collapses to a rational
    assert beta_bound(params, F(9)) == 44
    with pytest.raises(InvalidBeta):
        beta_bound(params, F(7))


def test_beta_middle_term_degenerates_at_eight():
    from fanocalc.criteria import beta_middle_term

    params = CriterionParams(
        m0=8, mu0=RationalBound.exact(3), nu0=2, r_max=5, r_x=100, n0=1
    )
    middle = beta_middle_term(params, F(8))
    assert middle.is_rational
    assert middle.a == 3 + 4 * 2 * 5  # mu0 + 4 nu0 rmax


def test_sqrt_bound_values():
    case0 = CriterionParams(
        m0=8, mu0=RationalBound.strict(1), nu0=1, r_max=8, r_x=840, n0=3
    )
    assert sqrt_bound(1, case0) == 48
    case3 = CriterionParams(
        m0=4, mu0=RationalBound.strict(1), nu0=2, r_max=12, r_x=84, n0=1
    )
    assert sqrt_bound(2, case3) == 52
    gate_fails = CriterionParams(
        m0=8, mu0=RationalBound.exact(1), nu0=1, r_max=2, r_x=100, n0=1
    )
    assert sqrt_bound(2, gate_fails) is INAPPLICABLE
    assert not sqrt_gate_holds(gate_fails)


def random_params(rng):
    m0 = rng.choice([1, 2, 4, 6, 8])
    strict = rng.random() < 0.5
    mu0_value = F(rng.randint(1, 80), rng.randint(1, 10))
    mu0 = RationalBound(mu0_value, strict)
    return CriterionParams(
        m0=m0,
        mu0=mu0,
        nu0=rng.randint(1, 3),
        r_max=rng.randint(2, 24),
        r_x=rng.randint(2, 840),
        n0=rng.randint(1, 4),
        m1=m0 + rng.randint(0, 40),
    )


def test_sqrt_bound_variant1_equals_beta8():
    rng = random.Random(7)
    for _ in range(300):
        params = random_params(rng)
        assert sqrt_bound(1, params) == beta_bound(params, F(8))


def test_sqrt_bound_variant2_equals_optimised_beta():
    rng = random.Random(8)
    checked = 0
    for _ in range(500):
        params = random_params(rng)
        if not sqrt_gate_holds(params):
            continue
        beta = optimal_beta(params)
        assert beta >= 8
        assert sqrt_bound(2, params) == beta_bound(params, beta)
        checked += 1
    assert checked > 200


def test_nonpencil_min_m_soundness_and_minimality():
    rng = random.Random(9)
    for _ in range(400):
        t = F(rng.randint(1, 80), rng.randint(1, 10))
        k3 = F(rng.randint(1, 500), rng.randint(1, 900))
        r_x = rng.randint(2, 840)
        r_mx = rng.randint(2, 24)
        variant = rng.choice([1, 2])
        m = nonpencil_min_m(t, k3, r_x, r_mx, variant)
        assert nonpencil_holds_at(m, t, k3, r_x, r_mx, variant)
        if m > 1:
            assert not nonpencil_holds_at(m - 1, t, k3, r_x, r_mx, variant)


def test_growth_min_m_soundness_and_minimality():
    rng = random.Random(10)
    for _ in range(400):
        t = F(rng.randint(1, 80), rng.randint(1, 10))
        l = F(rng.randint(1, 40), rng.randint(1, 10))
        k3 = F(rng.randint(1, 500), rng.randint(1, 900))
        r_mx = rng.randint(2, 24)
        m = growth_min_m(t, l, k3, r_mx)
        assert growth_holds_at(m, t, l, k3, r_mx)
        if m > 1:
            assert not growth_holds_at(m - 1, t, l, k3, r_mx)


def test_criterion_monotonicity_in_rx_and_n0():
    # the worst-case box evaluation leans on these directions
    rng = random.Random(13)
    for _ in range(200):
        params = random_params(rng)
        bigger_rx = dataclasses.replace(params, r_x=params.r_x + rng.randint(1, 200))
        bigger_n0 = dataclasses.replace(params, n0=params.n0 + rng.randint(1, 3))
        assert sqrt_bound(1, bigger_rx) >= sqrt_bound(1, params)
        assert sqrt_bound(1, bigger_n0) <= sqrt_bound(1, params)
        two = sqrt_bound(2, params)
        if two is not INAPPLICABLE:
            harder = sqrt_bound(2, bigger_n0)
            assert harder is not INAPPLICABLE and harder <= two
        for variant in (1, 2, 3):
            # the two-system criterion never reads r_X
            assert two_system_bound(variant, bigger_rx) == two_system_bound(
                variant, params
            )


def test_nonpencil_min_m_monotonicity():
    rng = random.Random(11)
    for _ in range(200):
        t = F(rng.randint(1, 40), rng.randint(1, 8))
        k3 = F(rng.randint(1, 200), rng.randint(1, 600))
        r_x = rng.randint(2, 600)
        r_mx = rng.randint(2, 20)
        for variant in (1, 2):
            base = nonpencil_min_m(t, k3, r_x, r_mx, variant)
            assert nonpencil_min_m(t, k3 * 2, r_x, r_mx, variant) <= base
        assert nonpencil_min_m(t, k3, r_x + 60, r_mx, 1) >= nonpencil_min_m(
            t, k3, r_x, r_mx, 1
        )


def test_criterion_bounds_are_minimal_thresholds():
    # every returned bound equals the max of its defining integer terms,
    # so m - 1 must violate at least one of them
    from fanocalc.criteria import sqrt_bound_terms, two_system_terms

    rng = random.Random(12)
    for _ in range(200):
        params = random_params(rng)
        for variant in (1, 2, 3):
            bound = two_system_bound(variant, params)
            terms = two_system_terms(variant, params)
            assert bound == max(terms.values())
            assert any(bound - 1 < value for value in terms.values())
        for variant in (1, 2):
            result = sqrt_bound(variant, params)
            if result is INAPPLICABLE:
                continue
            assert result == max(sqrt_bound_terms(variant, params).values())


def test_pencil_equality_analysis():
    seventeen = validate_basket([(1, 2), (1, 3), (1, 3), (8, 17)])
    report = pencil_equality_analysis(seventeen, 0, 24)
    assert report.status == "equal"
    assert report.rx_k3 == 7
    assert report.p_m == 169
    assert report.contradiction_if_pencil
    assert "torsion" in report.torsion_note

    example = validate_basket([(1, 2), (1, 2), (2, 5), (3, 7), (4, 9)])
    below = pencil_equality_analysis(example, 0, 22)
    assert below.status == "below"
    assert not below.contradiction_if_pencil

    strict = pencil_equality_analysis(validate_basket([(1, 2)]), 4, 3)
    assert strict.status == "strict"
    assert not strict.contradiction_if_pencil
