import json
from fractions import Fraction
from math import gcd
from pathlib import Path

import pytest

from fanocalc.basket import (
    Basket,
    FanoNumerics,
    OrbifoldPair,
    anti_plurigenus,
    deg_k3,
    gamma,
    parse_rational,
    r_max,
    sigma,
    validate_basket,
)
from fanocalc.geography import (
    BasketConstraints,
    NoAdmissibleBasket,
    PlurigenusFilter,
    UnboundedSearch,
    enumerate_baskets,
    min_positive_k3,
    plurigenera_nondecreasing,
)

DATA = Path(__file__).resolve().parents[1] / "src" / "fanocalc" / "data"

CONDITION_SIGMA11 = dict(gamma_nonneg=True, require_index=frozenset({2}), sigma_min=11)


def table1_rows():
    table = json.loads((DATA / "table1.json").read_text())
    return [(Basket.from_json(r["basket"]), r["k3"]) for r in table["rows"]]


def test_table1_reproduction():
    constraints = BasketConstraints(**CONDITION_SIGMA11, r_max_range=(16, 21), p1=0)
    got = enumerate_baskets(constraints)
    rows = table1_rows()
    assert len(got) == 19
    assert set(got) == {b for b, _ in rows}
    negatives = 0
    for basket, k3_text in rows:
        k3 = deg_k3(FanoNumerics(basket, 0))
        if k3_text == "<0":
            assert k3 < 0
            negatives += 1
        else:
            assert k3 == parse_rational(k3_text)
    assert negatives == 9


def test_no_basket_between_22_and_24():
    constraints = BasketConstraints(**CONDITION_SIGMA11, r_max_range=(22, 24))
    assert enumerate_baskets(constraints) == []


def test_unique_basket_at_rmax_14():
    constraints = BasketConstraints(**CONDITION_SIGMA11, r_max_range=(14, 14), p1=0)
    got = enumerate_baskets(constraints)
    assert got == [validate_basket([(1, 2)] * 6 + [(5, 14)])]
    assert deg_k3(FanoNumerics(got[0], 0)) == Fraction(3, 14)


def test_unbounded_search_rejected():
    with pytest.raises(UnboundedSearch):
        enumerate_baskets(BasketConstraints(gamma_nonneg=False))


def test_explicit_weight_cap_enumeration():
    constraints = BasketConstraints(gamma_nonneg=False, max_weight=Fraction(4))
    got = enumerate_baskets(constraints)
    # pairs of weight <= 4: (1,2) [3/2], (1,3) [8/3], (1,4) [15/4]
    assert validate_basket([]) in got
    assert validate_basket([(1, 2), (1, 2)]) in got
    assert validate_basket([(1, 4)]) in got
    assert all(
        sum((p.gamma_weight() for p in b), Fraction(0)) <= 4 for b in got
    )


# -- minimisation ---------------------------------------------------------------

def test_min_k3_indices_789():
    constraints = BasketConstraints(
        index_multiset=(7, 8, 9), p1=1, p2_derived_min=1, k3_positive=True
    )
    value, witness = min_positive_k3(constraints)
    assert value == Fraction(73, 504)
    assert witness == validate_basket([(3, 7), (1, 8), (2, 9)])


def test_min_k3_indices_3_4_7_10():
    constraints = BasketConstraints(
        index_multiset=(3, 4, 7, 10), p1=1, p2_derived_min=1, k3_positive=True
    )
    value, witness = min_positive_k3(constraints)
    assert value == Fraction(13, 420)
    assert witness == validate_basket([(1, 3), (1, 4), (3, 7), (1, 10)])


def test_min_k3_single_pair():
    constraints = BasketConstraints(index_multiset=(2,), p1=4)
    value, witness = min_positive_k3(constraints)
    # 2*4 + 1 - 1/2 - 6
    assert value == Fraction(5, 2)
    assert witness == validate_basket([(1, 2)])


def test_min_k3_no_candidates():
    constraints = BasketConstraints(
        index_multiset=(2,), p1=0, p2_derived_min=0, k3_positive=True
    )
    with pytest.raises(NoAdmissibleBasket):
        min_positive_k3(constraints)


# -- the monotone plurigenus filter ----------------------------------------------

def test_monotone_filter_rejects_vanishing_plurigenus():
    basket = validate_basket([(1, 2), (1, 2), (1, 3), (2, 7), (1, 11)])
    model = FanoNumerics(basket, 1)
    assert anti_plurigenus(model, 5) == 0
    assert not plurigenera_nondecreasing(model)
    constraints = BasketConstraints(
        index_multiset=(2, 2, 3, 7, 11),
        p1=1,
        p2_derived_min=1,
        k3_positive=True,
        monotone_when_p1_positive=True,
    )
    assert basket not in enumerate_baskets(constraints)
    value, _ = min_positive_k3(constraints)
    assert value == Fraction(37, 231)  # not the absurd 1/231


def test_plurigenus_filters():
    constraints = BasketConstraints(
        index_multiset=(2, 2, 3, 7, 11),
        p1=1,
        plurigenus_filters=(PlurigenusFilter(5, "==", 0),),
    )
    got = enumerate_baskets(constraints)
    assert got == [validate_basket([(1, 2), (1, 2), (1, 3), (2, 7), (1, 11)])]


# -- soundness and completeness ---------------------------------------------------

def independent_predicate(basket: Basket, c: BasketConstraints) -> bool:
    # re-implementation from scratch, used as the oracle
    if c.gamma_nonneg:
        if sum(Fraction(1, p.r) for p in basket) - sum(p.r for p in basket) + 24 < 0:
            return False
    if c.max_weight is not None:
        if sum(p.r - Fraction(1, p.r) for p in basket) > c.max_weight:
            return False
    if c.sigma_min is not None and sum(p.b for p in basket) < c.sigma_min:
        return False
    for q in c.require_index:
        if q not in [p.r for p in basket]:
            return False
    if c.r_max_range is not None:
        if not basket.pairs:
            return False
        biggest = max(p.r for p in basket)
        if not c.r_max_range[0] <= biggest <= c.r_max_range[1]:
            return False
    if c.p1 is not None:
        model = FanoNumerics(basket, c.p1)
        if c.k3_positive and deg_k3(model) <= 0:
            return False
        if c.p2_derived_min is not None and model.p2 < c.p2_derived_min:
            return False
    return True


def naive_small_baskets(r_sum_cap: int = 12):
    candidates = [
        OrbifoldPair(b, r)
        for r in range(2, r_sum_cap + 1)
        for b in range(1, r // 2 + 1)
        if gcd(b, r) == 1
    ]
    results = []

    def walk(start, remaining, chosen):
        results.append(Basket(chosen))
        for i in range(start, len(candidates)):
            pair = candidates[i]
            if pair.r > remaining:
                continue
            walk(i, remaining - pair.r, chosen + [pair])

    walk(0, r_sum_cap, [])
    return results


SMALL_CONSTRAINT_SETS = [
    BasketConstraints(gamma_nonneg=True),
    BasketConstraints(gamma_nonneg=True, sigma_min=4),
    BasketConstraints(gamma_nonneg=True, require_index=frozenset({2}), sigma_min=3),
    BasketConstraints(gamma_nonneg=True, r_max_range=(3, 7)),
    BasketConstraints(gamma_nonneg=True, p1=1, k3_positive=True),
    BasketConstraints(gamma_nonneg=True, p1=0, p2_derived_min=0),
]


@pytest.mark.parametrize("constraints", SMALL_CONSTRAINT_SETS)
def test_enumeration_matches_naive_generator_on_small_space(constraints):
    universe = naive_small_baskets()
    expected = {
        b for b in universe if independent_predicate(b, constraints)
    }
    got = {
        b
        for b in enumerate_baskets(constraints)
        if sum(p.r for p in b) <= 12
    }
    assert got == expected


@pytest.mark.parametrize("constraints", SMALL_CONSTRAINT_SETS)
def test_enumeration_soundness(constraints):
    for basket in enumerate_baskets(constraints):
        assert independent_predicate(basket, constraints)


def test_enumeration_output_is_sorted_and_unique():
    constraints = BasketConstraints(**CONDITION_SIGMA11, r_max_range=(16, 21))
    got = enumerate_baskets(constraints)
    keys = [b.key for b in got]
    assert keys == sorted(keys)
    assert len(set(keys)) == len(keys)
