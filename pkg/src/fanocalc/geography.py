"""Finite enumeration of baskets under exact numeric constraints.

gamma(B) >= 0 caps sum(r_i - 1/r_i) at 24, so every local index is at
most 24 and a basket has at most 16 pairs: the search space is finite.
Baskets are generated as multisets in canonical (r, b) order, each
exactly once, with branch-and-bound pruning from the gamma budget and
from sum(r - 1/r) >= (3/2) sum(b).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from fractions import Fraction
from math import gcd
from typing import Iterator

from .basket import (
    Basket,
    FanoNumerics,
    OrbifoldPair,
    anti_plurigenus,
    cartier_index,
    deg_k3,
    format_rational,
    gamma,
    gamma_budget_used,
    parse_rational,
    r_max,
    sigma,
    sigma_prime,
)

GAMMA_BUDGET = Fraction(24)


class UnboundedSearch(ValueError):
    """The constraint set admits no finite search bound."""


class NoAdmissibleBasket(LookupError):
    """A minimisation query matched no basket at all."""


@dataclass(frozen=True)
class PlurigenusFilter:
    """A requirement on a single anti-plurigenus, e.g. P_{-5} >= 1."""

    m: int
    op: str  # one of <, <=, ==, >=, >
    value: int

    _OPS = {
        "<": int.__lt__,
        "<=": int.__le__,
        "==": int.__eq__,
        ">=": int.__ge__,
        ">": int.__gt__,
    }

    def holds(self, p_m: int) -> bool:
        return self._OPS[self.op](p_m, self.value)


@dataclass(frozen=True)
class BasketConstraints:
    """A conjunction of exact constraints a basket must satisfy.

    ``gamma_nonneg`` doubles as the termination bound; switching it off
    requires an explicit cap ``max_weight`` on sum(r - 1/r).  The
    p1-dependent constraints (k3_positive, p2_derived_min, plurigenus
    filters, the monotonicity filter) need ``p1`` to be set.

    ``index_multiset`` pins the multiset of local indices exactly; it is
    how "R_X = {7, 8, 9}" style minimisations are phrased.
    """

    gamma_nonneg: bool = True
    max_weight: Fraction | None = None
    sigma_min: int | None = None
    require_index: frozenset[int] = frozenset()
    index_multiset: tuple[int, ...] | None = None
    r_max_range: tuple[int, int] | None = None
    p1: int | None = None
    k3_positive: bool = False
    p2_derived_min: int | None = None
    plurigenus_filters: tuple[PlurigenusFilter, ...] = ()
    monotone_when_p1_positive: bool = False

    def __post_init__(self) -> None:
        needs_p1 = (
            self.k3_positive
            or self.p2_derived_min is not None
            or self.plurigenus_filters
            or self.monotone_when_p1_positive
        )
        if needs_p1 and self.p1 is None:
            raise ValueError("p1 is required by the enabled constraints")
        if self.r_max_range is not None:
            lo, hi = self.r_max_range
            if not 2 <= lo <= hi:
                raise ValueError("bad r_max range")

    # -- termination ---------------------------------------------------

    def weight_budget(self) -> Fraction:
        if self.gamma_nonneg:
            return (
                GAMMA_BUDGET
                if self.max_weight is None
                else min(GAMMA_BUDGET, self.max_weight)
            )
        if self.max_weight is not None:
            return self.max_weight
        raise UnboundedSearch(
            "no finite bound: enable gamma_nonneg or supply max_weight"
        )

    # -- post-hoc check ------------------------------------------------

    def satisfies(self, basket: Basket) -> bool:
        """Full re-evaluation of every enabled constraint."""
        if self.gamma_nonneg and gamma(basket) < 0:
            return False
        if self.max_weight is not None and gamma_budget_used(basket) > self.max_weight:
            return False
        if self.sigma_min is not None and sigma(basket) < self.sigma_min:
            return False
        indices = basket.indices()
        if any(q not in indices for q in self.require_index):
            return False
        if self.index_multiset is not None and tuple(sorted(indices)) != tuple(
            sorted(self.index_multiset)
        ):
            return False
        if self.r_max_range is not None:
            lo, hi = self.r_max_range
            if not len(basket) or not lo <= r_max(basket) <= hi:
                return False
        if self.p1 is not None:
            model = FanoNumerics(basket, self.p1)
            if self.k3_positive and deg_k3(model) <= 0:
                return False
            if self.p2_derived_min is not None and model.p2 < self.p2_derived_min:
                return False
            for filt in self.plurigenus_filters:
                if not filt.holds(anti_plurigenus(model, filt.m)):
                    return False
            if (
                self.monotone_when_p1_positive
                and self.p1 >= 1
                and not plurigenera_nondecreasing(model)
            ):
                return False
        return True

    # -- JSON ------------------------------------------------------------

    def to_json(self) -> dict:
        out: dict = {"gamma_nonneg": self.gamma_nonneg}
        if self.max_weight is not None:
            out["max_weight"] = format_rational(self.max_weight)
        if self.sigma_min is not None:
            out["sigma_min"] = self.sigma_min
        if self.require_index:
            out["require_index"] = sorted(self.require_index)
        if self.index_multiset is not None:
            out["index_multiset"] = list(self.index_multiset)
        if self.r_max_range is not None:
            out["r_max_range"] = list(self.r_max_range)
        if self.p1 is not None:
            out["p1"] = self.p1
        if self.k3_positive:
            out["k3_positive"] = True
        if self.p2_derived_min is not None:
            out["p2_derived_min"] = self.p2_derived_min
        if self.plurigenus_filters:
            out["plurigenus_filters"] = [
                {"m": f.m, "op": f.op, "value": f.value}
                for f in self.plurigenus_filters
            ]
        if self.monotone_when_p1_positive:
            out["monotone_when_p1_positive"] = True
        return out

    @classmethod
    def from_json(cls, data: dict) -> "BasketConstraints":
        filters = tuple(
            PlurigenusFilter(int(f["m"]), str(f["op"]), int(f["value"]))
            for f in data.get("plurigenus_filters", ())
        )
        return cls(
            gamma_nonneg=bool(data.get("gamma_nonneg", True)),
            max_weight=(
                parse_rational(data["max_weight"]) if "max_weight" in data else None
            ),
            sigma_min=data.get("sigma_min"),
            require_index=frozenset(data.get("require_index", ())),
            index_multiset=(
                tuple(data["index_multiset"]) if "index_multiset" in data else None
            ),
            r_max_range=(
                tuple(data["r_max_range"]) if "r_max_range" in data else None
            ),
            p1=data.get("p1"),
            k3_positive=bool(data.get("k3_positive", False)),
            p2_derived_min=data.get("p2_derived_min"),
            plurigenus_filters=filters,
            monotone_when_p1_positive=bool(
                data.get("monotone_when_p1_positive", False)
            ),
        )


def plurigenera_nondecreasing(model: FanoNumerics, up_to: int = 8) -> bool:
    """P_{-1} <= P_{-2} <= ... <= P_{-up_to}, with P_0 = 1 in front.

    Multiplication by a section of -K_X forces this whenever P_{-1} > 0,
    so a drop anywhere below up_to rules the basket out.
    """
    previous = 1
    for m in range(1, up_to + 1):
        current = anti_plurigenus(model, m)
        if current < previous:
            return False
        previous = current
    return True


def _valid_weights(r: int) -> list[int]:
    return [b for b in range(1, r // 2 + 1) if gcd(b, r) == 1]


def candidate_pairs(r_hi: int) -> list[OrbifoldPair]:
    """All valid pairs with index <= r_hi in canonical (r, b) order."""
    return [OrbifoldPair(b, r) for r in range(2, r_hi + 1) for b in _valid_weights(r)]


def _enumerate_free(constraints: BasketConstraints) -> Iterator[Basket]:
    budget = constraints.weight_budget()
    r_cap = min(
        int(budget) + 1,
        constraints.r_max_range[1] if constraints.r_max_range else 10**9,
    )
    pairs = candidate_pairs(r_cap)
    weights = [p.gamma_weight() for p in pairs]
    required = sorted(constraints.require_index)
    sigma_min = constraints.sigma_min

    stack: list[OrbifoldPair] = []

    def emit() -> Iterator[Basket]:
        basket = Basket(stack)
        if constraints.satisfies(basket):
            yield basket

    def walk(start: int, left: Fraction, sig: int) -> Iterator[Basket]:
        yield from emit()
        # a missing required index below the next candidate can never appear
        have = {p.r for p in stack}
        missing = [q for q in required if q not in have]
        cap = missing[0] if missing else None
        for i in range(start, len(pairs)):
            pair = pairs[i]
            if weights[i] > left:
                break  # weights are nondecreasing along the candidate list
            if cap is not None and pair.r > cap:
                break
            remaining = left - weights[i]
            new_sig = sig + pair.b
            # sum(r - 1/r) >= (3/2) sum(b) caps the reachable sigma
            if sigma_min is not None and new_sig + remaining * Fraction(2, 3) < sigma_min:
                continue
            stack.append(pair)
            yield from walk(i, remaining, new_sig)
            stack.pop()

    yield from walk(0, budget, 0)


def _enumerate_fixed_indices(constraints: BasketConstraints) -> Iterator[Basket]:
    indices = tuple(sorted(constraints.index_multiset or ()))

    def assign(position: int, chosen: list[OrbifoldPair]) -> Iterator[Basket]:
        if position == len(indices):
            basket = Basket(chosen)
            if constraints.satisfies(basket):
                yield basket
            return
        r = indices[position]
        floor_b = 1
        if position > 0 and indices[position - 1] == r:
            floor_b = chosen[-1].b  # nondecreasing b on equal indices: no duplicates
        for b in _valid_weights(r):
            if b < floor_b:
                continue
            chosen.append(OrbifoldPair(b, r))
            yield from assign(position + 1, chosen)
            chosen.pop()

    yield from assign(0, [])


def enumerate_baskets(constraints: BasketConstraints) -> list[Basket]:
    """All baskets satisfying the constraints, canonically ordered.

    Raises UnboundedSearch when no finite bound is available.
    """
    if constraints.index_multiset is not None:
        found = list(_enumerate_fixed_indices(constraints))
    else:
        found = list(_enumerate_free(constraints))
    found.sort(key=lambda b: b.key)
    return found


def min_positive_k3(constraints: BasketConstraints) -> tuple[Fraction, Basket]:
    """Minimum of -K^3 over the constrained baskets with -K^3 > 0.

    p1 must be fixed in the constraints; the positivity filter is forced
    on.  Ties are broken by canonical basket order so the witness is
    deterministic.
    """
    if constraints.p1 is None:
        raise ValueError("min_positive_k3 needs a fixed p1")
    effective = replace(constraints, k3_positive=True)
    best: tuple[Fraction, Basket] | None = None
    for basket in enumerate_baskets(effective):
        value = deg_k3(FanoNumerics(basket, effective.p1))
        if best is None or (value, basket.key) < (best[0], best[1].key):
            best = (value, basket)
    if best is None:
        raise NoAdmissibleBasket("no basket with -K^3 > 0 under the constraints")
    return best


def annotate(basket: Basket, p1: int | None = None) -> dict:
    """JSON-ready summary of a basket's invariants ("p/q" strings)."""
    out = {
        "basket": basket.to_json(),
        "sigma": format_rational(sigma(basket)),
        "sigma_prime": format_rational(sigma_prime(basket)),
        "gamma": format_rational(gamma(basket)),
        "r_X": format_rational(cartier_index(basket)),
        "r_max": format_rational(r_max(basket)) if len(basket) else None,
    }
    if p1 is not None:
        out["k3"] = format_rational(deg_k3(FanoNumerics(basket, p1)))
    return out


def load_constraints(text: str) -> BasketConstraints:
    return BasketConstraints.from_json(json.loads(text))
