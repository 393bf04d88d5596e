"""Exact Reid-basket arithmetic for terminal 3-folds.

A basket is a finite multiset of coprime pairs ``(b, r)`` with
``0 < 2b <= r``; each pair records a virtual orbifold point of type
``(1/r)(1, -1, b)``.  Everything derived from a basket here -- sigma,
sigma', gamma, the Cartier index, the anti-plurigenera ``P_{-m}`` and
the anticanonical degree ``-K^3`` -- is computed with arbitrary
precision rationals.  Floating point never enters a decision path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, gcd, lcm
from typing import Iterable, Iterator


class InvalidPair(ValueError):
    """A pair (b, r) violating gcd(b, r) = 1 or 0 < 2b <= r."""


class EmptyBasketError(ValueError):
    """An operation that needs at least one orbifold point got none."""


class NonIntegralResult(ArithmeticError):
    """A Riemann-Roch value that must be an integer came out fractional.

    This signals an arithmetic bug (or deliberately corrupted input),
    never an expected condition on valid data.
    """


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"n"`` into an exact rational."""
    text = text.strip()
    if "/" in text:
        num, _, den = text.partition("/")
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def format_rational(value: Fraction | int) -> str:
    """Render a rational in lowest terms as ``"p/q"``, integers as ``"n"``."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class OrbifoldPair:
    """A virtual orbifold point of type (1/r)(1, -1, b)."""

    b: int
    r: int

    def __post_init__(self) -> None:
        if self.b <= 0 or 2 * self.b > self.r or gcd(self.b, self.r) != 1:
            raise InvalidPair(f"invalid orbifold pair ({self.b}, {self.r})")

    @property
    def key(self) -> tuple[int, int]:
        """Canonical sort key: ascending local index, then weight."""
        return (self.r, self.b)

    def as_fraction(self) -> Fraction:
        return Fraction(self.b, self.r)

    def gamma_weight(self) -> Fraction:
        """The pair's contribution r - 1/r to the gamma budget."""
        return Fraction(self.r * self.r - 1, self.r)


@dataclass(frozen=True, init=False)
class Basket:
    """A multiset of orbifold pairs, kept in canonical (r, b) order."""

    pairs: tuple[OrbifoldPair, ...]

    def __init__(self, pairs: Iterable[OrbifoldPair] = ()) -> None:
        ordered = tuple(sorted(pairs, key=lambda p: p.key))
        object.__setattr__(self, "pairs", ordered)

    def __iter__(self) -> Iterator[OrbifoldPair]:
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __str__(self) -> str:
        return "{" + ", ".join(f"({p.b},{p.r})" for p in self.pairs) + "}"

    @property
    def key(self) -> tuple[tuple[int, int], ...]:
        return tuple(p.key for p in self.pairs)

    def indices(self) -> tuple[int, ...]:
        return tuple(p.r for p in self.pairs)

    def to_json(self) -> list[list[int]]:
        """Canonical encoding: sorted list of [b, r] with repetition."""
        return [[p.b, p.r] for p in self.pairs]

    @classmethod
    def from_json(cls, data: Iterable[Iterable[int]]) -> "Basket":
        return validate_basket([(int(b), int(r)) for b, r in data])


def validate_basket(raw_pairs: Iterable[tuple[int, int]]) -> Basket:
    """Build a canonical basket, rejecting any invalid pair.

    The empty basket is legal (the Gorenstein case).
    """
    return Basket(OrbifoldPair(b, r) for b, r in raw_pairs)


def sigma(basket: Basket) -> int:
    """sigma(B) = sum of the local weights b_i."""
    return sum(p.b for p in basket)


def sigma_prime(basket: Basket) -> Fraction:
    """sigma'(B) = sum of b_i^2 / r_i, exactly."""
    return sum((Fraction(p.b * p.b, p.r) for p in basket), Fraction(0))


def gamma(basket: Basket) -> Fraction:
    """gamma(B) = sum 1/r_i - sum r_i + 24.

    Nonnegative for the basket of any terminal weak Q-Fano 3-fold; this
    is the finiteness constraint behind every enumeration in this
    package.
    """
    return sum((Fraction(1, p.r) for p in basket), Fraction(24)) - sum(
        p.r for p in basket
    )


def gamma_budget_used(basket: Basket) -> Fraction:
    """sum (r_i - 1/r_i); gamma(B) >= 0 is equivalent to this being <= 24."""
    return sum((p.gamma_weight() for p in basket), Fraction(0))


def cartier_index(basket: Basket) -> int:
    """lcm of the local indices; 1 for the empty (Gorenstein) basket."""
    return lcm(*(p.r for p in basket)) if len(basket) else 1


def r_max(basket: Basket) -> int:
    """Largest local index of the basket."""
    if not len(basket):
        raise EmptyBasketError("r_max of an empty basket")
    return basket.pairs[-1].r


def l_value(basket: Basket, n: int) -> Fraction:
    """Exact orbifold correction term l(n+1) of Reid's Riemann-Roch.

    l(n+1) = sum_i sum_{j=1}^{n} c_j (r_i - c_j) / (2 r_i), where c_j is
    the smallest non-negative residue of j*b_i mod r_i.  Since the inner
    summand is periodic in j with period r_i and a full period sums to
    (r_i^2 - 1)/12, whole cycles are added in closed form.
    """
    if n < 1:
        raise ValueError("l_value needs n >= 1")
    total = Fraction(0)
    for p in basket:
        cycles, rem = divmod(n, p.r)
        acc = cycles * Fraction(p.r * p.r - 1, 12)
        residue = 0
        for _ in range(rem):
            residue = (residue + p.b) % p.r
            acc += Fraction(residue * (p.r - residue), 2 * p.r)
        total += acc
    return total


@dataclass(frozen=True)
class FanoNumerics:
    """A basket together with P_{-1}, the full input of the RR formulas.

    Negative or zero -K^3 and negative derived P_{-2} are representable
    on purpose: the case enumerations discard such models by inspecting
    the numbers, so admissibility is a query, not a type invariant.
    """

    basket: Basket
    p1: int

    def __post_init__(self) -> None:
        if self.p1 < 0:
            raise ValueError("P_{-1} must be non-negative")

    @property
    def p2(self) -> int:
        """Derived P_{-2} = sigma(B) - 10 + 5*P_{-1}."""
        return sigma(self.basket) - 10 + 5 * self.p1

    @property
    def admissible(self) -> bool:
        return self.p2 >= 0


def deg_k3(model: FanoNumerics) -> Fraction:
    """-K^3 = 2*P_{-1} + sigma(B) - sigma'(B) - 6, exactly."""
    return 2 * model.p1 + sigma(model.basket) - sigma_prime(model.basket) - 6


def anti_plurigenus(model: FanoNumerics, m: int) -> int:
    """P_{-m} by orbifold Riemann-Roch.

    P_{-m} = m(m+1)(2m+1)/12 * (-K^3) + (2m+1) - l(m+1).  The value is
    an integer for every valid basket and P_{-1}; a fractional result
    raises NonIntegralResult.
    """
    if m < 1:
        raise ValueError("anti_plurigenus needs m >= 1")
    value = (
        Fraction(m * (m + 1) * (2 * m + 1), 12) * deg_k3(model)
        + (2 * m + 1)
        - l_value(model.basket, m)
    )
    if value.denominator != 1:
        raise NonIntegralResult(f"P_{{-{m}}} = {value} is not an integer")
    return int(value)


def refine_k3_lower(k3_lower: Fraction, r_x: int) -> Fraction:
    """Round a positive lower bound for -K^3 up to a multiple of 1/r_X.

    r_X * (-K^3) is a positive integer, so the smallest admissible value
    at least k3_lower is ceil(k3_lower * r_X) / r_X.
    """
    if k3_lower <= 0:
        raise ValueError("refine_k3_lower needs a positive bound")
    if r_x < 1:
        raise ValueError("Cartier index must be positive")
    return Fraction(ceil(k3_lower * r_x), r_x)
