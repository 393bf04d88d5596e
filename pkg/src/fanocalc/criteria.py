"""Exact birationality and non-pencil criteria for weak Q-Fano 3-folds.

Every criterion here reduces to integer thresholds computed from exact
rationals and quadratic surds.  A recurring subtlety is that the
auxiliary coefficient mu0' is often known only as a strict upper bound
("take mu0' = k/(P_{-k}-1) < 1"); RationalBound carries that strictness
and its integer parts are taken in the worst case over the admissible
values, excluding the endpoint exactly when it is rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor

from .basket import (
    Basket,
    FanoNumerics,
    anti_plurigenus,
    cartier_index,
    deg_k3,
)
from .surd import QuadraticSurd, sqrt_exact, surd_from_sqrt


class InvalidBeta(ValueError):
    """The free parameter of the surd criterion must be >= 8."""


class _Inapplicable:
    """Sentinel: a criterion's side condition failed (not an error)."""

    def __repr__(self) -> str:  # pragma: no cover
        return "Inapplicable"

    def __bool__(self) -> bool:
        return False


INAPPLICABLE = _Inapplicable()


@dataclass(frozen=True)
class RationalBound:
    """Either an exact rational value or a strict upper bound on one.

    strict_upper=False models "x = value"; strict_upper=True models
    "0 < x < value".  floor_affine/ceil_affine return the supremum of
    floor/ceil(coeff*x + offset) over the admissible x: for a strict
    bound the floor drops by one exactly when the endpoint value is an
    integer, while the ceiling is unaffected.
    """

    value: Fraction
    strict_upper: bool = False

    @classmethod
    def exact(cls, value: Fraction | int) -> "RationalBound":
        return cls(Fraction(value), False)

    @classmethod
    def strict(cls, value: Fraction | int) -> "RationalBound":
        return cls(Fraction(value), True)

    def floor_affine(self, coeff: Fraction | int = 1, offset: Fraction | int = 0) -> int:
        v = Fraction(coeff) * self.value + Fraction(offset)
        if self.strict_upper and v.denominator == 1:
            return int(v) - 1
        return floor(v)

    def ceil_affine(self, coeff: Fraction | int = 1, offset: Fraction | int = 0) -> int:
        return ceil(Fraction(coeff) * self.value + Fraction(offset))

    def to_json(self) -> dict:
        from .basket import format_rational

        return {"value": format_rational(self.value), "strict_upper": self.strict_upper}


def cmp_exceeds_sqrt(lhs: Fraction, base: Fraction, radicand: Fraction) -> bool:
    """Decide lhs > base + sqrt(radicand) exactly (radicand >= 0)."""
    if radicand < 0:
        raise ValueError("radicand must be non-negative")
    diff = Fraction(lhs) - Fraction(base)
    if diff <= 0:
        return False
    return diff * diff > radicand


def floor_add_sqrt(base: RationalBound, radicand: Fraction) -> int:
    """Largest integer <= x + sqrt(radicand) under the bound semantics.

    With an irrational square root the supremum is never an integer, so
    strict and exact bounds agree; a rational root falls back to the
    affine rule, which excludes an integer endpoint of a strict bound.
    """
    if radicand < 0:
        raise ValueError("radicand must be non-negative")
    root = sqrt_exact(Fraction(radicand))
    if root is not None:
        return base.floor_affine(1, root)
    return surd_from_sqrt(base.value, Fraction(1), Fraction(radicand)).floor()


@dataclass(frozen=True)
class BaselineAssumptions:
    """Baseline m0 and -K^3 lower bound implied by the plurigenus regime."""

    m0: int
    k3_lower: Fraction
    rx_fact: str
    m0_alt: int | None = None  # available once P_{-4} >= 2


def baseline_parameters(p1: int, p2_positive: bool, p4_ge2: bool) -> BaselineAssumptions:
    """Standing numeric facts for a terminal weak Q-Fano 3-fold.

    In general P_{-8} >= 2 and -K^3 >= 1/330.  When P_{-1} = 0 but
    P_{-2} > 0, already P_{-6} >= 2 and -K^3 >= 1/70; if additionally
    P_{-4} >= 2 then -K^3 >= 1/30 (and m0 = 4 becomes available).
    """
    if p1 > 0 and not p2_positive:
        raise ValueError("P_{-2} > 0 is forced when P_{-1} > 0")
    rx_fact = "r_X = 840 or r_X <= 660"
    if p1 == 0 and p2_positive:
        if p4_ge2:
            return BaselineAssumptions(6, Fraction(1, 30), rx_fact, m0_alt=4)
        return BaselineAssumptions(6, Fraction(1, 70), rx_fact)
    return BaselineAssumptions(8, Fraction(1, 330), rx_fact)


def plurigenus_lower_bound(m: int, t: Fraction, k3: Fraction) -> Fraction:
    """Lower bound m(m+1)(2m+1)/12 * k3 + 1 - 2m/t for P_{-m}.

    Only valid for m >= t; the non-pencil solvers enforce that as their
    first condition.
    """
    if m < 1:
        raise ValueError("m must be positive")
    return Fraction(m * (m + 1) * (2 * m + 1), 12) * k3 + 1 - Fraction(2 * m) / t


def nonpencil_by_degree(m: int, p_m: int, r_x: int, k3: Fraction) -> bool:
    """P_{-m} > r_X * (-K^3) * m + 1 forces |-mK| off a pencil."""
    return p_m > r_x * Fraction(k3) * m + 1


def nonpencil_by_slope(m: int, p_m: int) -> bool:
    """P_{-m} > 12m + 1 forces |-mK| off a pencil."""
    return p_m > 12 * m + 1


def _smallest_integer_exceeding_sqrt(radicand16: Fraction) -> int:
    """Smallest m with m > -3/4 + sqrt(radicand16/16)... solved as (4m+3)^2 > radicand16."""
    # smallest n with n^2 > radicand16, then smallest m with 4m + 3 >= n
    from .surd import floor_sqrt

    n = floor_sqrt(radicand16) + 1
    return max(1, ceil(Fraction(n - 3, 4)))


def _np_radicand(t: Fraction, k3: Fraction, r_x: int, variant: int) -> Fraction:
    if variant == 1:
        return 12 / (t * k3) + 6 * r_x + Fraction(1, 16)
    if variant == 2:
        return 12 / (t * k3) + 72 / k3 + Fraction(1, 16)
    raise ValueError("variant must be 1 or 2")


def nonpencil_holds_at(
    m: int, t: Fraction, k3: Fraction, r_x: int, r_max: int, variant: int
) -> bool:
    """The three non-pencil inequalities, checked exactly at a given m."""
    if m < t or m < Fraction(r_max) * t / 3:
        return False
    return cmp_exceeds_sqrt(
        Fraction(m), Fraction(-3, 4), _np_radicand(t, k3, r_x, variant)
    )


def nonpencil_min_m(t: Fraction, k3: Fraction, r_x: int, r_max: int, variant: int) -> int:
    """Smallest m certifying |-mK| not composed with a pencil.

    Conditions: m >= t, m >= r_max*t/3 and
      variant 1:  m > -3/4 + sqrt(12/(t*k3) + 6*r_X + 1/16)
      variant 2:  m > -3/4 + sqrt(12/(t*k3) + 72/k3 + 1/16)
    """
    if t <= 0 or k3 <= 0:
        raise ValueError("t and k3 must be positive")
    sqrt_term = _smallest_integer_exceeding_sqrt(
        16 * _np_radicand(t, k3, r_x, variant)
    )
    return max(ceil(t), ceil(Fraction(r_max) * t / 3), sqrt_term, 1)


def growth_holds_at(m: int, t: Fraction, l: Fraction, k3: Fraction, r_max: int) -> bool:
    """Exact check of the inequalities certifying P_{-m} - 1 > m/l."""
    if m < t or m < Fraction(r_max) * t / 3:
        return False
    radicand = 12 / (t * k3) + 6 / (l * k3) + Fraction(1, 16)
    return cmp_exceeds_sqrt(Fraction(m), Fraction(-3, 4), radicand)


def growth_min_m(t: Fraction, l: Fraction, k3: Fraction, r_max: int) -> int:
    """Smallest m with m >= t, m >= r_max*t/3 and the sqrt inequality
    guaranteeing P_{-m} - 1 > m/l."""
    if t <= 0 or l <= 0 or k3 <= 0:
        raise ValueError("t, l and k3 must be positive")
    radicand = 12 / (t * k3) + 6 / (l * k3) + Fraction(1, 16)
    sqrt_term = _smallest_integer_exceeding_sqrt(16 * radicand)
    return max(ceil(t), ceil(Fraction(r_max) * t / 3), sqrt_term, 1)


def n0_lower_bound(r_x: int, m1: int, nu0: int, r_max: int) -> int:
    """N_0 >= ceil(r_X / (m1 * nu0 * r_max)), clamped to at least 1."""
    return max(1, ceil(Fraction(r_x, m1 * nu0 * r_max)))


def a_of(m0: int) -> int:
    """The constant a(m0): 6 for m0 >= 2, else 1."""
    return 6 if m0 >= 2 else 1


@dataclass(frozen=True)
class CriterionParams:
    """Inputs shared by the birationality criteria.

    m1 may be omitted for the criteria that do not use it; n0 is a lower
    bound for N_0 = r_X * (pull-back of -K_X)^2 . S, an integer >= 1.
    """

    m0: int
    mu0: RationalBound
    nu0: int
    r_max: int
    r_x: int
    n0: int = 1
    m1: int | None = None

    def __post_init__(self) -> None:
        if self.m0 < 1 or self.nu0 < 1 or self.r_max < 2 or self.r_x < 1:
            raise ValueError("bad criterion parameters")
        if self.n0 < 1:
            raise ValueError("n0 must be at least 1")
        if self.m1 is not None and self.m1 < self.m0:
            raise ValueError("m1 must be at least m0")

    @property
    def a_m0(self) -> int:
        return a_of(self.m0)

    def _need_m1(self) -> int:
        if self.m1 is None:
            raise ValueError("this criterion needs m1")
        return self.m1


def two_system_terms(variant: int, p: CriterionParams) -> dict[str, int]:
    """The integer thresholds of the two-linear-system criterion."""
    m1 = p._need_m1()
    terms = {"m0+m1+a": p.m0 + m1 + p.a_m0}
    if variant == 1:
        terms["floor(3mu0)+3m1"] = p.mu0.floor_affine(3) + 3 * m1
    elif variant == 2:
        terms["floor(5/3(mu0+m1))"] = p.mu0.floor_affine(
            Fraction(5, 3), Fraction(5, 3) * m1
        )
        terms["floor(mu0)+m1+2rmax"] = p.mu0.floor_affine() + m1 + 2 * p.r_max
    elif variant == 3:
        terms["floor(mu0)+m1+2nu0rmax"] = (
            p.mu0.floor_affine() + m1 + 2 * p.nu0 * p.r_max
        )
    else:
        raise ValueError("variant must be 1, 2 or 3")
    return terms


def two_system_bound(variant: int, p: CriterionParams) -> int:
    """Smallest m certified birational by the chosen two-system variant."""
    return max(two_system_terms(variant, p).values())


def beta_middle_term(p: CriterionParams, beta: Fraction) -> QuadraticSurd:
    """Exact value of mu0' + 4 nu0 r_max / (1 + sqrt(1 - 8/beta)).

    Rationalised as mu0' + (beta/2) nu0 r_max (1 - sqrt(1 - 8/beta)) so
    it is a single quadratic surd; mu0' enters at its supremum.
    """
    if beta < 8:
        raise InvalidBeta("beta must be at least 8")
    c = Fraction(beta, 2) * p.nu0 * p.r_max
    return surd_from_sqrt(p.mu0.value + c, -c, 1 - Fraction(8) / beta)


def beta_bound_terms(p: CriterionParams, beta: Fraction) -> dict[str, int]:
    beta = Fraction(beta)
    if beta < 8:
        raise InvalidBeta("beta must be at least 8")
    middle = beta_middle_term(p, beta)
    return {
        "m0+a": p.m0 + p.a_m0,
        "ceil(middle)-1": middle.ceil() - 1,
        "floor(mu0+sqrt(beta rx/n0))": floor_add_sqrt(
            p.mu0, beta * Fraction(p.r_x, p.n0)
        ),
    }


def beta_bound(p: CriterionParams, beta: Fraction) -> int:
    """Smallest m certified birational by the surd criterion at this beta."""
    return max(beta_bound_terms(p, beta).values())


def sqrt_gate_holds(p: CriterionParams) -> bool:
    """Side condition nu0 * r_max >= sqrt(r_X / (2 N_0)), exactly."""
    lhs = p.nu0 * p.r_max
    return Fraction(lhs * lhs) >= Fraction(p.r_x, 2 * p.n0)


def sqrt_bound_terms(variant: int, p: CriterionParams) -> dict[str, int]:
    if variant == 1:
        return {
            "m0+a": p.m0 + p.a_m0,
            "ceil(mu0)+4nu0rmax-1": p.mu0.ceil_affine() + 4 * p.nu0 * p.r_max - 1,
            "floor(mu0+sqrt(8rx/n0))": floor_add_sqrt(
                p.mu0, Fraction(8 * p.r_x, p.n0)
            ),
        }
    if variant == 2:
        offset = 2 * p.nu0 * p.r_max + Fraction(p.r_x, p.n0 * p.nu0 * p.r_max)
        return {
            "m0+a": p.m0 + p.a_m0,
            "floor(mu0+2nu0rmax+rx/(n0 nu0 rmax))": p.mu0.floor_affine(1, offset),
        }
    raise ValueError("variant must be 1 or 2")


def sqrt_bound(variant: int, p: CriterionParams) -> int | _Inapplicable:
    """The two ready-to-use specialisations of the surd criterion.

    Variant 1 is the criterion at beta = 8.  Variant 2 optimises beta
    and needs the gate nu0*r_max >= sqrt(r_X/(2N_0)); when the gate
    fails the result is INAPPLICABLE, a value rather than an error.
    """
    if variant == 2 and not sqrt_gate_holds(p):
        return INAPPLICABLE
    return max(sqrt_bound_terms(variant, p).values())


def optimal_beta(p: CriterionParams) -> Fraction:
    """The beta value whose surd criterion reproduces sqrt_bound variant 2."""
    inner = 2 * p.nu0 * p.r_max + Fraction(p.r_x, p.n0 * p.nu0 * p.r_max)
    return Fraction(p.n0, p.r_x) * inner * inner


@dataclass(frozen=True)
class PencilEqualityReport:
    """Boundary analysis of P_{-m} against r_X(-K^3) m + 1.

    When equality holds and |-mK| were composed with a pencil, the
    Cartier-degree product r_X(-K^3) would have to equal 1 for a
    terminal Q-Fano; contradiction_if_pencil records whether that fails.
    The clause about h^0(-kK) = k+1 depends on torsion-freeness of the
    divisor class group, which a basket cannot decide, so it is carried
    only as a note.
    """

    status: str  # "strict" | "equal" | "below"
    p_m: int
    bound: Fraction
    rx_k3: Fraction
    contradiction_if_pencil: bool
    torsion_note: str = (
        "if the class group has no m-torsion, equality with a pencil would "
        "force h^0(-kK) = k+1 for all k <= m"
    )


def pencil_equality_analysis(basket: Basket, p1: int, m: int) -> PencilEqualityReport:
    """Classify P_{-m} against the degree bound r_X(-K^3) m + 1."""
    model = FanoNumerics(basket, p1)
    r_x = cartier_index(basket)
    k3 = deg_k3(model)
    p_m = anti_plurigenus(model, m)
    rx_k3 = r_x * k3
    bound = rx_k3 * m + 1
    if p_m > bound:
        status = "strict"
    elif p_m == bound:
        status = "equal"
    else:
        status = "below"
    return PencilEqualityReport(
        status=status,
        p_m=p_m,
        bound=bound,
        rx_k3=rx_k3,
        contradiction_if_pencil=(status == "equal" and rx_k3 != 1),
    )
