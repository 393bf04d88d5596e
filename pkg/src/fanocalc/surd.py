"""Exact decisions about numbers of the form a + b*sqrt(d).

The birationality criteria compare integers against thresholds like
mu0' + sqrt(beta * r_X / N_0).  Those comparisons are decided here by
sign analysis and squaring over exact rationals; nothing is ever
settled by floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt


def sqrt_exact(x: Fraction) -> Fraction | None:
    """Exact rational square root of x >= 0, or None if irrational.

    In lowest terms x is a rational square iff numerator and
    denominator are both perfect squares.
    """
    if x < 0:
        raise ValueError("square root of a negative rational")
    num_root = isqrt(x.numerator)
    den_root = isqrt(x.denominator)
    if num_root * num_root == x.numerator and den_root * den_root == x.denominator:
        return Fraction(num_root, den_root)
    return None


def floor_sqrt(x: Fraction) -> int:
    """Largest integer n >= 0 with n^2 <= x (x >= 0)."""
    if x < 0:
        raise ValueError("floor_sqrt of a negative rational")
    n = isqrt(x.numerator // x.denominator)
    while (n + 1) * (n + 1) <= x:
        n += 1
    while n * n > x:  # defensive; cannot trigger for n from isqrt
        n -= 1
    return n


@dataclass(frozen=True, init=False)
class QuadraticSurd:
    """Exact value a + b*sqrt(d) with rational a, b and integer d >= 0.

    Normalisation: if d is a perfect square or b == 0 the value
    collapses to a rational (b == 0, d == 0), so a non-trivial surd is
    genuinely irrational and in particular never an integer.
    """

    a: Fraction
    b: Fraction
    d: int

    def __init__(self, a: Fraction | int, b: Fraction | int = 0, d: int = 0) -> None:
        a, b = Fraction(a), Fraction(b)
        if d < 0:
            raise ValueError("radicand must be non-negative")
        root = isqrt(d)
        if b == 0 or root * root == d:
            a = a + b * root
            b, d = Fraction(0), 0
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def __neg__(self) -> "QuadraticSurd":
        return QuadraticSurd(-self.a, -self.b, self.d)

    def compare(self, q: Fraction | int) -> int:
        """Exact sign of (self - q): -1, 0 or +1."""
        t = Fraction(q) - self.a
        if self.b == 0:
            return (t < 0) - (t > 0)
        lhs = self.b * self.b * self.d  # (b*sqrt(d))^2
        if self.b > 0:
            if t <= 0:
                return 1
            return (lhs > t * t) - (lhs < t * t)
        if t >= 0:
            return -1
        return (t * t > lhs) - (t * t < lhs)

    def __lt__(self, q: Fraction | int) -> bool:
        return self.compare(q) < 0

    def __gt__(self, q: Fraction | int) -> bool:
        return self.compare(q) > 0

    def floor(self) -> int:
        if self.b == 0:
            return self.a.numerator // self.a.denominator
        base = self.a.numerator // self.a.denominator
        shift = floor_sqrt(self.b * self.b * self.d)
        n = base + shift - 1 if self.b > 0 else base - shift - 2
        while self.compare(n + 1) >= 0:
            n += 1
        return n

    def ceil(self) -> int:
        return -((-self).floor())

    def approx(self) -> float:
        """Float approximation, for report rendering only."""
        return float(self.a) + float(self.b) * (self.d**0.5)

    def render(self) -> str:
        from .basket import format_rational

        if self.b == 0:
            return format_rational(self.a)
        return f"{format_rational(self.a)} + {format_rational(self.b)}*sqrt({self.d})"


def surd_from_sqrt(offset: Fraction, coeff: Fraction, radicand: Fraction) -> QuadraticSurd:
    """The exact value offset + coeff * sqrt(radicand), radicand rational >= 0.

    sqrt(p/q) is rewritten as sqrt(p*q)/q so the radicand stored in the
    surd is an integer.
    """
    if radicand < 0:
        raise ValueError("radicand must be non-negative")
    return QuadraticSurd(
        offset,
        coeff * Fraction(1, radicand.denominator),
        radicand.numerator * radicand.denominator,
    )
