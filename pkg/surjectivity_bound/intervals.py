"""
Certified rational interval arithmetic over real roots of integer polynomials.

Root isolation and refinement are delegated to sympy; evaluation of
polynomial expressions in a root is done with exact ``Fraction`` endpoints.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence

from sympy import Poly, Rational, symbols

logger = logging.getLogger(__name__)

X = symbols("x")

# Refinement stops once an enclosure is narrower than this.
MIN_WIDTH = Fraction(1, 10 ** 60)


def _fraction(value) -> Fraction:
    value = Rational(value)
    return Fraction(int(value.p), int(value.q))


@dataclass(frozen=True)
class RationalInterval:
    """
    Closed interval ``[lo, hi]`` with rational endpoints.
    """

    lo: Fraction
    hi: Fraction

    @classmethod
    def point(cls, value) -> "RationalInterval":
        value = Fraction(value)
        return cls(value, value)

    def __add__(self, other: "RationalInterval") -> "RationalInterval":
        return RationalInterval(self.lo + other.lo, self.hi + other.hi)

    def __mul__(self, other: "RationalInterval") -> "RationalInterval":
        products = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return RationalInterval(min(products), max(products))

    def scale(self, factor: Fraction) -> "RationalInterval":
        return self * RationalInterval.point(factor)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, value) -> bool:
        return self.lo <= Fraction(value) <= self.hi

    def overlaps(self, other: "RationalInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def sign(self) -> int:
        """+1 or -1 when the interval excludes zero, 0 when undecided."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        return 0


def defining_poly(coefficients: Sequence[int]) -> Poly:
    """Poly in ``x`` from integer coefficients, leading coefficient first."""
    return Poly([int(c) for c in coefficients], X)


def count_real_roots(coefficients: Sequence[int]) -> int:
    """Number of distinct real roots (Sturm sequence count)."""
    return int(defining_poly(coefficients).count_roots())


def root_intervals(coefficients: Sequence[int], eps: Fraction = Fraction(1, 2 ** 20)) -> List[RationalInterval]:
    """
    Isolating intervals for the real roots, in increasing order.

    Args:
        coefficients: Integer coefficients, leading first
        eps: Maximum width of each returned interval

    Returns:
        List of RationalInterval, one per real root
    """
    poly = defining_poly(coefficients)
    isolated = poly.intervals(eps=Rational(eps.numerator, eps.denominator))
    return [RationalInterval(_fraction(s), _fraction(t)) for (s, t), _ in isolated]


def refine_root(coefficients: Sequence[int], interval: RationalInterval, eps: Fraction) -> RationalInterval:
    """Refine an isolating interval to width below ``eps``."""
    if interval.lo == interval.hi:
        return interval
    poly = defining_poly(coefficients)
    s, t = poly.refine_root(
        Rational(interval.lo.numerator, interval.lo.denominator),
        Rational(interval.hi.numerator, interval.hi.denominator),
        eps=Rational(eps.numerator, eps.denominator),
    )
    return RationalInterval(_fraction(s), _fraction(t))


def evaluate(power_coefficients: Sequence[Fraction], root: RationalInterval) -> RationalInterval:
    """
    Enclosure of ``sum c_k * theta**k`` for theta in ``root`` (Horner scheme).

    Args:
        power_coefficients: Coefficients in increasing powers of theta
        root: Enclosure of theta

    Returns:
        RationalInterval containing the value
    """
    result = RationalInterval.point(0)
    for coefficient in reversed(list(power_coefficients)):
        result = result * root + RationalInterval.point(coefficient)
    return result


def certified_signs(coefficients: Sequence[int], power_coefficients: Sequence[Fraction]) -> List[int]:
    """
    Sign of a nonzero field element under every real embedding.

    The element is ``sum c_k * theta**k`` where theta runs over the real roots
    of the defining polynomial. Intervals are refined until each enclosure
    excludes zero.

    Returns:
        List of signs (+1 / -1), one per real root
    """
    if not any(power_coefficients):
        raise ValueError("cannot certify the sign of zero")
    signs = []
    eps = Fraction(1, 2 ** 20)
    for root in root_intervals(coefficients, eps):
        current = root
        value = evaluate(power_coefficients, current)
        width = eps
        while value.sign() == 0:
            width = width / 2 ** 16
            if width < MIN_WIDTH:
                raise ValueError("interval refinement did not separate the value from zero")
            current = refine_root(coefficients, current, width)
            value = evaluate(power_coefficients, current)
        signs.append(value.sign())
    logger.debug(f"Certified signs {signs} for element {list(power_coefficients)}")
    return signs
