"""Rigorous real interval arithmetic on a dyadic grid.

Every interval stores integer endpoints at a fixed binary scale, so all
operations reduce to exact integer arithmetic plus outward rounding by one
grid step.  Enclosures are therefore rigorous: the represented real set
always contains the true result.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Union

Rational = Union[int, Fraction]


def _scale_down(num: int, prec: int) -> Fraction:
    return Fraction(num, 1 << prec)


def _floor_div(a: int, b: int) -> int:
    return a // b


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi] * 2^-prec with integer lo <= hi."""

    lo: int
    hi: int
    prec: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty interval")

    @staticmethod
    def from_fraction(value: Rational, prec: int) -> "Interval":
        f = Fraction(value)
        scaled = f * (1 << prec)
        lo = _floor_div(scaled.numerator, scaled.denominator)
        hi = _ceil_div(scaled.numerator, scaled.denominator)
        return Interval(lo, hi, prec)

    @staticmethod
    def exact_zero(prec: int) -> "Interval":
        return Interval(0, 0, prec)

    @property
    def lower(self) -> Fraction:
        return _scale_down(self.lo, self.prec)

    @property
    def upper(self) -> Fraction:
        return _scale_down(self.hi, self.prec)

    @property
    def width(self) -> Fraction:
        return _scale_down(self.hi - self.lo, self.prec)

    def midpoint(self) -> Fraction:
        return _scale_down(self.lo + self.hi, self.prec + 1)

    def __add__(self, other: "Interval") -> "Interval":
        self._check(other)
        return Interval(self.lo + other.lo, self.hi + other.hi, self.prec)

    def __sub__(self, other: "Interval") -> "Interval":
        self._check(other)
        return Interval(self.lo - other.hi, self.hi - other.lo, self.prec)

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo, self.prec)

    def __mul__(self, other: "Interval") -> "Interval":
        self._check(other)
        p = self.prec
        cands = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return Interval(_floor_div(min(cands), 1 << p), _ceil_div(max(cands), 1 << p), p)

    def scale(self, value: Rational) -> "Interval":
        """Multiply by an exact rational, rounding outward."""
        f = Fraction(value)
        a = self.lo * f.numerator
        b = self.hi * f.numerator
        if f.numerator < 0:
            a, b = b, a
        return Interval(_floor_div(a, f.denominator), _ceil_div(b, f.denominator), self.prec)

    def shift(self, value: Rational) -> "Interval":
        return self + Interval.from_fraction(value, self.prec)

    def sqrt(self) -> "Interval":
        if self.lo < 0:
            raise ValueError("sqrt of interval containing negative numbers")
        p = self.prec
        lo = isqrt(self.lo << p)
        hi = isqrt(self.hi << p) + 1
        return Interval(lo, hi, p)

    def contains(self, value: Rational) -> bool:
        f = Fraction(value)
        return self.lower <= f <= self.upper

    def overlaps(self, other: "Interval") -> bool:
        return self.lower <= other.upper and other.lower <= self.upper

    def is_positive(self) -> bool:
        return self.lo > 0

    def is_negative(self) -> bool:
        return self.hi < 0

    def excludes_zero(self) -> bool:
        return self.lo > 0 or self.hi < 0

    def _check(self, other: "Interval") -> None:
        if self.prec != other.prec:
            raise ValueError("mixed interval precisions")

    def __repr__(self):
        return f"Interval({float(self.lower):.12g}, {float(self.upper):.12g}; prec={self.prec})"


def sqrt_nat_interval(n: int, prec: int) -> Interval:
    """Enclosure of sqrt(n) for a nonnegative integer n."""
    if n < 0:
        raise ValueError("negative radicand")
    lo = isqrt(n << (2 * prec))
    if lo * lo == n << (2 * prec):
        return Interval(lo, lo, prec)
    return Interval(lo, lo + 1, prec)


def sqrt_fraction_interval(value: Rational, prec: int) -> Interval:
    """Enclosure of sqrt(value) for a nonnegative rational."""
    f = Fraction(value)
    if f < 0:
        raise ValueError("negative radicand")
    shifted = f * (1 << (2 * prec))
    lo = isqrt(shifted.numerator // shifted.denominator)
    hi = isqrt(_ceil_div(shifted.numerator, shifted.denominator)) + 1
    return Interval(lo, hi, prec)
