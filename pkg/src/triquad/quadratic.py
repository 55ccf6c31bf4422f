"""Fundamental units and form class numbers of quadratic fields.

Units come from the continued-fraction expansion of sqrt(d), or of
(1 + sqrt(d))/2 when d = 1 (mod 4); one period of the expansion yields the
fundamental unit of the corresponding order, with norm (-1)^period.

Class numbers are exact form counts: reduced positive-definite forms for
negative discriminants, rho-reduction cycles of reduced indefinite forms
for positive ones.  The narrow number is the cycle count; the wide number
follows from the norm of the fundamental unit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

from . import _kernels
from .conditions import is_squarefree, squarefree_part
from .fields import MQElement, MQField


@dataclass(frozen=True)
class QuadUnit:
    """A unit x + y*sqrt(d) > 1 of the order of Q(sqrt(d))."""

    d: int
    x: Fraction
    y: Fraction
    norm: int

    def __post_init__(self):
        if self.x * self.x - self.d * self.y * self.y != self.norm:
            raise ValueError("norm equation fails")
        if self.norm not in (1, -1):
            raise ValueError("norm must be +1 or -1")
        if self.x <= 0 or self.y <= 0:
            raise ValueError("fundamental normalization requires x, y > 0")
        for c in (self.x, self.y):
            if c.denominator not in (1, 2):
                raise ValueError("coordinates must be integers or half-integers")
            if c.denominator == 2 and self.d % 4 != 1:
                raise ValueError("half-integer coordinates need d = 1 (mod 4)")

    def as_element(self, field: MQField) -> MQElement:
        elem = field.rational(self.x)
        return elem + field.sqrt_radicand(self.d) * self.y

    def __str__(self):
        return f"{self.x} + {self.y}√{self.d}"


def _unit_from_cf(d: int, p0: int, q0: int) -> tuple[Fraction, Fraction, int]:
    """Unit of the order attached to the cycle of (p0 + sqrt(d))/q0."""
    quots, start, period = _kernels.cf_expansion(d, p0, q0)
    # Track the start state's (P, Q) to evaluate the purely periodic tail.
    p, q = p0, q0
    w = isqrt(d)
    for a in quots[:start]:
        p = a * q - p
        q = (d - p * p) // q
    k_prev, k_curr = 1, 0  # k_{-2}, k_{-1}
    for a in quots[start : start + period]:
        k_prev, k_curr = k_curr, a * k_curr + k_prev
    # unit = k_{l-1} * alpha + k_{l-2} with alpha = (p + sqrt(d))/q
    x = Fraction(k_curr * p, q) + k_prev
    y = Fraction(k_curr, q)
    return x, y, -1 if period % 2 else 1


@lru_cache(maxsize=None)
def fundamental_unit(d: int) -> QuadUnit:
    """Smallest unit > 1 of the ring of integers of Q(sqrt(d)), d squarefree."""
    if d <= 1:
        raise ValueError("d must exceed 1")
    if not is_squarefree(d):
        raise ValueError(f"{d} is not squarefree")
    if d % 4 == 1:
        x, y, norm = _unit_from_cf(d, 1, 2)
    else:
        x, y, norm = _unit_from_cf(d, 0, 1)
    return QuadUnit(d=d, x=x, y=y, norm=norm)


def order_unit_norm(D: int) -> int:
    """Norm of the fundamental unit of the quadratic order of discriminant D."""
    if D <= 0 or D % 4 not in (0, 1):
        raise ValueError("D must be a positive discriminant")
    _, _, norm = _unit_from_cf(D, D % 2, 2)
    return norm


def fundamental_discriminant(d: int) -> int:
    """Fundamental discriminant of Q(sqrt(d)) for squarefree d."""
    if d in (0, 1) or not is_squarefree(abs(d)):
        raise ValueError("d must be squarefree and not 0 or 1")
    return d if d % 4 == 1 else 4 * d


@dataclass(frozen=True)
class FormClassGroup:
    """Class data of the quadratic order of the given discriminant."""

    discriminant: int
    representatives: tuple[tuple[int, int, int], ...]
    h_narrow: int
    h: int
    h2: int

    def __post_init__(self):
        for (a, b, c) in self.representatives:
            if b * b - 4 * a * c != self.discriminant:
                raise ValueError("representative has wrong discriminant")
        if self.h < 1:
            raise ValueError("class number must be positive")


def _rho(form: tuple[int, int, int], D: int, w: int) -> tuple[int, int, int]:
    """One step of the reduction walk on reduced indefinite forms."""
    _, b, c = form
    m = 2 * abs(c)
    r = (-b) % m
    r += ((w - r) // m) * m  # largest residue <= floor(sqrt(D))
    return (c, r, (r * r - D) // (4 * c))


def _positive_class_group(D: int) -> tuple[list[tuple[int, int, int]], int]:
    forms = _kernels.reduced_forms(D)
    w = isqrt(D)
    form_set = set(forms)
    seen: set[tuple[int, int, int]] = set()
    reps = []
    for f in sorted(form_set):
        if f in seen:
            continue
        cycle = []
        g = f
        while g not in seen:
            seen.add(g)
            cycle.append(g)
            g = _rho(g, D, w)
            if g not in form_set:
                raise AssertionError(f"reduction left the reduced set at {g}")
        reps.append(min(cycle))
    return sorted(reps), len(reps)


def _negative_class_group(D: int) -> list[tuple[int, int, int]]:
    reps = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a:
                continue
            if b < 0 and (a == c or abs(b) == a):
                continue
            if gcd(a, gcd(b, c)) == 1:
                reps.append((a, b, c))
        a += 1
    return sorted(reps)


def _two_part(n: int) -> int:
    return n & -n


@lru_cache(maxsize=None)
def class_group(D: int) -> FormClassGroup:
    """Exact form class group of discriminant D (narrow, wide and 2-part)."""
    if D % 4 not in (0, 1):
        raise ValueError(f"{D} is not a discriminant")
    if D >= 0 and isqrt(D) ** 2 == D:
        raise ValueError("D must not be a perfect square")
    if D < 0:
        reps = _negative_class_group(D)
        h = len(reps)
        return FormClassGroup(D, tuple(reps), h_narrow=h, h=h, h2=_two_part(h))
    reps, h_narrow = _positive_class_group(D)
    if order_unit_norm(D) == -1:
        h = h_narrow
    else:
        if h_narrow % 2:
            raise AssertionError("narrow class number must be even when N(eps) = 1")
        h = h_narrow // 2
    return FormClassGroup(D, tuple(reps), h_narrow=h_narrow, h=h, h2=_two_part(h))


def h2_of(d: int) -> int:
    """2-class number of Q(sqrt(d)) for squarefree d, by radicand."""
    if d in (0, 1):
        raise ValueError("d must not be 0 or 1")
    if not is_squarefree(abs(d)):
        raise ValueError(f"{d} is not squarefree")
    return class_group(fundamental_discriminant(d)).h2


def quadratic_subfield_radicands(radicands: tuple[int, ...]) -> tuple[int, ...]:
    """Radicands of all quadratic subfields of the multiquadratic field."""
    seen = []
    for mask in range(1, 1 << len(radicands)):
        prod = 1
        for i, d in enumerate(radicands):
            if (mask >> i) & 1:
                prod *= d
        r = squarefree_part(prod)
        if r not in seen:
            seen.append(r)
    return tuple(sorted(seen))
