"""Exact arithmetic in multiquadratic fields Q(sqrt(d1), ..., sqrt(dt)), t <= 3.

Elements are exact rational coordinate vectors on the radical basis
(1, sqrt(d1), sqrt(d2), sqrt(d1 d2)*, sqrt(d3), ...) where * denotes the
squarefree part.  The basis is indexed by subset bitmasks of the radicand
list, in increasing mask order, so coordinates are deterministic.

Real embeddings are tracked as rigorous intervals; square roots inside the
field are found by sign-consistent numerical square roots under all
embeddings followed by rational reconstruction, and every returned root is
verified exactly by squaring.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import isqrt

from .conditions import squarefree_part
from .intervals import Interval, sqrt_nat_interval

_ZERO = Fraction(0)
_MAX_SQRT_PRECISION = 1 << 22


class SignPattern:
    """A choice of sign for each radicand; the Galois action on the field."""

    __slots__ = ("signs",)

    def __init__(self, signs):
        signs = tuple(signs)
        if any(s not in (1, -1) for s in signs):
            raise ValueError("signs must be +1 or -1")
        self.signs = signs

    @staticmethod
    def identity(n: int) -> "SignPattern":
        return SignPattern((1,) * n)

    @staticmethod
    def flipping(n: int, *indices: int) -> "SignPattern":
        signs = [1] * n
        for i in indices:
            signs[i] = -1
        return SignPattern(signs)

    @staticmethod
    def from_mask(n: int, mask: int) -> "SignPattern":
        return SignPattern(tuple(-1 if (mask >> i) & 1 else 1 for i in range(n)))

    @property
    def mask(self) -> int:
        return sum(1 << i for i, s in enumerate(self.signs) if s == -1)

    def is_identity(self) -> bool:
        return all(s == 1 for s in self.signs)

    def __mul__(self, other: "SignPattern") -> "SignPattern":
        if len(self.signs) != len(other.signs):
            raise ValueError("sign patterns act on different radicand lists")
        return SignPattern(tuple(a * b for a, b in zip(self.signs, other.signs)))

    def __eq__(self, other):
        return isinstance(other, SignPattern) and self.signs == other.signs

    def __hash__(self):
        return hash(self.signs)

    def __repr__(self):
        return "SignPattern(%s)" % ", ".join("%+d" % s for s in self.signs)


class MQField:
    """A multiquadratic field, its radical basis and multiplication table."""

    __slots__ = (
        "radicands",
        "degree",
        "basis_radicals",
        "_index_of",
        "_mul_idx",
        "_mul_g",
        "_rad_intervals",
    )

    def __init__(self, radicands):
        radicands = tuple(int(d) for d in radicands)
        if not 1 <= len(radicands) <= 3:
            raise ValueError("between one and three radicands required")
        for d in radicands:
            if d <= 1:
                raise ValueError(f"radicand {d} must exceed 1")
            if squarefree_part(d) != d:
                raise ValueError(f"radicand {d} is not squarefree")
        t = len(radicands)
        degree = 1 << t
        basis = []
        for mask in range(degree):
            prod = 1
            for i in range(t):
                if (mask >> i) & 1:
                    prod *= radicands[i]
            basis.append(squarefree_part(prod))
        if len(set(basis)) != degree:
            raise ValueError("radicands are multiplicatively dependent")
        self.radicands = radicands
        self.degree = degree
        self.basis_radicals = tuple(basis)
        self._index_of = {r: j for j, r in enumerate(basis)}
        # sqrt(u) * sqrt(v) = g * sqrt(w) with w the squarefree part of u*v
        mul_idx = []
        mul_g = []
        for j in range(degree):
            row_i = []
            row_g = []
            for k in range(degree):
                w = basis[j ^ k]
                g = isqrt(basis[j] * basis[k] // w)
                row_i.append(j ^ k)
                row_g.append(g)
            mul_idx.append(tuple(row_i))
            mul_g.append(tuple(row_g))
        self._mul_idx = tuple(mul_idx)
        self._mul_g = tuple(mul_g)
        self._rad_intervals = {}

    # -- element constructors ------------------------------------------------

    def element(self, coords) -> "MQElement":
        coords = tuple(Fraction(c) for c in coords)
        if len(coords) != self.degree:
            raise ValueError("coordinate vector has wrong length")
        return MQElement(self, coords)

    def zero(self) -> "MQElement":
        return self.element([0] * self.degree)

    def one(self) -> "MQElement":
        return self.rational(1)

    def rational(self, value) -> "MQElement":
        coords = [Fraction(value)] + [_ZERO] * (self.degree - 1)
        return self.element(coords)

    def sqrt_radicand(self, n: int) -> "MQElement":
        """The element g*sqrt(r) representing sqrt(n), n = g^2 * r."""
        if n <= 0:
            raise ValueError("radicand must be positive")
        r = squarefree_part(n)
        g = isqrt(n // r)
        if r != 1 and r not in self._index_of:
            raise ValueError(f"sqrt({n}) does not lie in {self!r}")
        coords = [_ZERO] * self.degree
        coords[self._index_of.get(r, 0)] = Fraction(g)
        return self.element(coords)

    def contains_radical(self, n: int) -> bool:
        return squarefree_part(n) in self._index_of or squarefree_part(n) == 1

    def lift(self, elem: "MQElement") -> "MQElement":
        """Transport an element of a subfield into this field."""
        if elem.field is self:
            return elem
        coords = [_ZERO] * self.degree
        for j, c in enumerate(elem.coords):
            if c:
                r = elem.field.basis_radicals[j]
                if r not in self._index_of:
                    raise ValueError("element does not lie in this field")
                coords[self._index_of[r]] = c
        return self.element(coords)

    # -- Galois --------------------------------------------------------------

    def sign_patterns(self):
        """All real embeddings as sign patterns, identity first."""
        t = len(self.radicands)
        return [SignPattern.from_mask(t, m) for m in range(self.degree)]

    # -- numerics ------------------------------------------------------------

    def radical_intervals(self, prec: int):
        cached = self._rad_intervals.get(prec)
        if cached is None:
            cached = tuple(sqrt_nat_interval(r, prec) for r in self.basis_radicals)
            if len(self._rad_intervals) > 16:
                self._rad_intervals.clear()
            self._rad_intervals[prec] = cached
        return cached

    def __eq__(self, other):
        return isinstance(other, MQField) and self.radicands == other.radicands

    def __hash__(self):
        return hash(self.radicands)

    def __repr__(self):
        inside = ", ".join(f"√{d}" for d in self.radicands)
        return f"Q({inside})"


@lru_cache(maxsize=None)
def mqfield(*radicands: int) -> MQField:
    """Shared field instances, so elements of equal fields interoperate."""
    return MQField(radicands)


class MQElement:
    """An element of an MQField: exact rational coordinates on the radicals."""

    __slots__ = ("field", "coords")

    def __init__(self, field: MQField, coords):
        self.field = field
        self.coords = coords

    # -- ring structure ------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, MQElement):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.rational(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return MQElement(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return MQElement(self.field, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return MQElement(self.field, tuple(-a for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            return MQElement(self.field, tuple(c * f for c in self.coords))
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        field = self.field
        out = [_ZERO] * field.degree
        mul_idx = field._mul_idx
        mul_g = field._mul_g
        for j, cj in enumerate(self.coords):
            if not cj:
                continue
            row_i = mul_idx[j]
            row_g = mul_g[j]
            for k, ck in enumerate(other.coords):
                if ck:
                    out[row_i[k]] += cj * ck * row_g[k]
        return MQElement(field, tuple(out))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            return self * Fraction(f.denominator, f.numerator)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "MQElement":
        """Multiplicative inverse via the product of all nontrivial conjugates."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        field = self.field
        prod = field.one()
        for s in field.sign_patterns()[1:]:
            prod = prod * apply_automorphism(self, s)
        value = (self * prod).as_rational()
        return prod * Fraction(value.denominator, value.numerator)

    def __eq__(self, other):
        if isinstance(other, MQElement):
            return self.field == other.field and self.coords == other.coords
        if isinstance(other, (int, Fraction)):
            return self == self.field.rational(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.radicands, self.coords))

    # -- queries ---------------------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coords[0]

    def norm_over_q(self) -> Fraction:
        """Product of all real conjugates; always rational."""
        prod = self.field.one()
        for s in self.field.sign_patterns():
            prod = prod * apply_automorphism(self, s)
        return prod.as_rational()

    def denominator_lcm(self) -> int:
        lcm = 1
        for c in self.coords:
            d = c.denominator
            lcm = lcm * d // _gcd(lcm, d)
        return lcm

    # -- numerics ---------------------------------------------------------------

    def embed(self, pattern: SignPattern | None = None, prec: int = 64) -> Interval:
        """Rigorous enclosure of the real number at the given embedding."""
        if prec < 64:
            raise ValueError("precision below 64 bits")
        field = self.field
        if pattern is None:
            pattern = SignPattern.identity(len(field.radicands))
        if len(pattern.signs) != len(field.radicands):
            raise ValueError("pattern does not match the field's radicands")
        return self._embed_mask(pattern.mask, prec)

    def _embed_mask(self, mask: int, prec: int) -> Interval:
        rads = self.field.radical_intervals(prec)
        acc = Interval.exact_zero(prec)
        for j, c in enumerate(self.coords):
            if not c:
                continue
            if (mask & j).bit_count() & 1:
                c = -c
            acc = acc + rads[j].scale(c)
        return acc

    def embed_all(self, prec: int):
        return [self._embed_mask(mask, prec) for mask in range(self.field.degree)]

    def signs_at_embeddings(self, prec: int = 128):
        """Exact signs of all real conjugates (escalates precision as needed)."""
        while True:
            ivs = self.embed_all(prec)
            signs = []
            ok = True
            for j, iv in enumerate(ivs):
                if iv.is_positive():
                    signs.append(1)
                elif iv.is_negative():
                    signs.append(-1)
                elif self._conjugate_mask(j).is_zero():
                    signs.append(0)
                else:
                    ok = False
                    break
            if ok:
                return signs
            prec *= 2

    def _conjugate_mask(self, mask: int) -> "MQElement":
        coords = tuple(-c if (mask & j).bit_count() & 1 else c for j, c in enumerate(self.coords))
        return MQElement(self.field, coords)

    def is_totally_positive(self) -> bool:
        return all(s > 0 for s in self.signs_at_embeddings())

    def __repr__(self):
        terms = []
        for j, c in enumerate(self.coords):
            if not c:
                continue
            r = self.field.basis_radicals[j]
            if r == 1:
                terms.append(str(c))
            elif c == 1:
                terms.append(f"√{r}")
            elif c == -1:
                terms.append(f"-√{r}")
            else:
                terms.append(f"{c}√{r}")
        if not terms:
            return "0"
        text = terms[0]
        for t in terms[1:]:
            text += " - " + t[1:] if t.startswith("-") else " + " + t
        return text


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def mq_mul(a: MQElement, b: MQElement) -> MQElement:
    """Exact product of two elements of the same field."""
    return a * b


def apply_automorphism(a: MQElement, s: SignPattern) -> MQElement:
    """Image of a under the automorphism sending sqrt(d_i) to s_i * sqrt(d_i)."""
    if len(s.signs) != len(a.field.radicands):
        raise ValueError("pattern does not match the field's radicands")
    return a._conjugate_mask(s.mask)


def embed(a: MQElement, s: SignPattern, prec: int = 64) -> Interval:
    """Rigorous real enclosure of a at the embedding given by s."""
    return a.embed(s, prec)


def sqrt_in_field(a: MQElement) -> MQElement | None:
    """Exact square root of a inside its own field, or None.

    Candidate roots are reconstructed from sign-consistent square roots of
    all real embeddings; a candidate is only returned after verifying
    root * root == a exactly.  "None" is likewise rigorous: coordinates of a
    root of an element with denominator lcm m are bounded rationals (their
    denominators divide degree * radical * m), and the search covers every
    sign assignment at a precision certifying unique reconstruction.
    """
    if a.is_zero():
        raise ValueError("square root of the zero element")
    field = a.field
    deg = field.degree
    m = a.denominator_lcm()
    bounds = [deg * r * m for r in field.basis_radicals]
    prec = 128
    while True:
        if prec > _MAX_SQRT_PRECISION:
            raise ArithmeticError("precision limit exhausted in sqrt_in_field")
        embeds = a.embed_all(prec)
        if any(iv.is_negative() for iv in embeds):
            return None
        if not all(iv.is_positive() for iv in embeds):
            prec *= 2
            continue
        roots = [iv.sqrt() for iv in embeds]
        rads = field.radical_intervals(prec)
        # Interval widths are independent of the sign assignment, so certify
        # unique reconstruction once per precision level.
        total_width = sum(r.hi - r.lo for r in roots)
        sharp = True
        for j in range(deg):
            r_j = field.basis_radicals[j]
            width_bound = (
                Fraction(total_width, 1 << prec)
                * rads[j].upper
                / (deg * r_j)
            )
            if width_bound * bounds[j] * bounds[j] >= 1:
                sharp = False
                break
        if not sharp:
            prec *= 2
            continue
        for assign in range(1 << (deg - 1)):
            coords = []
            for j in range(deg):
                acc = Interval.exact_zero(prec)
                for s in range(deg):
                    sign = -1 if s and (assign >> (s - 1)) & 1 else 1
                    if (s & j).bit_count() & 1:
                        sign = -sign
                    acc = acc + roots[s] if sign > 0 else acc - roots[s]
                r_j = field.basis_radicals[j]
                iv = (acc * rads[j]).scale(Fraction(1, deg * r_j))
                cand = iv.midpoint().limit_denominator(bounds[j])
                if not iv.contains(cand):
                    break
                coords.append(cand)
            else:
                x = field.element(coords)
                if x * x == a:
                    return _normalize_root_sign(x)
        return None


def _normalize_root_sign(x: MQElement) -> MQElement:
    for c in x.coords:
        if c:
            return -x if c < 0 else x
    return x
