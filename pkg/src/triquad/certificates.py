"""Diophantine decomposition certificates for norm-one quadratic units.

For a unit x + y*sqrt(d) of norm +1 with d supported on {2, p, q}, the
factorization (2x+2)(2x-2) = d*(2y)^2 splits uniquely as

    2x + 2 = u * s^2,    2x - 2 = v * t^2,

with u, v squarefree and supported on {2, p, q}.  The element
(s*sqrt(u) + t*sqrt(v)) / 2 then squares exactly to the unit, which yields
the classical identities sqrt(eps) or sqrt(2*eps) = a small combination of
radicals together with a Pell-type relation between the cofactors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .conditions import check_conditions, factor_over, is_square, squarefree_part
from .fields import MQElement, mqfield
from .quadratic import QuadUnit, fundamental_unit


@dataclass(frozen=True)
class SquareObstruction:
    """A quantity asserted to be a rational non-square, with its witness."""

    label: str
    value: Fraction
    obstruction: int  # squarefree part; 1 would mean the value is a square

    @property
    def is_nonsquare(self) -> bool:
        return self.obstruction != 1


@dataclass(frozen=True)
class A5Verdict:
    unit: QuadUnit
    checks: tuple[SquareObstruction, ...]

    @property
    def holds(self) -> bool:
        return all(c.is_nonsquare for c in self.checks)


def check_lemma_a5(unit: QuadUnit) -> A5Verdict:
    """Verify that 2(x+1), 2(x-1), 2d(x+1), 2d(x-1) are non-squares in Q."""
    if unit.norm != 1:
        raise ValueError("inapplicable: the unit must have norm +1")
    d, x = unit.d, unit.x
    quantities = [
        ("2(x+1)", 2 * (x + 1)),
        ("2(x-1)", 2 * (x - 1)),
        ("2d(x+1)", 2 * d * (x + 1)),
        ("2d(x-1)", 2 * d * (x - 1)),
    ]
    checks = []
    for label, value in quantities:
        sq = squarefree_part(value.numerator) * squarefree_part(value.denominator)
        checks.append(SquareObstruction(label, value, sq))
    return A5Verdict(unit=unit, checks=checks)


@dataclass(frozen=True)
class DecompositionCertificate:
    """Exact square-root certificate for a norm-one unit.

    cofactors, roots refer to 2x+2 = u*s^2 and 2x-2 = v*t^2.  The displayed
    sqrt_form and pell_relation follow the classical normalizations: either
    sqrt(eps) or sqrt(2*eps) is a two-term radical combination.
    """

    d: int
    unit: QuadUnit
    pattern: str
    cofactors: tuple[int, int]
    roots: tuple[int, int]
    doubled: bool  # True when the displayed form squares to 2*eps
    form_terms: tuple[tuple[Fraction, int], ...]  # (coefficient, radicand)
    pell_relation: tuple[int, tuple[Fraction, int], tuple[Fraction, int]]
    sqrt_form: str
    pell_text: str

    def root_element(self) -> MQElement:
        """The certified root as an exact field element (squares to eps)."""
        u, v = self.cofactors
        s, t = self.roots
        # Q(sqrt u, sqrt v) contains sqrt(d) since u*v = d modulo squares.
        rads = sorted({squarefree_part(u), squarefree_part(v)} - {1})
        field = mqfield(*rads)
        half = Fraction(1, 2)
        return (field.sqrt_radicand(u) * s + field.sqrt_radicand(v) * t) * half

    def verify(self) -> bool:
        """Re-square the root and compare with the unit, exactly."""
        root = self.root_element()
        eps = self.unit.as_element(root.field)
        return root * root == eps


def _display_form(d: int, u: int, v: int, s: int, t: int):
    """Normalize (s*sqrt(u) + t*sqrt(v))/2 to the classical presentation."""
    if u % 2 and v % 2:
        # both odd: sqrt(eps) = (s/2) sqrt(u) + (t/2) sqrt(v)
        doubled = False
        terms = ((Fraction(s, 2), u), (Fraction(t, 2), v))
    elif u % 2 == 0 and v % 2 == 0:
        # both even: sqrt(2 eps) = s sqrt(u/2) + t sqrt(v/2)
        doubled = True
        terms = ((Fraction(s), u // 2), (Fraction(t), v // 2))
    elif u % 2 == 0:
        # sqrt(2 eps) = s sqrt(u/2) + (t/2) sqrt(2v)
        doubled = True
        terms = ((Fraction(s), u // 2), (Fraction(t, 2), 2 * v))
    else:
        doubled = True
        terms = ((Fraction(s, 2), 2 * u), (Fraction(t), v // 2))
    return doubled, terms


def _radical_text(coef: Fraction, radicand: int) -> str:
    if radicand == 1:
        return str(coef)
    if coef == 1:
        return f"√{radicand}"
    return f"{coef}√{radicand}"


def classify_decomposition(unit: QuadUnit, primes: tuple[int, int]) -> DecompositionCertificate:
    """Identify the unique factorization branch of x^2 - 1 over {2, p, q}.

    Raises ArithmeticError when no branch matches: that signals either a
    precondition violation or a counterexample to the classification, and
    is never silently swallowed.
    """
    p, q = primes
    if unit.norm != 1:
        raise ValueError("decomposition systems require norm +1")
    d = unit.d
    if squarefree_part(d) != d or any(
        f not in (2, p, q) for f in _prime_support(d)
    ):
        raise ValueError(f"unit radicand {d} is not supported on {{2, {p}, {q}}}")
    X = 2 * unit.x
    if X.denominator != 1:
        raise AssertionError("2x must be an integer for a quadratic unit")
    X = X.numerator
    support = (2, p, q)
    sides = []
    for value, label in ((X + 2, "x+1"), (X - 2, "x-1")):
        exps, cofactor = factor_over(value, support)
        if not is_square(cofactor):
            raise ArithmeticError(
                f"no factorization system matches {unit}: {label} has "
                f"non-square cofactor {cofactor} outside {{2, {p}, {q}}}"
            )
        sq = 1
        root_extra = 1
        for prime, e in exps.items():
            if e % 2:
                sq *= prime
            root_extra *= prime ** (e // 2)
        from math import isqrt

        sides.append((sq, root_extra * isqrt(cofactor), label))
    (u, s, _), (v, t, _) = sides
    assert u * s * s == X + 2 and v * t * t == X - 2
    doubled, terms = _display_form(d, u, v, s, t)
    eps_name = f"2ε_{d}" if doubled else f"ε_{d}"
    sqrt_form = f"√({eps_name}) = " + " + ".join(_radical_text(c, r) for c, r in terms)
    # Pell relation: (lead) = u1*c1^2 - v1*c2^2 from the displayed terms
    lead = 2 if doubled else 1
    (c1, r1), (c2, r2) = terms
    pell = (lead, (c1, r1), (c2, r2))
    pell_text = f"{lead} = {r1 if r1 != 1 else ''}{'*' if r1 != 1 else ''}({c1})^2 - {r2 if r2 != 1 else ''}{'*' if r2 != 1 else ''}({c2})^2"
    assert r1 * c1 * c1 - r2 * c2 * c2 == lead
    if unit.x.denominator == 1:
        x_plus = squarefree_part((unit.x + 1).numerator)
        x_minus = squarefree_part((unit.x - 1).numerator)
        pattern = f"x+1 = {_strip(x_plus, support)}*sq, x-1 = {_strip(x_minus, support)}*sq"
    else:
        pattern = f"2x+2 = {u}*sq, 2x-2 = {v}*sq (half-integer unit)"
    cert = DecompositionCertificate(
        d=d,
        unit=unit,
        pattern=pattern,
        cofactors=(u, v),
        roots=(s, t),
        doubled=doubled,
        form_terms=terms,
        pell_relation=pell,
        sqrt_form=sqrt_form,
        pell_text=pell_text,
    )
    if not cert.verify():
        raise ArithmeticError(f"certificate for {unit} failed exact re-squaring")
    return cert


def _prime_support(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def _strip(sq: int, support: tuple[int, ...]) -> int:
    keep = 1
    for prime in support:
        if sq % prime == 0:
            keep *= prime
    return keep


# Expected cofactor pairs (u on 2x+2, v on 2x-2) asserted by the two
# classification lemmas, indexed by the radicand expressed over (p, q).
def _expected_branches(p: int, q: int) -> dict[int, tuple[int, int]]:
    branches = {
        2 * p * q: (2 * p, q),
        p * q: (p, q),
        2 * q: (2, q),
        q: (2, 2 * q),
    }
    if p % 8 == 3:
        branches[p] = (2 * p, 2)
        branches[2 * p] = (p, 2)
    return branches


@dataclass(frozen=True)
class LemmaFamilyReport:
    p: int
    q: int
    p_mod8: int
    certificates: tuple[DecompositionCertificate, ...]
    a5_verdicts: tuple[A5Verdict, ...]

    @property
    def all_verified(self) -> bool:
        return all(c.verify() for c in self.certificates) and all(
            v.holds for v in self.a5_verdicts
        )


def verify_lemma_families(p: int, q: int) -> LemmaFamilyReport:
    """Check every unit decomposition asserted for a condition-1 pair.

    Covers eps_{2pq}, eps_{pq}, eps_{2q}, eps_q, and additionally eps_p,
    eps_{2p} when p = 3 (mod 8).  Each certificate must land on exactly the
    branch the classification asserts, and re-square exactly.
    """
    cc = check_conditions(p, q)
    if not cc.cond1:
        raise ValueError(f"({p}, {q}) does not satisfy condition 1")
    expected = _expected_branches(p, q)
    certs = []
    verdicts = []
    for d, branch in sorted(expected.items()):
        unit = fundamental_unit(d)
        if unit.norm != 1:
            raise ArithmeticError(f"eps_{d} has norm -1; classification inapplicable")
        verdicts.append(check_lemma_a5(unit))
        cert = classify_decomposition(unit, (p, q))
        if cert.cofactors != branch:
            raise ArithmeticError(
                f"eps_{d} landed on branch {cert.cofactors}, lemma asserts {branch}"
            )
        certs.append(cert)
    # Legendre eliminations used to rule out the other branches must agree
    # with the observed ones.
    assert cc.legendre_2_p == -1
    assert cc.legendre_p_q == 1
    return LemmaFamilyReport(
        p=p,
        q=q,
        p_mod8=p % 8,
        certificates=tuple(certs),
        a5_verdicts=tuple(verdicts),
    )
