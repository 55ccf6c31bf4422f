"""Prime decomposition in abelian fields via the conductor-subgroup pairing.

An abelian field is encoded as (M, H) with H a subgroup of (Z/M)*; its
Galois group is (Z/M)*/H.  For a rational prime l with M = M0 * l^v,
l coprime to M0:

  e = index of the image of {x = 1 (mod M0)} in (Z/M)*/H,
  f = order of the Frobenius l*H0 in (Z/M0)*/H0, H0 the image of H,
  g = degree / (e*f).

The fields of interest are Q(sqrt d), the 2-power cyclotomic tower
K_n = Q(zeta_{2^(n+2)}) with its real subfields, and the composita
F_n = Q(sqrt p, sqrt q, zeta_{2^(n+2)}) and F_n^+.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from . import _kernels
from .conditions import is_prime, kronecker
from .quadratic import fundamental_discriminant

_MAX_PHI = 1 << 21


def _phi_factor(m: int) -> int:
    phi = 1
    n = m
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            phi *= d - 1
            while n % d == 0:
                n //= d
                phi *= d
        d += 1 if d == 2 else 2
    if n > 1:
        phi *= n - 1
    return phi


@dataclass(frozen=True)
class AbelianField:
    """An abelian number field as a conductor-subgroup pair."""

    conductor: int
    subgroup: frozenset[int]
    generators: tuple[int, ...]
    label: str = ""

    def __post_init__(self):
        M = self.conductor
        H = self.subgroup
        if 1 not in H:
            raise ValueError("subgroup must contain the identity")
        if any(gcd(h, M) != 1 for h in H):
            raise ValueError("subgroup elements must be units mod M")
        if _phi_factor(M) % len(H):
            raise ValueError("|H| must divide phi(M)")
        if len(H) <= 4096:
            for a in H:
                for b in self.generators:
                    if a * b % M not in H:
                        raise ValueError("subgroup is not closed under multiplication")

    @property
    def degree(self) -> int:
        return _phi_factor(self.conductor) // len(self.subgroup)

    @property
    def is_real(self) -> bool:
        return (self.conductor - 1) % self.conductor in self.subgroup

    def __repr__(self):
        name = self.label or f"(M={self.conductor}, [G:H]={self.degree})"
        return f"AbelianField({name})"


@dataclass(frozen=True)
class SplittingData:
    """Decomposition type e, f, g of a rational prime."""

    prime: int
    e: int
    f: int
    g: int

    @property
    def efg(self) -> int:
        return self.e * self.f * self.g


def _greedy_generators(M: int, elements: list[int]) -> tuple[int, ...]:
    total = len(elements)
    gens: list[int] = []
    generated = {1}
    for h in elements:
        if h in generated:
            continue
        gens.append(h)
        powers = [1]
        cur = h
        while cur != 1:
            powers.append(cur)
            cur = cur * h % M
        generated = {x * pw % M for x in generated for pw in powers}
        if len(generated) == total:
            break
    return tuple(gens)


def field_for(
    radicands: tuple[int, ...] = (),
    level: int | None = None,
    variant: str = "full",
    label: str = "",
) -> AbelianField:
    """Abelian field generated by the given square roots and a tower layer.

    level n adds the 2-power cyclotomic layer of conductor 2^(n+2): the full
    field Q(zeta) for variant "full", its maximal real subfield for "plus".
    H is the joint kernel of the corresponding quadratic and cyclotomic
    conditions, computed by direct residue filtering.
    """
    if variant not in ("full", "plus"):
        raise ValueError("variant must be 'full' or 'plus'")
    mods: list[int] = []
    tables: list[bytes] = []
    M = 1
    for d in radicands:
        D = fundamental_discriminant(d)
        m = abs(D)
        tables.append(bytes(1 if kronecker(D, r) == 1 else 0 for r in range(m)))
        mods.append(m)
        M = M * m // gcd(M, m)
    if level is not None:
        if level < 0:
            raise ValueError("level must be nonnegative")
        m = 1 << (level + 2)
        allowed = {1} if variant == "full" else {1, m - 1}
        tables.append(bytes(1 if r in allowed else 0 for r in range(m)))
        mods.append(m)
        M = M * m // gcd(M, m)
    if not mods:
        raise ValueError("at least one radicand or a level is required")
    if _phi_factor(M) > _MAX_PHI:
        raise ValueError(f"conductor {M} exceeds the supported desk scale")
    elements = _kernels.unit_filter(M, mods, tables)
    return AbelianField(
        conductor=M,
        subgroup=frozenset(elements),
        generators=_greedy_generators(M, elements),
        label=label,
    )


@lru_cache(maxsize=None)
def quadratic_field(d: int) -> AbelianField:
    return field_for((d,), label=f"Q(√{d})")


@lru_cache(maxsize=None)
def cyclotomic_2power(n: int) -> AbelianField:
    """K_n = Q(zeta_{2^(n+2)}), the n-th full layer above Q(i)."""
    return field_for((), level=n, variant="full", label=f"Q(zeta_{1 << (n + 2)})")


@lru_cache(maxsize=None)
def real_cyclotomic_2power(n: int) -> AbelianField:
    """K_n^+, the n-th layer of the cyclotomic Z2-extension of Q."""
    return field_for((), level=n, variant="plus", label=f"Q(zeta_{1 << (n + 2)})^+")


@lru_cache(maxsize=None)
def compositum_layer(p: int, q: int, n: int, variant: str = "full") -> AbelianField:
    """F_n = Q(sqrt p, sqrt q, zeta_{2^(n+2)}) or its real subfield F_n^+."""
    suffix = "" if variant == "full" else "^+"
    return field_for(
        (p, q), level=n, variant=variant, label=f"F_{n}({p},{q}){suffix}"
    )


def split_prime(field: AbelianField, ell: int) -> SplittingData:
    """Decomposition (e, f, g) of a rational prime in the field."""
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    M = field.conductor
    H = field.subgroup
    degree = field.degree
    M0 = M
    v = 0
    while M0 % ell == 0:
        M0 //= ell
        v += 1
    if M0 == 1:
        return SplittingData(prime=ell, e=degree, f=1, g=1)
    if v == 0:
        e = 1
    else:
        # inertia image: U = units congruent to 1 mod M0, e = |U| / |U n H|
        u_total = 0
        u_in_h = 0
        for x in range(1, M, M0):
            if gcd(x, M) == 1:
                u_total += 1
                if x in H:
                    u_in_h += 1
        e = u_total // u_in_h
    H0 = {h % M0 for h in H}
    frob = ell % M0
    f = 1
    x = frob
    while x not in H0:
        x = x * frob % M0
        f += 1
    g = degree // (e * f)
    data = SplittingData(prime=ell, e=e, f=f, g=g)
    if data.efg != degree:
        raise AssertionError(f"e*f*g = {data.efg} != degree {degree}")
    return data


@dataclass(frozen=True)
class LayerSplitting:
    """Splitting of p across tower layers, with the stabilization level."""

    p: int
    q: int
    level: int
    variant: str
    data: SplittingData
    threshold: int  # least n with g(n) = g(n+1); g is constant from there on
    per_level: tuple[tuple[int, SplittingData], ...]

    @property
    def stable_g(self) -> int:
        return self.per_level[-1][1].g


def layer_splitting(p: int, q: int, n: int, variant: str = "full") -> LayerSplitting:
    """Decomposition of p in F_n (or F_n^+), plus the stabilization level.

    In a Z2-tower the prime count above p doubles until the decomposition
    subgroup is reached and is constant afterwards, so the first repeat
    g(t) = g(t+1) certifies stability for all later levels.
    """
    if n < 1:
        raise ValueError("level must be at least 1")
    cc_ok = is_prime(p) and is_prime(q) and p % 2 and q % 2 and p != q
    if not cc_ok:
        raise ValueError("p, q must be distinct odd primes")
    per_level = []
    threshold = None
    prev_g = None
    level = 1
    max_scan = max(n, 12)
    while level <= max_scan:
        data = split_prime(compositum_layer(p, q, level, variant), p)
        per_level.append((level, data))
        if prev_g is not None and data.g == prev_g and threshold is None:
            threshold = level - 1
        prev_g = data.g
        if threshold is not None and level >= n:
            break
        level += 1
    if threshold is None:
        raise ArithmeticError(f"splitting of {p} did not stabilize by level {max_scan}")
    at_n = next(d for lv, d in per_level if lv == n)
    return LayerSplitting(
        p=p,
        q=q,
        level=n,
        variant=variant,
        data=at_n,
        threshold=threshold,
        per_level=tuple(per_level),
    )


def stable_g(p: int, q: int, variant: str) -> tuple[int, int]:
    """The eventual number of primes above p in the tower, and the threshold."""
    ls = layer_splitting(p, q, 1, variant)
    return ls.stable_g, ls.threshold
