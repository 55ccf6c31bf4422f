"""Primality, quadratic symbols and the defining congruence conditions.

A prime pair (p, q) belongs to the surveyed families when

  condition 1:  q = 7 (mod 8),  (p|q) = 1  and  (2|p) = -1,
  condition 2:  q = 7 (mod 8),  p = 5 (mod 8)  and  (p|q) = -1.

The two conditions are mutually exclusive since they force opposite values
of (p|q).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt

# Deterministic Miller-Rabin witnesses for n < 3.3 * 10^24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test for 64-bit-scale inputs."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a|p) for an odd prime p, via Euler's criterion."""
    if p <= 2 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return 1 if r == 1 else -1


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a|n) for odd n > 0."""
    if n <= 0 or n % 2 == 0:
        raise ValueError("n must be a positive odd integer")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n), the full extension of the Jacobi symbol."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    twos = 0
    while n % 2 == 0:
        n //= 2
        twos += 1
    if twos:
        if a % 2 == 0:
            return 0
        if twos % 2 and a % 8 in (3, 5):
            result = -result
    return result * jacobi(a, n)


def squarefree_part(n: int) -> int:
    """Largest squarefree divisor r of n > 0 with n / r a perfect square."""
    if n <= 0:
        raise ValueError("n must be positive")
    r = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            if e % 2:
                r *= d
        d += 1 if d == 2 else 2
    return r * n


def is_squarefree(n: int) -> bool:
    return n > 0 and squarefree_part(n) == n


def is_square(n: int) -> bool:
    if n < 0:
        return False
    r = isqrt(n)
    return r * r == n


@dataclass(frozen=True)
class ConditionClass:
    """Residue and Legendre data classifying a prime pair."""

    p: int
    q: int
    cond1: bool
    cond2: bool
    p_mod8: int
    q_mod8: int
    q_mod16: int
    legendre_p_q: int
    legendre_2_p: int
    matches_mod8_profile: bool

    @property
    def in_family(self) -> bool:
        return self.cond1 or self.cond2

    @property
    def label(self) -> str:
        if self.cond1:
            return "condition 1"
        if self.cond2:
            return "condition 2"
        return "out of family"


def check_conditions(p: int, q: int) -> ConditionClass:
    """Classify the pair (p, q) against the two defining conditions."""
    for n in (p, q):
        if n == 2 or not is_prime(n):
            raise ValueError(f"{n} is not an odd prime")
    if p == q:
        raise ValueError("p and q must be distinct")
    lpq = legendre(p, q)
    l2p = legendre(2, p)
    cond1 = q % 8 == 7 and lpq == 1 and l2p == -1
    cond2 = q % 8 == 7 and p % 8 == 5 and lpq == -1
    assert not (cond1 and cond2)
    # The mod-8 profile alone (q = 7, p in {3, 5} mod 8) overstates condition
    # 1: it ignores the requirement (p|q) = 1, so some profile matches fall
    # outside the family.
    profile = q % 8 == 7 and p % 8 in (3, 5)
    return ConditionClass(
        p=p,
        q=q,
        cond1=cond1,
        cond2=cond2,
        p_mod8=p % 8,
        q_mod8=q % 8,
        q_mod16=q % 16,
        legendre_p_q=lpq,
        legendre_2_p=l2p,
        matches_mod8_profile=profile,
    )


def condition_pairs(bound: int, which: str = "both") -> list[tuple[int, int]]:
    """All qualifying pairs with p, q <= bound, sorted by (p, q)."""
    if bound < 10:
        raise ValueError("bound must be at least 10")
    primes = [n for n in range(3, bound + 1, 2) if is_prime(n)]
    out = []
    for q in primes:
        if q % 8 != 7:
            continue
        for p in primes:
            if p == q:
                continue
            cc = check_conditions(p, q)
            if which == "1" and not cc.cond1:
                continue
            if which == "2" and not cc.cond2:
                continue
            if which == "both" and not cc.in_family:
                continue
            out.append((p, q))
    return sorted(out)


def factor_over(n: int, primes: tuple[int, ...]) -> tuple[dict[int, int], int]:
    """Split n > 0 as (exponents over `primes`, remaining cofactor)."""
    if n <= 0:
        raise ValueError("n must be positive")
    exps = {}
    for p in primes:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        exps[p] = e
    return exps, n
