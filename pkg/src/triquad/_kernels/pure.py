"""Pure-Python implementations of the hot kernels.

These mirror triquad._kernels._core (the Cython build) exactly; the package
selects whichever is available at import time.
"""

from __future__ import annotations

from math import gcd, isqrt

BACKEND_NAME = "python"


def cf_expansion(d: int, p0: int, q0: int) -> tuple[list[int], int, int]:
    """Continued fraction of (p0 + sqrt(d))/q0 for non-square d > 0.

    Requires q0 > 0 and q0 | d - p0^2.  Returns (quotients, preperiod,
    period): the partial quotients a_0 .. a_{preperiod+period-1}, the index
    where the periodic part starts, and its length.
    """
    if d <= 0:
        raise ValueError("d must be positive")
    w = isqrt(d)
    if w * w == d:
        raise ValueError("d must not be a perfect square")
    if q0 <= 0 or (d - p0 * p0) % q0:
        raise ValueError("invalid continued-fraction start")
    quots: list[int] = []
    seen: dict[tuple[int, int], int] = {}
    p, q = p0, q0
    i = 0
    while True:
        key = (p, q)
        hit = seen.get(key)
        if hit is not None:
            return quots, hit, i - hit
        seen[key] = i
        if q <= 0:
            raise ArithmeticError("continued fraction left the positive branch")
        a = (p + w) // q
        quots.append(a)
        p = a * q - p
        q = (d - p * p) // q
        i += 1


def reduced_forms(D: int) -> list[tuple[int, int, int]]:
    """All primitive reduced indefinite forms (a, b, c) of discriminant D > 0.

    A form is reduced iff 0 < b < sqrt(D) and sqrt(D) - b < 2|a| < sqrt(D) + b.
    """
    if D <= 0 or D % 4 not in (0, 1):
        raise ValueError("D must be a positive discriminant")
    w = isqrt(D)
    if w * w == D:
        raise ValueError("D must not be a perfect square")
    out: list[tuple[int, int, int]] = []
    for b in range(2 - (D % 2), w + 1, 2):
        n4 = D - b * b
        if n4 % 4:
            continue
        N = n4 // 4
        lo2 = w - b + 1
        hi2 = w + b
        i = 1
        while i * i <= N:
            if N % i == 0:
                j = N // i
                for m in ((i,) if i == j else (i, j)):
                    if lo2 <= 2 * m <= hi2:
                        c = N // m
                        if gcd(m, gcd(b, c)) == 1:
                            out.append((m, b, -c))
                            out.append((-m, b, c))
            i += 1
    return out


def unit_filter(M: int, mods: list[int], tables: list[bytes]) -> list[int]:
    """Residues x in [1, M) accepted by every condition table.

    tables[i][x % mods[i]] is 1 to accept, 0 to reject.  Callers arrange the
    tables so that rejection covers every prime dividing M.
    """
    out: list[int] = []
    for x in range(1, M):
        for mod, t in zip(mods, tables):
            if not t[x % mod]:
                break
        else:
            out.append(x)
    return out
