# cython: boundscheck=False, wraparound=False, cdivision=True
"""Cython twins of the pure-Python kernels in triquad._kernels.pure."""

from libc.math cimport sqrt as csqrt

BACKEND_NAME = "compiled"


cdef long long _isqrt_ll(long long n):
    cdef long long r = <long long>csqrt(<double>n)
    while r > 0 and r * r > n:
        r -= 1
    while (r + 1) * (r + 1) <= n:
        r += 1
    return r


def cf_expansion(long long d, long long p0, long long q0):
    """Continued fraction of (p0 + sqrt(d))/q0 for non-square d > 0."""
    if d <= 0:
        raise ValueError("d must be positive")
    cdef long long w = _isqrt_ll(d)
    if w * w == d:
        raise ValueError("d must not be a perfect square")
    if q0 <= 0 or (d - p0 * p0) % q0:
        raise ValueError("invalid continued-fraction start")
    cdef list quots = []
    cdef dict seen = {}
    cdef long long p = p0, q = q0, a
    cdef long long i = 0
    cdef object key, hit
    while True:
        key = (p, q)
        hit = seen.get(key)
        if hit is not None:
            return quots, hit, i - <long long>hit
        seen[key] = i
        if q <= 0:
            raise ArithmeticError("continued fraction left the positive branch")
        a = (p + w) // q
        quots.append(a)
        p = a * q - p
        q = (d - p * p) // q
        i += 1


cdef long long _gcd_ll(long long a, long long b):
    cdef long long t
    while b:
        t = a % b
        a = b
        b = t
    return a


def reduced_forms(long long D):
    """All primitive reduced indefinite forms (a, b, c) of discriminant D > 0."""
    if D <= 0 or D % 4 > 1:
        raise ValueError("D must be a positive discriminant")
    cdef long long w = _isqrt_ll(D)
    if w * w == D:
        raise ValueError("D must not be a perfect square")
    cdef list out = []
    cdef long long b, n4, N, lo2, hi2, i, j, m, c, k
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
                for k in range(2):
                    m = i if k == 0 else j
                    if k == 1 and i == j:
                        break
                    if lo2 <= 2 * m <= hi2:
                        c = N // m
                        if _gcd_ll(m, _gcd_ll(b, c)) == 1:
                            out.append((m, b, -c))
                            out.append((-m, b, c))
            i += 1
    return out


def unit_filter(long long M, list mods, list tables):
    """Residues x in [1, M) accepted by every condition table."""
    cdef long long n = len(mods)
    if n == 0:
        return list(range(1, M))
    cdef long long[8] cmods
    cdef const unsigned char[:] t0 = None, t1 = None, t2 = None, t3 = None
    cdef list views = []
    cdef long long i
    if n > 8:
        raise ValueError("too many condition tables")
    for i in range(n):
        cmods[i] = mods[i]
        views.append(bytes(tables[i]))
    if n > 0:
        t0 = views[0]
    if n > 1:
        t1 = views[1]
    if n > 2:
        t2 = views[2]
    if n > 3:
        t3 = views[3]
    if n > 4:
        # rare; fall back to the generic path
        return _unit_filter_generic(M, cmods, views, n)
    cdef list out = []
    cdef long long x
    for x in range(1, M):
        if not t0[x % cmods[0]]:
            continue
        if n > 1 and not t1[x % cmods[1]]:
            continue
        if n > 2 and not t2[x % cmods[2]]:
            continue
        if n > 3 and not t3[x % cmods[3]]:
            continue
        out.append(x)
    return out


cdef list _unit_filter_generic(long long M, long long* cmods, list views, long long n):
    cdef list out = []
    cdef long long x, i
    cdef bint ok
    cdef const unsigned char[:] t
    for x in range(1, M):
        ok = True
        for i in range(n):
            t = views[i]
            if not t[x % cmods[i]]:
                ok = False
                break
        if ok:
            out.append(x)
    return out
