"""Divisor functions, sums of squares and their Dirichlet series."""
from __future__ import annotations

import math
import threading
from functools import lru_cache

import mpmath

from .precision import (RIGOROUS, DomainError, PrecisionContext, ValueWithError,
                        is_real_input, realify, rounding_error, to_mp)

MAX_N = 10 ** 12
_lock = threading.Lock()


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization by trial division."""
    n = int(n)
    if n < 1:
        raise DomainError("n must be positive")
    out = []
    for p in (2, 3):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    p = 5
    step = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += step
        step = 6 - step
    if n > 1:
        out.append((n, 1))
    return out


def _sigma_from_factors(a, factors):
    total = mpmath.mpf(1)
    for p, e in factors:
        pa = mpmath.power(p, a)
        s = mpmath.mpf(1)
        t = mpmath.mpf(1)
        for _ in range(e):
            t *= pa
            s += t
        total *= s
    return total


def sigma(a, n: int, ctx: PrecisionContext) -> ValueWithError:
    """sum of d^a over the divisors d of n."""
    n = int(n)
    if n < 1 or n > MAX_N:
        raise DomainError("n out of supported range")
    a = to_mp(a)
    with ctx.workdps():
        v = _sigma_from_factors(a, factorize(n))
        return realify(ValueWithError(v, rounding_error(v, ctx, 8), RIGOROUS), is_real_input(a))


def divisor_count(n: int) -> int:
    c = 1
    for _, e in factorize(n):
        c *= e + 1
    return c


@lru_cache(maxsize=64)
def _spf(limit: int) -> tuple:
    spf = list(range(limit + 1))
    i = 2
    while i * i <= limit:
        if spf[i] == i:
            for j in range(i * i, limit + 1, i):
                if spf[j] == j:
                    spf[j] = i
        i += 1
    return tuple(spf)


def sigma_values(a, N: int) -> list:
    """[sigma_a(1), ..., sigma_a(N)] at the current precision (index 0 unused)."""
    N = int(N)
    spf = _spf(max(N, 2))
    out = [mpmath.mpf(0)] * (N + 1)
    if N >= 1:
        out[1] = mpmath.mpf(1)
    powers = {}
    for n in range(2, N + 1):
        p = spf[n]
        m = n
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if p not in powers:
            powers[p] = mpmath.power(p, a)
        pa = powers[p]
        s = mpmath.mpf(1)
        t = mpmath.mpf(1)
        for _ in range(e):
            t *= pa
            s += t
        out[n] = out[m] * s
    return out


# ---------------------------------------------------------------------------
# sums of squares

_rk_cache: dict = {}


def _r1_row(N: int) -> list:
    row = [0] * (N + 1)
    row[0] = 1
    j = 1
    while j * j <= N:
        row[j * j] = 2
        j += 1
    return row


def rk_table(k: int, N: int) -> tuple:
    """(r_k(0), ..., r_k(N)) by repeated convolution with the r_1 row."""
    k, N = int(k), int(N)
    if k < 1:
        raise DomainError("k must be at least 1")
    if N < 0:
        raise DomainError("N must be nonnegative")
    key = (k, N)
    with _lock:
        hit = _rk_cache.get(key)
        if hit is None:
            for (kk, nn), row in _rk_cache.items():
                if kk == k and nn >= N:
                    hit = row[: N + 1]
                    break
    if hit is not None:
        return hit
    r1 = _r1_row(N)
    squares = [j * j for j in range(int(N ** 0.5) + 2) if j * j <= N]
    row = list(r1)
    for _ in range(k - 1):
        new = [0] * (N + 1)
        for n in range(N + 1):
            acc = row[n]  # j = 0 term
            for j in squares[1:]:
                if j > n:
                    break
                acc += 2 * row[n - j]
            new[n] = acc
        row = new
    result = tuple(row)
    with _lock:
        _rk_cache[key] = result
    return result


def rk(k: int, n: int) -> int:
    n = int(n)
    if n < 0:
        raise DomainError("n must be nonnegative")
    return rk_table(k, n)[n]


def rk_brute(k: int, n: int) -> int:
    """Count integer k-tuples with squares summing to n by direct enumeration."""
    k, n = int(k), int(n)
    if k < 1 or n < 0:
        raise DomainError("need k >= 1 and n >= 0")

    def count(dims, rest):
        if dims == 0:
            return 1 if rest == 0 else 0
        r = math.isqrt(rest)
        return sum(count(dims - 1, rest - a * a) for a in range(-r, r + 1))

    return count(k, n)


# ---------------------------------------------------------------------------
# Dirichlet series


def lattice_zeta(k: int, s, ctx: PrecisionContext) -> ValueWithError:
    """sum_{n>=1} r_k(n) n^(-s), continued analytically via theta inversion.

    pi^-s Gamma(s) Z(s) = sum_{n>=1} r_k(n) [Gamma(s, pi n)(pi n)^-s
                           + Gamma(k/2 - s, pi n)(pi n)^(s-k/2)] - 1/s + 1/(s - k/2)
    """
    k = int(k)
    s = to_mp(s)
    h = mpmath.mpf(k) / 2
    if s == h or s == 0:
        raise DomainError("pole")
    with ctx.workdps(10):
        N = int((ctx.working_digits + 15) * mpmath.log(10) / mpmath.pi) + 4
        row = rk_table(k, N)
        acc = mpmath.mpf(0)
        for n in range(1, N + 1):
            if row[n] == 0:
                continue
            x = mpmath.pi * n
            acc += row[n] * (mpmath.gammainc(s, x) * mpmath.power(x, -s)
                             + mpmath.gammainc(h - s, x) * mpmath.power(x, s - h))
        acc += -1 / s + 1 / (s - h)
        v = acc * mpmath.power(mpmath.pi, s) * mpmath.rgamma(s)
    with ctx.workdps():
        return realify(ValueWithError(+v, rounding_error(v, ctx, 2 * N), RIGOROUS), is_real_input(s))


def dirichlet_sigma_check(z, s, N: int, ctx: PrecisionContext) -> ValueWithError:
    """|sum_{n<=N} sigma_z(n) n^-s - zeta(s) zeta(s-z)| with a tail bound as error."""
    z, s = to_mp(z), to_mp(s)
    N = int(N)
    x = max(mpmath.re(z), 0)
    margin = mpmath.re(s) - x - mpmath.mpf(3) / 2
    if margin <= 0:
        raise DomainError("need Re(s) > max(Re z, 0) + 3/2")
    with ctx.workdps():
        vals = sigma_values(z, N)
        part = mpmath.fsum(vals[n] * mpmath.power(n, -s) for n in range(1, N + 1))
        full = mpmath.zeta(s) * mpmath.zeta(s - z)
        resid = abs(part - full)
        # sigma_x(n) <= n^max(x,0) d(n) <= 2 n^(max(x,0)+1/2)
        tail = 2 * mpmath.power(N, -margin) / margin
        return ValueWithError(resid, tail + rounding_error(full, ctx, N), RIGOROUS)
