"""Lambert, theta and transformed series with certified truncation.

Slowly decaying transformed series are split at the index N0 beyond which
the summand equals its algebraic expansion up to an exponentially small
remainder. Terms up to N0 are evaluated directly; the remaining part of
each expansion term is an exact Dirichlet series (zeta products, lattice
zeta) minus its first N0 terms.
"""
from __future__ import annotations

import functools
import inspect
from typing import Callable, Optional

import mpmath

from .arith import lattice_zeta, rk_table, sigma_values
from .bessel import a_poly, asymptotic_coefficients, besselk, mu_k_nu
from .classic import (_asymptotic_tail_threshold, pfq, sinh_shi_minus_cosh_chi,
                      tricomi_u)
from .precision import (HEURISTIC, RIGOROUS, ConvergenceError, DomainError,
                        PrecisionContext, ValueWithError, adaptive, rounding_error)

DIRECT_LIMIT = 4000


def _working(fn):
    """Run `fn` at its context's working precision (inner calls may raise it)."""
    sig = inspect.signature(fn)

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        ctx = sig.bind(*args, **kwargs).arguments["ctx"]
        with ctx.workdps():
            return fn(*args, **kwargs)
    return wrapper


def poly_exp_tail(N, p, r):
    """Bound for sum_{n>=N} n^p e^(-n r), r > 0, N >= 1."""
    N = mpmath.mpf(N)
    q = mpmath.power((N + 1) / N, max(p, 0)) * mpmath.exp(-r)
    if q >= 1:
        return mpmath.inf
    return mpmath.power(N, p) * mpmath.exp(-N * r) / (1 - q)


def exp_cut(C, p, r, tol) -> int:
    """Smallest N with C * sum_{n>N} n^p e^(-n r) <= tol."""
    if r <= 0:
        raise DomainError("series needs a positive decay rate")
    N = 1
    while C * poly_exp_tail(N + 1, p, r) > tol:
        N = max(N + 1, int(N * 1.05))
        if N > 10 ** 7:
            raise ConvergenceError("no convergence")
    return N


def asymptotic_start(x1_re, ctx: PrecisionContext) -> int:
    """Largest N0 such that n > N0 implies n * x1_re beyond the expansion threshold."""
    if x1_re <= 0:
        raise DomainError("expansion variable must have positive real part")
    T = _asymptotic_tail_threshold(ctx)
    return max(0, int(mpmath.ceil(T / x1_re)) - 1)


# ---------------------------------------------------------------------------
# exponentially convergent series


@_working
def lambert_sigma(a, y, ctx: PrecisionContext):
    """sum_{n>=1} sigma_a(n) e^(-n y); returns (value, terms)."""
    r = mpmath.re(y)
    if r <= 0:
        raise DomainError("needs Re(y) > 0")
    with ctx.workdps():
        p = max(0, mpmath.re(a)) + 1  # |sigma_a(n)| <= n^(max(Re a, 0) + 1)
        N = exp_cut(1, p, r, ctx.eps * mpmath.exp(-r))
        vals = sigma_values(a, N)
        q = mpmath.exp(-y)
        qn = mpmath.mpf(1)
        s = mpmath.mpf(0)
        big = mpmath.mpf(0)
        for n in range(1, N + 1):
            qn *= q
            t = vals[n] * qn
            s += t
            big = max(big, abs(t))
        err = poly_exp_tail(N + 1, p, r) + rounding_error(big, ctx, 2 * N)
        return ValueWithError(s, err, RIGOROUS), N


@_working
def lambert_power(a, y, ctx: PrecisionContext):
    """sum_{n>=1} n^a / (e^(n y) - 1); returns (value, terms)."""
    r = mpmath.re(y)
    if r <= 0:
        raise DomainError("needs Re(y) > 0")
    with ctx.workdps():
        C = 1 / (1 - mpmath.exp(-r))
        p = mpmath.re(a)
        N = exp_cut(C, p, r, ctx.eps * mpmath.exp(-r))
        s = mpmath.mpf(0)
        big = mpmath.mpf(0)
        for n in range(1, N + 1):
            t = mpmath.power(n, a) / mpmath.expm1(n * y)
            s += t
            big = max(big, abs(t))
        err = C * poly_exp_tail(N + 1, p, r) + rounding_error(big, ctx, 3 * N)
        return ValueWithError(s, err, RIGOROUS), N


@_working
def theta_rk(k: int, z, ctx: PrecisionContext):
    """sum_{n>=0} r_k(n) e^(-n z); returns (value, terms)."""
    r = mpmath.re(z)
    if r <= 0:
        raise DomainError("needs Re(z) > 0")
    with ctx.workdps():
        C = mpmath.mpf(3) ** k  # r_k(n) <= (2 sqrt(n) + 1)^k <= 3^k n^(k/2)
        N = exp_cut(C, mpmath.mpf(k) / 2, r, ctx.eps)
        row = rk_table(k, N)
        q = mpmath.exp(-z)
        qn = mpmath.mpf(1)
        s = mpmath.mpf(row[0])
        for n in range(1, N + 1):
            qn *= q
            if row[n]:
                s += row[n] * qn
        err = C * poly_exp_tail(N + 1, mpmath.mpf(k) / 2, r) + rounding_error(s, ctx, 2 * N)
        return ValueWithError(s, err, RIGOROUS), N


@_working
def theta_one(z, ctx: PrecisionContext):
    """sum_{n in Z} e^(-n^2 z)."""
    r = mpmath.re(z)
    if r <= 0:
        raise DomainError("needs Re(z) > 0")
    with ctx.workdps():
        s = mpmath.mpf(1)
        n = 1
        while True:
            t = 2 * mpmath.exp(-n * n * z)
            s += t
            if abs(t) < ctx.eps * abs(s) * (1 - mpmath.exp(-r)):
                break
            n += 1
        # remaining terms are dominated by a geometric series with ratio e^-r
        return ValueWithError(s, abs(t) / (1 - mpmath.exp(-r)), RIGOROUS), n


@_working
def rk_bessel_lhs(k: int, mu, z, ctx: PrecisionContext):
    """sum_{n>=1} r_k(n) n^(mu+1) K_mu(n z); returns (value, terms)."""
    r = mpmath.re(z)
    if r <= 0:
        raise DomainError("needs Re(z) > 0")
    with ctx.workdps():
        # K_mu(x) <= 2 sqrt(pi/(2x)) e^-x once x exceeds |mu|^2 + 2
        start = int((abs(mu) ** 2 + 2) / r) + 1
        C = 2 * mpmath.mpf(3) ** k * mpmath.sqrt(mpmath.pi / (2 * r))
        p = mpmath.mpf(k) / 2 + mpmath.re(mu) + mpmath.mpf(1) / 2
        N = max(start, exp_cut(C, p, r, ctx.eps * mpmath.exp(-r)))
        row = rk_table(k, N)
    s = mpmath.mpf(0)
    err = mpmath.mpf(0)
    with ctx.workdps():
        for n in range(1, N + 1):
            if row[n] == 0:
                continue
            K = besselk(mu, n * z, ctx)
            f = row[n] * mpmath.power(n, mu + 1)
            s += f * K.value
            err += abs(f) * K.abs_error
        err += C * poly_exp_tail(N + 1, p, r) + rounding_error(s, ctx, 2 * N)
        return ValueWithError(s, err, HEURISTIC), N


# ---------------------------------------------------------------------------
# Dirichlet tails


def dirichlet_tail(coeffs: Callable[[int], object], bound_c, bound_p, s, N0: int,
                   total: Callable, ctx: PrecisionContext) -> ValueWithError:
    """sum_{n>N0} c_n n^(-s) where |c_n| <= bound_c n^bound_p.

    `coeffs(M)` returns an indexable with c_1..c_M. `total(s, c)` is the full
    Dirichlet series, evaluated at context c. A direct sum is used when it
    converges quickly; otherwise the full series minus its first N0 terms is
    taken at a precision raised to absorb the cancellation.
    """
    sig = mpmath.re(s)
    excess = sig - bound_p - 1
    if excess > 0:
        base = mpmath.power(N0 + 1, -sig)
        tol = ctx.eps * base
        M = int(mpmath.ceil(mpmath.power(bound_c / (excess * tol), 1 / excess)))
        if M - N0 <= DIRECT_LIMIT:
            M = max(M, N0 + 1)
            cs = coeffs(M)
            v = mpmath.fsum(cs[n] * mpmath.power(n, -s) for n in range(N0 + 1, M + 1))
            err = bound_c * mpmath.power(M, -excess) / excess + rounding_error(base, ctx, M - N0)
            return ValueWithError(v, err, RIGOROUS)
    extra = int(max(sig, 0) * mpmath.log10(N0 + 1)) + 5 if N0 > 0 else 0
    c = ctx.raised(extra)
    with c.workdps():
        full = total(s, c)
        cs = coeffs(N0) if N0 > 0 else []
        part = mpmath.fsum(cs[n] * mpmath.power(n, -s) for n in range(1, N0 + 1))
        v = full - part
    with ctx.workdps():
        return ValueWithError(+v, rounding_error(v, ctx, 4), RIGOROUS)


def _zeta_total(s, c):
    return mpmath.zeta(s)


def _sigma_total(a):
    return lambda s, c: mpmath.zeta(s) * mpmath.zeta(s - a)


def _ones(M):
    return [mpmath.mpf(1)] * (M + 1)


def _logs(M):
    return [mpmath.mpf(0)] + [mpmath.log(n) for n in range(1, M + 1)]


def _sigma_coeffs(a):
    return lambda M: sigma_values(a, M)


def _sigma_bound(a):
    return 2, max(0, mpmath.re(a)) + mpmath.mpf(1) / 2  # d(n) <= 2 sqrt(n)


def _expansion_tail(terms, ctx: PrecisionContext, label="expansion"):
    """Sum a lazily generated asymptotic series of tail pieces.

    `terms` yields ValueWithError pieces; the sum stops when a piece is
    negligible or when the pieces start to grow (optimal truncation).
    """
    s = ValueWithError(mpmath.mpf(0), 0, RIGOROUS)
    last = None
    count = 0
    for t in terms:
        count += 1
        at = abs(t.value)
        if last is not None and at > last and at > ctx.eps * abs(s.value):
            return s.with_error(last, HEURISTIC), count
        s = s + t
        if at == 0 and t.abs_error == 0:
            continue
        if at <= ctx.eps * abs(s.value) * mpmath.mpf(10) ** (-2):
            return s.with_error(at, HEURISTIC), count
        last = at
    raise ConvergenceError(f"{label} did not settle")


# ---------------------------------------------------------------------------
# divisor sums against the generalized K


def _sigma_k_prefactor(a):
    return mpmath.pi * mpmath.power(2, mpmath.mpf(3) / 2 + a) / mpmath.sinpi(a / 2)


def _onef2_bracket(a, n, y, ctx: PrecisionContext) -> ValueWithError:
    """(2 pi n)^-a sqrt(pi) 2^a 1F2~(1; (1-a)/2, 1-a/2; X^2/4) - (2pi/y)^a cosh X, X = 4pi^2 n/y.

    1F2~ is the regularized function; the two parts cancel to about e^-X.
    """
    def run(c):
        with c.workdps():
            X = 4 * mpmath.pi ** 2 * n / y
            reg = pfq([1], [(1 - a) / 2, 1 - a / 2], X * X / 4, c, regularized=True)
            f = mpmath.power(2 * mpmath.pi * n, -a) * mpmath.sqrt(mpmath.pi) * mpmath.power(2, a)
            first = reg.scale(f)
            second = mpmath.power(2 * mpmath.pi / y, a) * mpmath.cosh(X)
            v = first - second
            scale = max(abs(first.value), abs(second))
            return v.with_error(rounding_error(scale, c, 4)), scale

    X0 = mpmath.re(4 * mpmath.pi ** 2 * n / y)
    return adaptive(run, ctx, int(0.87 * abs(X0)) + 2)


@_working
def sigma_k_series(a, y, m: Optional[int], ctx: PrecisionContext, bracket: bool = False):
    """sum_n sigma_a(n) n^(-a/2) {muK(X_n) - [prefactor * A_m](X_n)} with mu=1/2, nu=a/2, w=0.

    m=None omits the subtraction. With `bracket`, the terms below N0 come
    from the explicit 1F2/cosh bracket instead of the generalized K.
    Returns (value, terms).
    """
    a, y = mpmath.mpmathify(a), mpmath.mpmathify(y)
    half = mpmath.mpf(1) / 2
    with ctx.workdps(10):
        X1 = 4 * mpmath.pi ** 2 / y
        N0 = asymptotic_start(mpmath.re(X1), ctx)
        P = _sigma_k_prefactor(a)
        Q = y * mpmath.sinpi(a / 2) / (2 * mpmath.pi) * 2 * mpmath.sqrt(2 * mpmath.pi) * mpmath.power(y, -1 - a / 2)
    kmin = 0 if m is None else m + 1
    total = ValueWithError(mpmath.mpf(0), 0, RIGOROUS)
    with ctx.workdps():
        sv = sigma_values(a, max(N0, 1))
    for n in range(1, N0 + 1):
        X = n * X1
        if bracket:
            term = _onef2_bracket(a, n, y, ctx)
            with ctx.workdps():
                term = term.scale(1 / Q)
                term = term.scale(mpmath.power(n, a / 2))
        else:
            extra = 0 if m is None else int(2 * (m + 1) * max(0, mpmath.log10(abs(X)))) + 3
            c = ctx.raised(extra)
            term = mu_k_nu(half, a / 2, X, 0, c)
            if m is not None:
                with c.workdps():
                    A = a_poly(m, half, a / 2, 0, X, c)
                    term = term - A.scale(P * mpmath.power(X, -a / 2 - 2))
        with ctx.workdps():
            total = total + term.scale(sv[n] * mpmath.power(n, -a / 2))

    bc, bp = _sigma_bound(a)

    def pieces():
        count = 200
        coeffs = asymptotic_coefficients(half, a / 2, 0, count)
        for k in range(kmin, count):
            ck = coeffs[k]
            if ck == 0:
                yield ValueWithError(mpmath.mpf(0), 0, RIGOROUS)
                continue
            s = a + 2 + 2 * k
            D = dirichlet_tail(_sigma_coeffs(a), bc, bp, s, N0, _sigma_total(a), ctx)
            with ctx.workdps():
                f = P * mpmath.power(X1, -a / 2 - 2) * ck * mpmath.power(X1 / 2, -2 * k)
                yield D.scale(f)

    with ctx.workdps():
        coeffs0 = asymptotic_coefficients(half, a / 2, 0, kmin + 40)
    if all(c == 0 for c in coeffs0[kmin:]):
        tail, used = ValueWithError(mpmath.mpf(0), 0, RIGOROUS), 0
    else:
        with ctx.workdps():
            tail, used = _expansion_tail(pieces(), ctx)
    with ctx.workdps():
        res = total + tail
        # exponentially small remainder of the expansion beyond N0
        res = res.with_error(abs(mpmath.exp(-(N0 + 1) * X1)) * max(1, abs(res.value)), HEURISTIC)
        return res, N0 + used


# ---------------------------------------------------------------------------
# divisor sums against sinh Shi - cosh Chi


@_working
def shichi_series(a, y, m_corr: int, ctx: PrecisionContext, tricomi: bool = False):
    """sum_n sigma_a(n) {S(X_n) + sum_{j=1}^{m_corr} (2j-1)! X_n^(-2j)}.

    S = sinh Shi - cosh Chi, X_n = 4 pi^2 n / y. With `tricomi` the direct
    terms are (U(1;1;X) + U(1;1;-X))/2 instead of S (m_corr must be 0).
    Returns (value, terms).
    """
    a, y = mpmath.mpmathify(a), mpmath.mpmathify(y)
    with ctx.workdps(10):
        X1 = 4 * mpmath.pi ** 2 / y
        N0 = asymptotic_start(mpmath.re(X1), ctx)
    with ctx.workdps():
        sv = sigma_values(a, max(N0, 1))
    total = ValueWithError(mpmath.mpf(0), 0, RIGOROUS)
    for n in range(1, N0 + 1):
        X = n * X1
        extra = int(2 * m_corr * max(0, mpmath.log10(abs(X)))) + 3
        c = ctx.raised(extra)
        if tricomi:
            u1 = tricomi_u(1, 1, X, c)
            u2 = tricomi_u(1, 1, -X, c)
            with c.workdps():
                term = (u1 + u2).scale(mpmath.mpf(1) / 2)
        else:
            term = sinh_shi_minus_cosh_chi(X, c)
        with c.workdps():
            corr = mpmath.fsum(mpmath.factorial(2 * j - 1) * mpmath.power(X, -2 * j)
                               for j in range(1, m_corr + 1))
            term = term + corr
        with ctx.workdps():
            total = total + term.scale(sv[n])
    bc, bp = _sigma_bound(a)

    def pieces():
        j = m_corr + 1
        while True:
            D = dirichlet_tail(_sigma_coeffs(a), bc, bp, 2 * j, N0, _sigma_total(a), ctx)
            with ctx.workdps():
                yield D.scale(-mpmath.factorial(2 * j - 1) * mpmath.power(X1, -2 * j))
            j += 1

    with ctx.workdps():
        tail, used = _expansion_tail(pieces(), ctx)
        res = (total + tail).with_error(abs(mpmath.exp(-(N0 + 1) * X1)), HEURISTIC)
        return res, N0 + used


# ---------------------------------------------------------------------------
# digamma pair sums


def _psi_pair(x, ctx: PrecisionContext):
    """psi(i x) + psi(-i x)."""
    if mpmath.im(x) == 0:
        return 2 * mpmath.re(mpmath.digamma(1j * x))
    return mpmath.digamma(1j * x) + mpmath.digamma(-1j * x)


def _psi_coeff(k):
    """c_k in psi(ix) + psi(-ix) ~ 2 log x - sum_k c_k x^(-2k)."""
    return (-1) ** k * mpmath.bernoulli(2 * k) / k


@_working
def psi_pair_series(power: int, x1, ctx: PrecisionContext, with_log: bool = False):
    """sum_{n>=1} n^-power (psi(i n x1) + psi(-i n x1)), or with `with_log`
    sum_{n>=1} n^-power (log(n x1) - (psi(i n x1) + psi(-i n x1))/2).

    Returns (value, terms).
    """
    x1 = mpmath.mpmathify(x1)
    if mpmath.re(x1) <= 0:
        raise DomainError("needs Re(x1) > 0")
    if not with_log and power < 2:
        raise DomainError("series diverges")
    with ctx.workdps(10):
        N0 = asymptotic_start(2 * mpmath.pi * mpmath.re(x1), ctx)
    total = mpmath.mpf(0)
    err = mpmath.mpf(0)
    for n in range(1, N0 + 1):
        extra = int(2 * max(0, mpmath.log10(abs(n * x1)))) + 3 if with_log else 0
        c = ctx.raised(extra)
        with c.workdps():
            x = n * x1
            pp = _psi_pair(x, c)
            t = mpmath.log(x) - pp / 2 if with_log else pp
            t = t * mpmath.power(n, -power)
        with ctx.workdps():
            total += t
            err += rounding_error(max(abs(t), abs(pp)), c, 8)

    def T(s):
        return dirichlet_tail(_ones, 1, 0, s, N0, _zeta_total, ctx)

    def pieces():
        if not with_log:
            L = dirichlet_tail(_logs, 1, mpmath.mpf(1) / 2, power, N0,
                               lambda s, c: -mpmath.zeta(s, 1, 1), ctx)
            Z = T(power)
            with ctx.workdps():
                yield Z.scale(2 * mpmath.log(x1)) + L.scale(2)
        k = 1
        while True:
            piece = T(power + 2 * k)
            with ctx.workdps():
                f = _psi_coeff(k) * mpmath.power(x1, -2 * k)
                yield piece.scale(f / 2 if with_log else -f)
            k += 1

    with ctx.workdps():
        tail, used = _expansion_tail(pieces(), ctx)
        res = ValueWithError(total, err, RIGOROUS) + tail
        res = res.with_error(abs(mpmath.exp(-2 * mpmath.pi * (N0 + 1) * x1)), HEURISTIC)
        return res, N0 + used


# ---------------------------------------------------------------------------
# sums of squares against the generalized K


@_working
def rk_k_series(k: int, mu, z, ctx: PrecisionContext):
    """sum_n r_k(n) n^(1/2 - k/4) muK_{1/2}(pi^2 n / z, k/4); returns (value, terms)."""
    mu, z = mpmath.mpmathify(mu), mpmath.mpmathify(z)
    half = mpmath.mpf(1) / 2
    w = mpmath.mpf(k) / 4
    with ctx.workdps(10):
        Z1 = mpmath.pi ** 2 / z
        N0 = asymptotic_start(mpmath.re(Z1), ctx)
    row = rk_table(k, max(N0, 1))
    total = ValueWithError(mpmath.mpf(0), 0, RIGOROUS)
    for n in range(1, N0 + 1):
        if row[n] == 0:
            continue
        term = mu_k_nu(mu, half, n * Z1, w, ctx)
        with ctx.workdps():
            total = total + term.scale(row[n] * mpmath.power(n, half - w))
    bc, bp = mpmath.mpf(3) ** k, mpmath.mpf(k) / 2

    def coeffs(M):
        return rk_table(k, M)

    def lat(s, c):
        return lattice_zeta(k, s, c).value

    with ctx.workdps():
        P = mpmath.pi * mpmath.power(2, 3 * mu + 1 + 2 * w) * mpmath.power(Z1, -(w + 2 * mu + mpmath.mpf(3) / 2))
        cs = asymptotic_coefficients(mu, half, w, 200)

    def pieces():
        for j, cj in enumerate(cs):
            if cj == 0:
                yield ValueWithError(mpmath.mpf(0), 0, RIGOROUS)
                continue
            s = 2 * w + 2 * mu + 1 + 2 * j
            D = dirichlet_tail(coeffs, bc, bp, s, N0, lat, ctx)
            with ctx.workdps():
                yield D.scale(P * cj * mpmath.power(Z1 / 2, -2 * j))

    with ctx.workdps():
        if all(c == 0 for c in cs[:40]):
            tail, used = ValueWithError(mpmath.mpf(0), 0, RIGOROUS), 0
        else:
            tail, used = _expansion_tail(pieces(), ctx)
        res = (total + tail).with_error(abs(mpmath.exp(-(N0 + 1) * Z1)) * max(1, abs(total.value)), HEURISTIC)
        return res, N0 + used
