"""Classical special functions: gamma family, zeta, Bernoulli numbers,
generalized hypergeometric series, Tricomi U and the exponential integrals."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import mpmath

from .precision import (HEURISTIC, RIGOROUS, ConvergenceError, DomainError,
                        PrecisionContext, ValueWithError, adaptive, finite_sum,
                        is_real_input, realify, rounding_error, sum_series, to_mp)


def _is_nonpos_int(z) -> bool:
    if mpmath.im(z) != 0:
        return False
    r = mpmath.re(z)
    return r <= 0 and mpmath.isint(r)


def _exact(v, ctx: PrecisionContext) -> ValueWithError:
    """Wrap a library value computed at working precision."""
    return ValueWithError(v, rounding_error(v, ctx, 4), RIGOROUS)


def gamma(z, ctx: PrecisionContext) -> ValueWithError:
    z = to_mp(z)
    if _is_nonpos_int(z):
        raise DomainError("pole")
    with ctx.workdps():
        return _exact(mpmath.gamma(z), ctx)


def rgamma(z, ctx: PrecisionContext) -> ValueWithError:
    """1/Gamma(z), zero at the poles."""
    with ctx.workdps():
        return _exact(mpmath.rgamma(to_mp(z)), ctx)


def digamma(z, ctx: PrecisionContext) -> ValueWithError:
    z = to_mp(z)
    if _is_nonpos_int(z):
        raise DomainError("pole")
    with ctx.workdps():
        return _exact(mpmath.digamma(z), ctx)


def euler_gamma(ctx: PrecisionContext) -> ValueWithError:
    with ctx.workdps():
        return _exact(+mpmath.euler, ctx)


def _zeta_raw(s):
    """zeta(s) at the current precision; functional equation left of 1/2."""
    if s == 0:
        return mpmath.mpf(-0.5)
    if mpmath.re(s) > 0.5:
        return mpmath.zeta(s)
    if mpmath.im(s) == 0 and mpmath.re(s) < 0 and mpmath.isint(s) and int(mpmath.re(s)) % 2 == 0:
        return mpmath.mpf(0)
    # zeta(s) = 2^s pi^(s-1) sin(pi s/2) Gamma(1-s) zeta(1-s)
    return (mpmath.power(2, s) * mpmath.power(mpmath.pi, s - 1) * mpmath.sinpi(s / 2)
            * mpmath.gamma(1 - s) * mpmath.zeta(1 - s))


def zeta(s, ctx: PrecisionContext) -> ValueWithError:
    s = to_mp(s)
    if s == 1:
        raise DomainError("pole")
    with ctx.workdps():
        v = _zeta_raw(s)
        return realify(_exact(v, ctx), is_real_input(s))


def zeta_prime(s, ctx: PrecisionContext) -> ValueWithError:
    s = to_mp(s)
    if s == 1:
        raise DomainError("pole")
    with ctx.workdps():
        if mpmath.im(s) == 0 and mpmath.re(s) < 0 and mpmath.isint(s) and int(mpmath.re(s)) % 2 == 0:
            m = -int(mpmath.re(s)) // 2
            v = ((-1) ** m * mpmath.factorial(2 * m) / (2 * (2 * mpmath.pi) ** (2 * m))
                 * mpmath.zeta(2 * m + 1))
            return _exact(v, ctx)
        v = mpmath.zeta(s, 1, 1)
        return realify(_exact(v, ctx), is_real_input(s))


def bernoulli_fraction(n: int) -> Fraction:
    n = int(n)
    if n < 0:
        raise DomainError("index must be nonnegative")
    if n % 2 == 1 and n > 1:
        raise DomainError("odd index above 1 is out of contract")
    p, q = mpmath.bernfrac(n)
    return Fraction(int(p), int(q))


def bernoulli(n: int, ctx: PrecisionContext) -> ValueWithError:
    f = bernoulli_fraction(n)
    with ctx.workdps():
        v = mpmath.mpf(f.numerator) / f.denominator
        return _exact(v, ctx)


# ---------------------------------------------------------------------------
# generalized hypergeometric series


def _ratio_bound_factory(upper, lower, z, p_le_q: bool):
    """Monotone bound R(k) on |t_{k+1}/t_k| valid for k > max|b_j|."""
    au = [abs(a) for a in upper]
    bl = [abs(b) for b in lower]
    bmax = max(bl) if bl else mpmath.mpf(0)
    az = abs(z)
    q = len(lower)
    p = len(upper)

    def bound(k):
        if k <= bmax + 1:
            return None
        r = az / (k + 1)
        pairs = min(p, q)
        for j in range(pairs):
            r *= (au[j] + k) / (k - bl[j])
        for j in range(pairs, q):
            r /= (k - bl[j])
        for j in range(pairs, p):
            r *= max(1, (au[j] + k) / (k + 1))
        return r
    return bound


def _hyper_series(upper, lower, z, ctx: PrecisionContext, regularized: bool):
    """Returns (ValueWithError, largest term magnitude) at current precision."""
    upper = [mpmath.mpmathify(a) for a in upper]
    lower = [mpmath.mpmathify(b) for b in lower]
    z = mpmath.mpmathify(z)
    p, q = len(upper), len(lower)

    terminate = None
    for a in upper:
        if _is_nonpos_int(a):
            n_a = int(-mpmath.re(a))
            terminate = n_a if terminate is None else min(terminate, n_a)

    start = 0
    for b in lower:
        if _is_nonpos_int(b):
            if not regularized:
                raise DomainError("lower-parameter pole")
            start = max(start, int(-mpmath.re(b)) + 1)

    if z == 0:
        if start > 0:
            return ValueWithError(mpmath.mpf(0), 0, RIGOROUS), mpmath.mpf(0)
        v = mpmath.mpf(1)
        if regularized:
            for b in lower:
                v *= mpmath.rgamma(b)
        return ValueWithError(v, rounding_error(v, ctx), RIGOROUS), abs(v)

    if p > q + 1 and terminate is None:
        raise DomainError("divergent")
    if p == q + 1 and terminate is None and abs(z) >= 1:
        raise DomainError("divergent")
    if terminate is not None and terminate < start:
        return ValueWithError(mpmath.mpf(0), 0, RIGOROUS), mpmath.mpf(0)

    # first nonzero term
    t0 = mpmath.power(z, start) / mpmath.factorial(start)
    for a in upper:
        t0 *= mpmath.rf(a, start)
    if regularized:
        for b in lower:
            t0 *= mpmath.rgamma(b + start)
    else:
        for b in lower:
            t0 /= mpmath.rf(b, start)

    state = {"t": t0, "big": abs(t0)}

    def term(n):
        if n == start:
            return state["t"]
        k = n - 1
        r = z / n
        for a in upper:
            r *= a + k
        for b in lower:
            r /= b + k
        t = state["t"] * r
        state["t"] = t
        at = abs(t)
        if at > state["big"]:
            state["big"] = at
        return t

    if terminate is not None:
        res = finite_sum((term(n) for n in range(start, terminate + 1)), ctx)
        return res, max(state["big"], abs(res.value))

    bound = _ratio_bound_factory(upper, lower, z, p <= q)

    def tail(n):
        # remainder after terms start..n-1; t_{n-1} is cached
        rk = bound(n - 1)
        rn = bound(n)
        if rk is None or rn is None or rn >= 1:
            return None
        return abs(state["t"]) * rk / (1 - rn)

    res = sum_series(term, tail, ctx, start=start)
    return res, max(state["big"], abs(res.value))


def pfq(upper: Sequence, lower: Sequence, z, ctx: PrecisionContext,
        regularized: bool = False) -> ValueWithError:
    """pFq(upper; lower; z); `regularized` divides by the product of Gamma(b_j)."""
    upper = [to_mp(a) for a in upper]
    lower = [to_mp(b) for b in lower]
    z = to_mp(z)
    real = is_real_input(z, *upper, *lower)
    res = adaptive(lambda c: _hyper_series(upper, lower, z, c, regularized), ctx)
    return realify(res, real)


# ---------------------------------------------------------------------------
# exponential integrals


def _ei_series(x, ctx):
    x = mpmath.mpf(x)
    state = {"t": x, "big": abs(x)}

    def term(n):  # sum_{k>=1} x^k/(k k!), n = k
        if n == 1:
            return x
        t = state["t"] * x * (n - 1) / (n * n)
        state["t"] = t
        state["big"] = max(state["big"], abs(t))
        return t

    ax = abs(x)

    def tail(n):
        if n <= ax:
            return None
        rho = ax / (n + 1)
        return abs(state["t"]) * ax * (n - 1) / (n * n) / (1 - rho)

    s = sum_series(term, tail, ctx, start=1)
    head = mpmath.euler + mpmath.log(ax)
    total = s + head
    return total.with_error(rounding_error(head, ctx)), max(state["big"], abs(head))


def ei(x, ctx: PrecisionContext) -> ValueWithError:
    x = to_mp(x)
    if mpmath.im(x) != 0:
        raise DomainError("Ei is defined here for real arguments")
    x = mpmath.re(x)
    if x == 0:
        raise DomainError("logarithmic singularity at 0")
    return adaptive(lambda c: _ei_series(x, c), ctx)


def _shi_chi_series(z, ctx):
    z = mpmath.mpmathify(z)
    z2 = z * z
    st = {"t": z, "big": abs(z)}
    ct = {"t": z2 / 4, "big": abs(z2 / 4)}

    def shi_term(n):  # z^(2k-1)/((2k-1)(2k-1)!), n = k >= 1
        if n == 1:
            return z
        k = 2 * n - 1
        # ratio from (2k-3)->(2k-1)
        t = st["t"] * z2 * (k - 2) / (k * k * (k - 1))
        st["t"] = t
        st["big"] = max(st["big"], abs(t))
        return t

    def chi_term(n):  # z^(2k)/(2k (2k)!), n = k >= 1
        if n == 1:
            return z2 / 4
        k = 2 * n
        t = ct["t"] * z2 * (k - 2) / (k * k * (k - 1))
        ct["t"] = t
        ct["big"] = max(ct["big"], abs(t))
        return t

    az2 = abs(z2)

    def tail_for(state, offset):
        def tail(n):
            k = 2 * n + offset
            if k * k < 2 * az2:
                return None
            rho = az2 / (k * (k - 1))
            if rho >= 1:
                return None
            return abs(state["t"]) * rho / (1 - rho)
        return tail

    shi = sum_series(shi_term, tail_for(st, -1), ctx, start=1)
    chi_s = sum_series(chi_term, tail_for(ct, 0), ctx, start=1)
    head = mpmath.euler + mpmath.log(z)
    chi = chi_s + head
    return shi, chi.with_error(rounding_error(head, ctx)), max(st["big"], ct["big"], abs(head))


def shi_chi(z, ctx: PrecisionContext):
    """(Shi(z), Chi(z)) with the principal logarithm in Chi."""
    z = to_mp(z)
    if mpmath.im(z) == 0 and mpmath.re(z) <= 0:
        if z == 0:
            raise DomainError("branch cut: Chi is singular at 0")
        raise DomainError("branch cut")
    real = is_real_input(z)
    out = {}

    def run(c):
        shi, chi, big = _shi_chi_series(z, c)
        out["shi"] = shi
        return chi, big

    chi = adaptive(run, ctx)
    # Shi has the same or better conditioning than Chi on the right half plane
    return realify(out["shi"], real), realify(chi, real)


def shi(z, ctx: PrecisionContext) -> ValueWithError:
    z = to_mp(z)
    if z == 0:
        return ValueWithError(mpmath.mpf(0), 0, RIGOROUS)
    with ctx.workdps():
        return _shi_chi_series(z, ctx)[0]


def _sinh_shi_minus_cosh_chi_series(z, ctx):
    shi, chi, big = _shi_chi_series(z, ctx)
    sh, ch = mpmath.sinh(z), mpmath.cosh(z)
    v = shi * sh - chi * ch
    scale = max(abs(sh * shi.value), abs(ch * chi.value))
    return v.with_error(rounding_error(scale, ctx, 4)), scale


def _asymptotic_tail_threshold(ctx: PrecisionContext):
    """|z| beyond which an optimally truncated power-type asymptotic series
    with exponentially small remainder meets the working precision."""
    return mpmath.mpf(ctx.working_digits) * mpmath.log(10) + 12


def sinh_shi_minus_cosh_chi(z, ctx: PrecisionContext) -> ValueWithError:
    """sinh(z)Shi(z) - cosh(z)Chi(z), free of the exponential cancellation.

    Small |z|: Shi/Chi series at raised precision. Large |z| in the right
    half plane: the asymptotic series -sum (2j-1)!/z^(2j).
    """
    z = to_mp(z)
    if mpmath.re(z) <= 0:
        raise DomainError("needs Re(z) > 0")
    real = is_real_input(z)
    if abs(z) > _asymptotic_tail_threshold(ctx) and abs(mpmath.arg(z)) < mpmath.pi / 3:
        with ctx.workdps():
            return realify(_tcos_asymptotic(z, ctx), real)
    extra = int(0.87 * abs(mpmath.re(z))) + 2
    return realify(adaptive(lambda c: _sinh_shi_minus_cosh_chi_series(z, c), ctx, extra), real)


def _tcos_asymptotic(z, ctx):
    z2inv = 1 / (z * z)
    t = -z2inv  # j = 1 term: -(1)!/z^2
    s = t
    j = 1
    target = ctx.eps
    while True:
        nxt = t * (2 * j) * (2 * j + 1) * z2inv
        if abs(nxt) >= abs(t):
            break
        t = nxt
        s += t
        j += 1
        if abs(t) < target * abs(s):
            break
    return ValueWithError(s, abs(t) + rounding_error(s, ctx, j), HEURISTIC)


def tcos_asymptotic_coefficients(count: int):
    """Coefficients c_j of z^(-2j), j = 1..count, of sinh Shi - cosh Chi."""
    return [-mpmath.factorial(2 * j - 1) for j in range(1, count + 1)]


# ---------------------------------------------------------------------------
# Tricomi U


def _cut_power(z, e):
    """z^e, averaged across the cut when z is on the negative real axis."""
    if mpmath.im(z) == 0 and mpmath.re(z) < 0:
        return mpmath.power(-z, e) * mpmath.cospi(e)
    return mpmath.power(z, e)


def _tricomi_generic(a, c, z, ctx):
    m1, big1 = _hyper_series([a], [c], z, ctx, True)
    m2, big2 = _hyper_series([a - c + 1], [2 - c], z, ctx, True)
    zp = _cut_power(z, 1 - c)
    f1 = mpmath.rgamma(a - c + 1)
    f2 = zp * mpmath.rgamma(a)
    pre = mpmath.pi / mpmath.sinpi(c)
    v = (m1 * f1 - m2 * f2).scale(pre)
    scale = abs(pre) * max(abs(f1) * big1, abs(f2) * big2)
    return v.with_error(rounding_error(scale, ctx, 4)), scale


def tricomi_u(a, c, z, ctx: PrecisionContext) -> ValueWithError:
    """Tricomi's U(a; c; z) from two regularized 1F1 series.

    On the negative real axis the value is the average of the limits from
    either side of the cut. Integer c is reached by a symmetric limit.
    """
    a, c, z = to_mp(a), to_mp(c), to_mp(z)
    if z == 0:
        raise DomainError("z must be nonzero")
    real = is_real_input(a, c, z)
    if mpmath.im(c) == 0 and mpmath.isint(mpmath.re(c)):
        digits = ctx.working_digits // 2 + 2
        c2 = ctx.raised(digits + 2)
        eps = mpmath.mpf(10) ** (-digits)

        def run(cc):
            lo, s1 = _tricomi_generic(a, c - eps, z, cc)
            hi, s2 = _tricomi_generic(a, c + eps, z, cc)
            v = (lo + hi).scale(mpmath.mpf(1) / 2)
            drift = abs(hi.value - lo.value)
            if drift > abs(v.value) * 10 ** (-(digits // 2)) and drift > mpmath.mpf(10) ** (-digits // 2):
                raise ConvergenceError("unresolvable degeneracy")
            return v.with_error(eps * eps * max(1, abs(v.value)) * 10, HEURISTIC), max(s1, s2)

        res = adaptive(run, c2, int(0.87 * abs(mpmath.re(z))) + 2)
        return realify(ValueWithError(res.value, res.abs_error, HEURISTIC), real)
    res = adaptive(lambda cc: _tricomi_generic(a, c, z, cc), ctx)
    return realify(res, real)


# ---------------------------------------------------------------------------
# digamma series closed form


def psi_series_closed(m: int, z, ctx: PrecisionContext) -> ValueWithError:
    """sum_j psi(2j+2m+1) z^(2j) / ((m+1)_j (m+1/2)_j) in closed form."""
    m = int(m)
    z = to_mp(z)
    if m < 0:
        raise DomainError("m must be nonnegative")
    if mpmath.re(z) <= 0:
        raise DomainError("needs Re(z) > 0")
    real = is_real_input(z)
    x = 2 * z

    def run(c):
        core = sinh_shi_minus_cosh_chi(x, c)
        with c.workdps():
            lc = mpmath.log(x) * mpmath.cosh(x)
            g = mpmath.factorial(2 * m)
            head = (core + lc).scale(g / mpmath.power(x, 2 * m))
            corr = mpmath.mpf(0)
            for j in range(m):
                n = 2 * m - 2 * j - 1
                corr += mpmath.digamma(n) / mpmath.factorial(n - 1) * mpmath.power(x, -2 * j)
            corr = corr * g / (x * x)
            v = head - corr
            scale = max(abs(head.value), abs(corr))
            return v.with_error(rounding_error(scale, c, 2 * m + 2)), scale

    return realify(adaptive(run, ctx), real)
