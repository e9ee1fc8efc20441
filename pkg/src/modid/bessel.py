"""Bessel functions, Koshliakov kernels, the Watson kernel and the
two-variable generalized modified Bessel function with its asymptotics."""
from __future__ import annotations

import mpmath

from .classic import (_hyper_series, _is_nonpos_int, _asymptotic_tail_threshold,
                      psi_series_closed, sinh_shi_minus_cosh_chi)
from .precision import (HEURISTIC, RIGOROUS, DomainError,
                        PrecisionContext, ValueWithError, adaptive, is_real_input,
                        realify, rounding_error, sum_series, to_mp)


def _is_int(x) -> bool:
    return mpmath.im(x) == 0 and mpmath.isint(mpmath.re(x))


def eps_limit(f, nu0, ctx: PrecisionContext) -> ValueWithError:
    """Symmetric two-point limit (f(nu0+e) + f(nu0-e))/2.

    The O(e) terms cancel; e is small enough that the O(e^2) residue is
    below the working precision, and the extra digits it costs are added.
    """
    digits = ctx.working_digits // 2 + 2
    eps = mpmath.mpf(10) ** (-digits)
    c2 = ctx.raised(digits + 2)
    with c2.workdps():
        hi = f(nu0 + eps, c2)
        lo = f(nu0 - eps, c2)
        v = (hi + lo).scale(mpmath.mpf(1) / 2)
        resid = eps * eps * max(1, abs(v.value)) * 100
    return ValueWithError(v.value, v.abs_error + resid, HEURISTIC)


# ---------------------------------------------------------------------------
# first kind


def _j_series(nu, z, ctx):
    s, big = _hyper_series([], [1 + nu], -z * z / 4, ctx, True)
    p = mpmath.power(z / 2, nu)
    return s.scale(p), big * abs(p)


def _i_series(nu, z, ctx):
    # I_nu(z) = e^{-i pi nu/2} J_nu(e^{i pi/2} z) on -pi < arg z <= pi/2
    if -mpmath.pi < mpmath.arg(z) <= mpmath.pi / 2:
        j, big = _j_series(nu, 1j * z, ctx)
        ph = mpmath.expjpi(-nu / 2)
    else:
        j, big = _j_series(nu, -1j * z, ctx)
        ph = mpmath.expjpi(nu / 2)
    return j.scale(ph), big * abs(ph)


def bessel_first(kind: str, nu, z, ctx: PrecisionContext) -> ValueWithError:
    nu, z = to_mp(nu), to_mp(z)
    kind = kind.upper()
    if z == 0:
        if nu == 0:
            return ValueWithError(mpmath.mpf(1), 0, RIGOROUS)
        if mpmath.re(nu) > 0 or _is_int(nu):
            return ValueWithError(mpmath.mpf(0), 0, RIGOROUS)
        raise DomainError("z = 0 with non-integer order")
    real = is_real_input(nu, z) and (mpmath.re(z) > 0 or _is_int(nu))
    if kind == "J":
        res = adaptive(lambda c: _j_series(nu, z, c), ctx, int(0.44 * abs(z)))
    elif kind == "I":
        res = adaptive(lambda c: _i_series(nu, z, c), ctx, int(0.44 * abs(mpmath.im(z))))
    else:
        raise DomainError(f"unknown kind {kind!r}")
    return realify(res, real)


# ---------------------------------------------------------------------------
# second kind


def _k_raw(nu, z, ctx):
    a, s1 = _i_series(-nu, z, ctx)
    b, s2 = _i_series(nu, z, ctx)
    pre = mpmath.pi / (2 * mpmath.sinpi(nu))
    return (a - b).scale(pre), abs(pre) * max(s1, s2)


def _y_raw(nu, z, ctx):
    a, s1 = _j_series(nu, z, ctx)
    b, s2 = _j_series(-nu, z, ctx)
    sn = mpmath.sinpi(nu)
    cn = mpmath.cospi(nu)
    v = (a.scale(cn) - b).scale(1 / sn)
    return v, max(s1, s2) / abs(sn)


def _second(raw, nu, z, ctx, extra):
    if _is_int(nu):
        return eps_limit(lambda n, c: adaptive(lambda cc: raw(n, z, cc), c, extra), nu, ctx)
    return adaptive(lambda c: raw(nu, z, c), ctx, extra)


def bessel_second(kind: str, nu, z, ctx: PrecisionContext) -> ValueWithError:
    nu, z = to_mp(nu), to_mp(z)
    kind = kind.upper()
    if z == 0:
        raise DomainError("z must be nonzero")
    real = is_real_input(nu, z) and mpmath.re(z) > 0
    if kind == "K":
        extra = int(0.87 * abs(mpmath.re(z))) + 1
        res = _second(_k_raw, nu, z, ctx, extra)
    elif kind == "Y":
        res = _second(_y_raw, nu, z, ctx, int(0.44 * abs(z)))
    else:
        raise DomainError(f"unknown kind {kind!r}")
    return realify(res, real)


def besselj(nu, z, ctx):
    return bessel_first("J", nu, z, ctx)


def besseli(nu, z, ctx):
    return bessel_first("I", nu, z, ctx)


def besselk(nu, z, ctx):
    return bessel_second("K", nu, z, ctx)


def bessely(nu, z, ctx):
    return bessel_second("Y", nu, z, ctx)


def ml_kernels(nu, x, ctx: PrecisionContext):
    """(M_nu(x), L_nu(x)) = (2/pi K - Y, -2/pi K - Y)."""
    nu, x = to_mp(nu), to_mp(x)
    if not (mpmath.im(x) == 0 and mpmath.re(x) > 0):
        raise DomainError("x must be positive")
    k = besselk(nu, x, ctx)
    y = bessely(nu, x, ctx)
    with ctx.workdps():
        k2 = k.scale(2 / mpmath.pi)
        return k2 - y, -k2 - y


# ---------------------------------------------------------------------------
# Watson kernel


def _watson_raw(nu, x, w, ctx):
    q = x / 4
    arg = x * x / 16
    h = w + mpmath.mpf(1) / 2
    f1, s1 = _hyper_series([], [1 - nu, h, h - nu], arg, ctx, True)
    f2, s2 = _hyper_series([], [1 + nu, h, h + nu], arg, ctx, True)
    p1 = mpmath.power(q, -nu)
    p2 = mpmath.power(q, nu)
    pre = mpmath.pi / mpmath.sinpi(nu) * mpmath.power(q, w)
    v = (f1.scale(p1) - f2.scale(p2)).scale(pre)
    return v, abs(pre) * max(s1 * abs(p1), s2 * abs(p2))


def _watson_zero_raw(x, w, ctx):
    """Order-zero kernel from the nu-derivative of the defining bracket."""
    q = x / 4
    arg = x * x / 16
    h = w + mpmath.mpf(1) / 2
    f, big = _hyper_series([], [1, h, h], arg, ctx, True)
    lq = mpmath.log(q)
    state = {"b": None, "ps": None, "big": mpmath.mpf(0)}
    skip = _is_nonpos_int(h)

    def term(k):
        if k == 0:
            state["b"] = mpmath.rgamma(h) ** 2
            state["p1"] = mpmath.digamma(h) if not skip else mpmath.mpf(0)
            state["p2"] = -mpmath.euler
        else:
            hk = h + k - 1
            state["b"] = state["b"] * arg / (k * k * hk * hk) if hk != 0 else mpmath.rgamma(h + k) ** 2 * arg ** k / mpmath.factorial(k) ** 2
            state["p1"] = state["p1"] + 1 / hk if hk != 0 else mpmath.digamma(h + k)
            state["p2"] = state["p2"] + mpmath.mpf(1) / k
        hk = h + k
        if _is_nonpos_int(hk):
            return mpmath.mpf(0)
        t = state["b"] * (state["p1"] + state["p2"])
        state["big"] = max(state["big"], abs(t))
        return t

    s = sum_series(term, None, ctx)
    pw = mpmath.power(q, w)
    v = (f.scale(-lq) + s).scale(2 * pw)
    return v, 2 * abs(pw) * max(big * abs(lq), state["big"])


def watson_kernel(nu, x, w, ctx: PrecisionContext) -> ValueWithError:
    nu, x, w = to_mp(nu), to_mp(x), to_mp(w)
    if not (mpmath.im(x) == 0 and mpmath.re(x) > 0):
        raise DomainError("x must be positive")
    if _is_int(nu) and nu != 0:
        raise DomainError("kernel pole")
    real = is_real_input(nu, w)
    extra = int(0.87 * mpmath.sqrt(abs(x))) + 1
    if nu == 0:
        res = adaptive(lambda c: _watson_zero_raw(x, w, c), ctx, extra)
    else:
        res = adaptive(lambda c: _watson_raw(nu, x, w, c), ctx, extra)
    return realify(res, real)


# ---------------------------------------------------------------------------
# two-variable generalized K


def _mu_k_raw(mu, nu, z, w, ctx):
    half = mpmath.mpf(1) / 2
    a1 = mu + w + half
    a2 = mu + nu + w + half
    arg = z * z / 4
    f1, s1 = _hyper_series([a1], [w + half - nu, 1 - nu], arg, ctx, True)
    f2, s2 = _hyper_series([a2], [w + half, 1 + nu], arg, ctx, True)
    g1 = mpmath.gamma(a1) * mpmath.power(z / 2, -nu)
    g2 = mpmath.gamma(a2) * mpmath.power(z / 2, nu)
    pre = mpmath.pi * mpmath.power(z, w) * mpmath.power(2, mu + nu - 1) / mpmath.sinpi(nu)
    v = (f1.scale(g1) - f2.scale(g2)).scale(pre)
    return v, abs(pre) * max(s1 * abs(g1), s2 * abs(g2))


def _check_mu_k(mu, nu, w):
    half = mpmath.mpf(1) / 2
    if _is_int(nu) and nu != 0:
        raise DomainError("parameter pole")
    if _is_nonpos_int(mu + w + half) or _is_nonpos_int(mu + nu + w + half):
        raise DomainError("parameter pole")


def _use_asymptotic(z, ctx) -> bool:
    return abs(z) > _asymptotic_tail_threshold(ctx) and abs(mpmath.arg(z)) < mpmath.pi / 3


def mu_k_nu(mu, nu, z, w, ctx: PrecisionContext) -> ValueWithError:
    """The generalized modified Bessel function of two variables.

    Small |z|: the two-1F2 representation with the exponential cancellation
    absorbed by raised precision. Large |z| in the right half plane: the
    optimally truncated algebraic expansion (exponentially small remainder).
    """
    mu, nu, z, w = to_mp(mu), to_mp(nu), to_mp(z), to_mp(w)
    if z == 0:
        raise DomainError("z must be nonzero")
    real = is_real_input(mu, nu, w, z) and mpmath.re(z) > 0
    if nu == 0:
        if _is_nonpos_int(mu + w + mpmath.mpf(1) / 2):
            raise DomainError("parameter pole")
        res = eps_limit(lambda n, c: _mu_k_eval(mu, n, z, w, c), nu, ctx)
    else:
        _check_mu_k(mu, nu, w)
        res = _mu_k_eval(mu, nu, z, w, ctx)
    return realify(res, real)


def _algebraic_part_vanishes(mu, nu, w) -> bool:
    """True when both coefficient families of the expansion are identically zero."""
    _, a1, a2, _ = _a_params(mu, nu, w)
    _, b1, b2, _ = _b_params(mu, nu, w)
    return ((_is_nonpos_int(a1) or _is_nonpos_int(a2))
            and (_is_nonpos_int(b1) or _is_nonpos_int(b2)))


def _mu_k_eval(mu, nu, z, w, ctx):
    if _use_asymptotic(z, ctx) and not _algebraic_part_vanishes(mu, nu, w):
        with ctx.workdps():
            return mu_k_asymptotic_full(mu, nu, w, z, ctx)
    extra = int(0.87 * abs(mpmath.re(z))) + 1
    return adaptive(lambda c: _mu_k_raw(mu, nu, z, w, c), ctx, extra)


# ---------------------------------------------------------------------------
# algebraic expansion at infinity

BRANCH_SIGN = 1  # (-1)^p is read as exp(BRANCH_SIGN * i pi p)


def _phase(p):
    if _is_int(p):
        return mpmath.mpf(-1) ** int(mpmath.re(p))
    return mpmath.expjpi(BRANCH_SIGN * p)


def _coeff_first(c_gamma, d1, d2, k):
    """Gamma(c+k) / (k! Gamma(d1-k) Gamma(d2-k))."""
    return (mpmath.gamma(c_gamma + k) / mpmath.factorial(k)
            * mpmath.rgamma(d1 - k) * mpmath.rgamma(d2 - k))


def _poly_terms(c_gamma, d1, d2, z, count):
    """Successive terms of sum_k Gamma(c+k)/(k! Gamma(d1-k)Gamma(d2-k)) (z/2)^(-2k)."""
    inv = (2 / z) ** 2
    out = []
    t = _coeff_first(c_gamma, d1, d2, 0)
    for k in range(count):
        if k > 0:
            if _is_nonpos_int(c_gamma + k - 1) or t == 0:
                t = _coeff_first(c_gamma, d1, d2, k) * inv ** k
            else:
                t = t * (c_gamma + k - 1) * (d1 - k) * (d2 - k) / k * inv
        out.append(t)
    return out


def _a_params(mu, nu, w):
    half = mpmath.mpf(1) / 2
    return mu + w + half, -nu - mu, half - nu - mu - w, _phase(-mu - w - half)


def _b_params(mu, nu, w):
    half = mpmath.mpf(1) / 2
    return mu + nu + w + half, -mu - nu, half - mu - w, _phase(-mu - nu - w - half)


def _poly(params, m, z, ctx):
    c, d1, d2, ph = params
    m = int(m)
    if m < 0:
        raise DomainError("m must be nonnegative")
    with ctx.workdps():
        terms = _poly_terms(c, d1, d2, z, m + 1)
        s = mpmath.fsum(terms) * ph
        big = max(abs(t) for t in terms)
        return ValueWithError(s, rounding_error(big, ctx, m + 2), RIGOROUS)


def a_poly(m, mu, nu, w, z, ctx: PrecisionContext) -> ValueWithError:
    mu, nu, w, z = to_mp(mu), to_mp(nu), to_mp(w), to_mp(z)
    return realify(_poly(_a_params(mu, nu, w), m, z, ctx), is_real_input(mu, nu, w, z) and _is_int(mu + w + 0.5))


def b_poly(m, mu, nu, w, z, ctx: PrecisionContext) -> ValueWithError:
    mu, nu, w, z = to_mp(mu), to_mp(nu), to_mp(w), to_mp(z)
    return realify(_poly(_b_params(mu, nu, w), m, z, ctx),
                   is_real_input(mu, nu, w, z) and _is_int(mu + nu + w + 0.5))


def _asym_prefactor(mu, nu, w, z):
    return (mpmath.pi * mpmath.power(2, 3 * mu + 2 * nu + 2 * w)
            / (mpmath.sinpi(nu) * mpmath.power(z, w + 2 * mu + nu + 1)))


def mu_k_asymptotic(m, mu, nu, w, z, ctx: PrecisionContext) -> ValueWithError:
    """Order-m truncation of the algebraic expansion of the generalized K."""
    mu, nu, w, z = to_mp(mu), to_mp(nu), to_mp(w), to_mp(z)
    with ctx.workdps():
        a = _poly(_a_params(mu, nu, w), m, z, ctx)
        b = _poly(_b_params(mu, nu, w), m, z, ctx)
        v = (a - b).scale(_asym_prefactor(mu, nu, w, z))
    return realify(v.heuristic(), is_real_input(mu, nu, w, z))


def asymptotic_coefficients(mu, nu, w, count: int):
    """c_k with  muK_nu(z,w) ~ prefactor(z) * sum_k c_k (z/2)^(-2k)."""
    ca = _a_params(mu, nu, w)
    cb = _b_params(mu, nu, w)
    one = mpmath.mpf(1)
    ta = _poly_terms(ca[0], ca[1], ca[2], 2 * one, count)
    tb = _poly_terms(cb[0], cb[1], cb[2], 2 * one, count)
    return [ca[3] * x - cb[3] * y for x, y in zip(ta, tb)]


def mu_k_asymptotic_full(mu, nu, w, z, ctx: PrecisionContext) -> ValueWithError:
    """Optimally truncated expansion; used where the remainder is exponentially small."""
    ca = _a_params(mu, nu, w)
    cb = _b_params(mu, nu, w)
    inv = (2 / z) ** 2
    pre = _asym_prefactor(mu, nu, w, z)
    ta = _coeff_first(ca[0], ca[1], ca[2], 0)
    tb = _coeff_first(cb[0], cb[1], cb[2], 0)
    s = ca[3] * ta - cb[3] * tb
    last = abs(s)
    k = 0
    while k < ctx.max_terms:
        k += 1
        ta = _coeff_first(ca[0], ca[1], ca[2], k) * inv ** k if (_is_nonpos_int(ca[0] + k - 1) or ta == 0) \
            else ta * (ca[0] + k - 1) * (ca[1] - k) * (ca[2] - k) / k * inv
        tb = _coeff_first(cb[0], cb[1], cb[2], k) * inv ** k if (_is_nonpos_int(cb[0] + k - 1) or tb == 0) \
            else tb * (cb[0] + k - 1) * (cb[1] - k) * (cb[2] - k) / k * inv
        t = ca[3] * ta - cb[3] * tb
        at = abs(t)
        if at == 0 and ta == 0 and tb == 0:
            # both coefficient families vanish identically from here on
            break
        if at > last and k > 2:
            break
        s += t
        last = at
        if at <= ctx.eps * abs(s):
            break
    v = s * pre
    err = (last + abs(mpmath.exp(-z))) * abs(pre) + rounding_error(v, ctx, k + 2)
    return ValueWithError(v, err, HEURISTIC)


# ---------------------------------------------------------------------------
# closed forms


def mu_k_half_closed(m: int, z, ctx: PrecisionContext) -> ValueWithError:
    """Elementary closed form of the generalized K at mu=1/2, nu=-(2m+1)/2, w=0."""
    m = int(m)
    z = to_mp(z)
    if m < 0:
        raise DomainError("m must be nonnegative")
    if z == 0:
        raise DomainError("z must be nonzero")
    with ctx.workdps():
        s = mpmath.mpf(0)
        for k in range(m + 1):
            s += mpmath.power(z, -2 * k) * mpmath.rgamma(2 * m - 2 * k)
        head = mpmath.power(z, -(2 * m + 1) / mpmath.mpf(2)) * mpmath.exp(-z)
        tail = mpmath.power(z, (2 * m - 3) / mpmath.mpf(2)) * s
        v = (-1) ** m * mpmath.sqrt(mpmath.pi / 2) * (head + tail)
        err = rounding_error(max(abs(head), abs(tail)), ctx, m + 4)
        return realify(ValueWithError(v, err, RIGOROUS), is_real_input(z) and mpmath.re(z) > 0)


def onef2_integer_reduction(m: int, x, ctx: PrecisionContext) -> ValueWithError:
    """1F2(1; m+1, m+1/2; x^2) / (2m)! as cosh(2x)/(2x)^(2m) minus a finite sum."""
    m = int(m)
    x = to_mp(x)
    if m < 0:
        raise DomainError("m must be nonnegative")
    if x == 0:
        raise DomainError("x must be nonzero")
    X = 2 * x

    def run(c):
        ch = mpmath.cosh(X) * mpmath.power(X, -2 * m)
        s = mpmath.mpf(0)
        for k in range(m):
            s += mpmath.power(X, -2 * k) / mpmath.factorial(2 * m - 2 * k - 2)
        s /= X * X
        v = ch - s
        scale = max(abs(ch), abs(s))
        return ValueWithError(v, rounding_error(scale, c, m + 4), RIGOROUS), scale

    return realify(adaptive(run, ctx), is_real_input(x))


def der_onef2_at_2m(m: int, n: int, y, ctx: PrecisionContext, negative: bool = False) -> ValueWithError:
    """a-derivative of the 1F2 bracket of the divisor transformation at a = +-2m.

    negative=False:  d/da [1F2(1; 1-a/2, (1-a)/2; X^2/4)/Gamma(1-a)] at a=2m.
    negative=True:   d/da 1F2(1; (1-a)/2, 1-a/2; X^2/4) at a=-2m.
    Here X = 4 pi^2 n / y.
    """
    m, n = int(m), int(n)
    y = to_mp(y)
    if m < 0 or n < 1:
        raise DomainError("need m >= 0 and n >= 1")
    if mpmath.re(y) <= 0:
        raise DomainError("needs Re(y) > 0")
    real = is_real_input(y)
    with ctx.workdps(10):
        X = 4 * mpmath.pi ** 2 * n / y
    if not negative:
        core = sinh_shi_minus_cosh_chi(X, ctx)
        with ctx.workdps():
            extra = mpmath.log(X) * mpmath.cosh(X)
            corr = sum(mpmath.factorial(2 * j - 1) * mpmath.power(X, -2 * j) for j in range(1, m + 1))
            v = (core + extra + corr).scale(mpmath.power(X, 2 * m))
            v = v.with_error(rounding_error(abs(extra) * abs(X) ** (2 * m), ctx, 4))
        return realify(v, real)
    zz = X / 2
    closed = psi_series_closed(m, zz, ctx)
    red = onef2_integer_reduction(m, zz, ctx)
    with ctx.workdps():
        v = closed - red.scale(mpmath.digamma(2 * m + 1) * mpmath.factorial(2 * m))
    return realify(v, real)
