"""Semi-infinite quadrature for the Bessel/Watson kernel integrals."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import mpmath
from mpmath import mp

from .bessel import _is_int, asymptotic_coefficients, ml_kernels, watson_kernel
from .classic import _asymptotic_tail_threshold
from .precision import (HEURISTIC, ConvergenceError, DomainError, PrecisionContext,
                        ValueWithError, to_mp)


@dataclass
class QuadSpec:
    """Description of an integral over (0, infinity).

    The panel [0, tail_cut] is split at `split_points`; beyond tail_cut the
    integral is either `tail_value(T)` (when known) or bounded by
    `tail_bound(T)`. Oscillatory integrands are summed in blocks of length
    `period` after the last split point and the block sums are accelerated
    with the Levin t-transform. With `origin_power` k > 1 the first panel is
    integrated in u = t^(1/k), which tames t^p singularities at the origin.
    """

    integrand: Callable
    split_points: Sequence = ()
    tail_cut: Optional[object] = None
    target_abs: Optional[object] = None
    oscillatory: bool = False
    period: Optional[object] = None
    tail_bound: Optional[Callable] = None
    tail_value: Optional[Callable] = None
    blocks: int = 24
    origin_power: int = 1

    def __post_init__(self):
        pts = [mpmath.mpf(p) for p in self.split_points]
        if any(b <= a for a, b in zip(pts, pts[1:])) or any(p <= 0 for p in pts):
            raise DomainError("split points must be positive and ascending")
        if self.tail_cut is not None and pts and mpmath.mpf(self.tail_cut) <= pts[-1]:
            raise DomainError("tail cut must lie beyond the last split point")
        if self.target_abs is not None and self.target_abs <= 0:
            raise DomainError("target_abs must be positive")
        if self.oscillatory and not self.period:
            raise DomainError("oscillatory integrals need a period hint")
        if int(self.origin_power) != self.origin_power or self.origin_power < 1:
            raise DomainError("origin_power must be a positive integer")


def _K(nu, t):
    # integrands are only needed to quadrature accuracy, so the library
    # routine is used here; the series implementation is cross-checked in tests
    return mpmath.besselk(nu, t)


def _J(nu, t):
    return mpmath.besselj(nu, t)


def quad_context(ctx: PrecisionContext) -> PrecisionContext:
    """Context used inside integrands: half the requested digits plus margin."""
    return PrecisionContext(max(12, ctx.decimal_digits // 2), 5, ctx.max_terms)


def _panel(f, pts):
    v, e = mpmath.quad(f, pts, error=True, maxdegree=8)
    return v, mpmath.mpf(e)


_GL_CACHE: dict = {}


def _gauss_nodes(n):
    key = (n, mp.prec)
    if key not in _GL_CACHE:
        X, W = mpmath.gauss_quadrature(n, "legendre")
        _GL_CACHE[key] = list(zip(X, W))
    return _GL_CACHE[key]


def _gauss(f, a, b, n):
    h, m = (b - a) / 2, (a + b) / 2
    return h * mpmath.fsum(wt * f(m + h * x) for x, wt in _gauss_nodes(n))


def _levin(blocks):
    L = mpmath.levin(method="levin", variant="t")
    v, _ = L.update(list(blocks))
    return v


def integrate_semi_infinite(spec: QuadSpec, ctx: PrecisionContext) -> ValueWithError:
    target = spec.target_abs if spec.target_abs is not None else mpmath.mpf(10) ** (-(ctx.decimal_digits // 2))
    target = mpmath.mpf(target)
    dps = max(15, ctx.decimal_digits // 2 + 5)
    with mp.workdps(dps):
        f = spec.integrand
        pts = [mpmath.mpf(0)] + [mpmath.mpf(p) for p in spec.split_points]
        if spec.oscillatory:
            total, err = _panel(f, pts) if len(pts) > 1 else (mpmath.mpf(0), mpmath.mpf(0))
            start = pts[-1]
            P = mpmath.mpf(spec.period)
            blocks = [_gauss(f, start + j * P, start + (j + 1) * P, 20) for j in range(spec.blocks)]
            # spot check of the block rule on the last (most oscillatory) block
            last = (start + (spec.blocks - 1) * P, start + spec.blocks * P)
            err += abs(blocks[-1] - _gauss(f, *last, 14)) * spec.blocks
            acc = _levin(blocks)
            err += abs(acc - _levin(blocks[:-2]))
            value = total + acc
        else:
            T = mpmath.mpf(spec.tail_cut) if spec.tail_cut is not None else None
            if T is None:
                raise DomainError("non-oscillatory integrals need a tail cut")
            pts = pts + [T]
            k = spec.origin_power
            if k > 1:
                value, err = _panel(lambda u: k * u ** (k - 1) * f(u ** k), [0, mpmath.root(pts[1], k)])
                v2, e2 = _panel(f, pts[1:]) if len(pts) > 2 else (0, 0)
                value, err = value + v2, err + e2
            else:
                value, err = _panel(f, pts)
            if spec.tail_value is not None:
                value += spec.tail_value(T)
            if spec.tail_bound is not None:
                err += abs(spec.tail_bound(T))
            else:
                err += abs(f(T)) * 2
        if not mpmath.isfinite(err) or err > target:
            raise ConvergenceError(f"tolerance not met: achieved {mpmath.nstr(err, 3)}")
        # integrands are evaluated to about quad_context digits
        err += abs(value) * mpmath.mpf(10) ** (-max(12, ctx.decimal_digits // 2))
    return ValueWithError(value, err, HEURISTIC)


def exp_tail_cut(target, power=0, scale=1, start=1):
    """Smallest T >= start with T^power e^(-T/scale) below target/10 (coarse)."""
    T = mpmath.mpf(start)
    lim = mpmath.mpf(target) / 10
    while mpmath.power(T, power) * mpmath.exp(-T / scale) > lim:
        T += 1
    return T


# ---------------------------------------------------------------------------
# Koshliakov-type transforms


@dataclass(frozen=True)
class KernelParams:
    mu: object
    nu: object
    w: object
    x: object

    def resolved(self):
        return tuple(to_mp(v) for v in (self.mu, self.nu, self.w, self.x))


def _splits(T):
    pts = []
    p = mpmath.mpf(1) / 4
    while p < T / 2:
        pts.append(p)
        p *= 2
    return pts


def koshliakov_transform(p: KernelParams, ctx: PrecisionContext) -> ValueWithError:
    """int_0^inf K_mu(t) t^(mu+nu+w) G_nu(xt, w) dt by quadrature."""
    mu, nu, w, x = p.resolved()
    if not (mpmath.im(x) == 0 and x > 0):
        raise DomainError("x must be positive")
    if mpmath.re(w) <= -0.5:
        raise DomainError("need Re(w) > -1/2")
    if _is_int(nu) and nu != 0:
        raise DomainError("nu must not be a nonzero integer")
    lim = -mpmath.re(w) - 0.5
    if mu == -nu:
        if not abs(mpmath.re(nu)) < mpmath.re(w) + 0.5:
            raise DomainError("need |Re(nu)| < Re(w) + 1/2")
    elif not (mpmath.re(mu) > lim and mpmath.re(nu) > lim and mpmath.re(mu + nu) > lim):
        raise DomainError("need Re(mu), Re(nu), Re(mu+nu) > -Re(w) - 1/2")
    q = quad_context(ctx)
    target = mpmath.mpf(10) ** (-(ctx.decimal_digits // 2))
    expo = mu + nu + w

    def f(t):
        return (_K(mu, t) * mpmath.power(t, expo)
                * watson_kernel(nu, x * t, w, q).value)

    T = exp_tail_cut(target, mpmath.re(expo) + 1, 1, 8)
    spec = QuadSpec(f, _splits(T), T, target)
    return integrate_semi_infinite(spec, ctx)


def _origin_power(s) -> int:
    """Smallest k making k u^(k-1) (u^k)^(-s) bounded at u = 0, capped at 8."""
    s = mpmath.re(s)
    if s <= 0:
        return 1
    if s >= 1:
        return 8
    return min(8, int(mpmath.ceil(1 / (1 - s) - mpmath.mpf(10) ** -10)))


def _kernel_origin_power(mu, nu, shift):
    # K_mu(t) ~ t^-|mu| and both kernels ~ t^-|nu| near 0
    return _origin_power(abs(mpmath.re(mu)) + abs(mpmath.re(nu)) - mpmath.re(mu + nu) - shift)


def koshliakov_first_kernel(mu, nu, x, ctx: PrecisionContext) -> ValueWithError:
    """int K_mu(t) t^(mu+nu) (cos(pi nu) M_2nu - sin(pi nu) J_2nu)(2 sqrt(xt)) dt."""
    mu, nu, x = to_mp(mu), to_mp(nu), to_mp(x)
    q = quad_context(ctx)
    target = mpmath.mpf(10) ** (-(ctx.decimal_digits // 2))
    with mp.workdps(q.working_digits):
        cn, sn = mpmath.cospi(nu), mpmath.sinpi(nu)

    def f(t):
        a = 2 * mpmath.sqrt(x * t)
        M, _ = ml_kernels(2 * nu, a, q)
        J = _J(2 * nu, a)
        return _K(mu, t) * mpmath.power(t, mu + nu) * (cn * M.value - sn * J)

    T = exp_tail_cut(target, mpmath.re(mu + nu) + 1, 1, 8)
    k = _kernel_origin_power(mu, nu, 0)
    return integrate_semi_infinite(QuadSpec(f, _splits(T), T, target, origin_power=k), ctx)


def koshliakov_second_kernel(mu, nu, x, ctx: PrecisionContext) -> ValueWithError:
    """int K_mu(t) t^(mu+nu+1) (sin(pi nu) J_2nu - cos(pi nu) L_2nu)(2 sqrt(xt)) dt."""
    mu, nu, x = to_mp(mu), to_mp(nu), to_mp(x)
    q = quad_context(ctx)
    target = mpmath.mpf(10) ** (-(ctx.decimal_digits // 2))
    with mp.workdps(q.working_digits):
        cn, sn = mpmath.cospi(nu), mpmath.sinpi(nu)

    def f(t):
        a = 2 * mpmath.sqrt(x * t)
        _, L = ml_kernels(2 * nu, a, q)
        J = _J(2 * nu, a)
        return _K(mu, t) * mpmath.power(t, mu + nu + 1) * (sn * J - cn * L.value)

    T = exp_tail_cut(target, mpmath.re(mu + nu) + 2, 1, 8)
    k = _kernel_origin_power(mu, nu, 1)
    return integrate_semi_infinite(QuadSpec(f, _splits(T), T, target, origin_power=k), ctx)


def hankel_k_transform(mu, w, x, ctx: PrecisionContext) -> ValueWithError:
    """int t^(mu+w+1/2) K_mu(t) J_(2w-1)(2 sqrt(xt)) dt."""
    mu, w, x = to_mp(mu), to_mp(w), to_mp(x)
    target = mpmath.mpf(10) ** (-(ctx.decimal_digits // 2))
    e = mu + w + mpmath.mpf(1) / 2

    def f(t):
        return (mpmath.power(t, e) * _K(mu, t)
                * _J(2 * w - 1, 2 * mpmath.sqrt(x * t)))

    T = exp_tail_cut(target, mpmath.re(e) + 1, 1, 8)
    return integrate_semi_infinite(QuadSpec(f, _splits(T), T, target), ctx)


def laguerre_hankel_transform(w, x, ctx: PrecisionContext) -> ValueWithError:
    """int e^(-t) t^(w-1/2) J_(2w-1)(2 sqrt(xt)) dt."""
    w, x = to_mp(w), to_mp(x)
    if not mpmath.re(w) > 0:
        raise DomainError("need Re(w) > 0")
    target = mpmath.mpf(10) ** (-(ctx.decimal_digits // 2))
    e = w - mpmath.mpf(1) / 2

    def f(t):
        return mpmath.exp(-t) * mpmath.power(t, e) * _J(2 * w - 1, 2 * mpmath.sqrt(x * t))

    T = exp_tail_cut(target, mpmath.re(e) + 1, 1, 8)
    return integrate_semi_infinite(QuadSpec(f, _splits(T), T, target), ctx)


def self_reciprocal_integral(z, w, x, ctx: PrecisionContext) -> ValueWithError:
    """2 pi int t^w K_(z/2)(2 pi t) G_(z/2)(4 pi^2 x t, w) dt."""
    z, w, x = to_mp(z), to_mp(w), to_mp(x)
    nu = z / 2
    if not abs(mpmath.re(nu)) < mpmath.re(w) + 0.5:
        raise DomainError("need |Re(z)| < 2 Re(w) + 1")
    q = quad_context(ctx)
    target = mpmath.mpf(10) ** (-(ctx.decimal_digits // 2))
    with mp.workdps(q.working_digits):
        tp = 2 * mpmath.pi
        c = 4 * mpmath.pi ** 2 * x

    def f(t):
        return (tp * mpmath.power(t, w) * _K(nu, tp * t)
                * watson_kernel(nu, c * t, w, q).value)

    T = exp_tail_cut(target, mpmath.re(w) + 1, 1 / (2 * mpmath.pi), 1) + 1
    spec = QuadSpec(f, [p for p in _splits(T) if p < T], T, target, origin_power=2)
    return integrate_semi_infinite(spec, ctx)


def mellin_watson_closed(s, nu, w, x, ctx: PrecisionContext) -> ValueWithError:
    s, nu, w, x = to_mp(s), to_mp(nu), to_mp(w), to_mp(x)
    with ctx.workdps():
        v = (mpmath.power(2, 2 * s - 1) * mpmath.power(x, -s)
             * mpmath.gamma((s - nu + w) / 2) * mpmath.gamma((s + nu + w) / 2)
             * mpmath.rgamma((1 - s - nu + w) / 2) * mpmath.rgamma((1 - s + nu + w) / 2))
        return ValueWithError(v, abs(v) * ctx.eps * 10)


def mellin_of_watson(s, nu, w, x, ctx: PrecisionContext, blocks: int = 24) -> ValueWithError:
    """int_0^inf t^(s-1) G_nu(xt, w) dt by block summation with acceleration.

    With t = u^2/x the kernel oscillates like cos(2u + phase) u^(-1/2), so
    blocks of length pi/2 in u alternate in sign.
    """
    s, nu, w, x = to_mp(s), to_mp(nu), to_mp(w), to_mp(x)
    lo = max(-mpmath.re(w) + mpmath.re(nu), -mpmath.re(w) - mpmath.re(nu))
    if not (lo < mpmath.re(s) < 0.75):
        raise DomainError("s outside the strip of convergence")
    if not (mpmath.im(x) == 0 and x > 0):
        raise DomainError("x must be positive")
    q = quad_context(ctx)
    # the Levin error estimate is pessimistic by about two orders
    target = mpmath.mpf(10) ** (3 - ctx.decimal_digits // 2)
    with mp.workdps(q.working_digits):
        pre = 2 * mpmath.power(x, -s)

    def f(u):
        return mpmath.power(u, 2 * s - 1) * watson_kernel(nu, u * u, w, q).value

    spec = QuadSpec(f, [mpmath.mpf(1), mpmath.mpf(2)], None, target, True,
                    mpmath.pi / 2, blocks=blocks)
    r = integrate_semi_infinite(spec, ctx)
    return r.scale(pre)


def tcos_cauchy_integral(w, ctx: PrecisionContext, blocks: int = 24) -> ValueWithError:
    """int_0^inf t cos t / (t^2 + w^2) dt by pi-blocks and Levin acceleration."""
    w = to_mp(w)
    if mpmath.re(w) <= 0:
        raise DomainError("needs Re(w) > 0")
    target = mpmath.mpf(10) ** (-(ctx.decimal_digits // 2))
    w2 = w * w

    def f(t):
        return t * mpmath.cos(t) / (t * t + w2)

    spec = QuadSpec(f, [mpmath.pi / 2], None, target, True, mpmath.pi, blocks=blocks)
    return integrate_semi_infinite(spec, ctx)


def modular_integral_side(z, w, a, ctx: PrecisionContext) -> ValueWithError:
    """a^(w+1/2) int x^w K_(z/2)(2 pi a x) f(x) dx with f(x) = x^w K_(z/2)(2 pi x)."""
    z, a = to_mp(z), to_mp(a)
    w = int(w)
    if w < 0:
        raise DomainError("w must be a nonnegative integer")
    if not abs(mpmath.re(z)) < 2 * w + 1:
        raise DomainError("need |Re(z)| < 2w + 1")
    if not (mpmath.im(a) == 0 and a > 0):
        raise DomainError("alpha must be positive")
    q = quad_context(ctx)
    target = mpmath.mpf(10) ** (-(ctx.decimal_digits // 2))
    nu = z / 2

    def f(x):
        tp = 2 * mpmath.pi * x
        return mpmath.power(x, 2 * w) * _K(nu, tp * a) * _K(nu, tp)

    rate = 1 / (2 * mpmath.pi * (1 + a))
    T = exp_tail_cut(target, 2 * w + 1, rate, rate * 4)
    spec = QuadSpec(f, [p for p in _splits(T) if p < T], T, target, origin_power=2)
    v = integrate_semi_infinite(spec, ctx)
    with mp.workdps(q.working_digits):
        return v.scale(mpmath.power(a, w + mpmath.mpf(1) / 2))


def modular_integral_pair(z, w, alpha, ctx: PrecisionContext):
    """Both sides of the alpha <-> 1/alpha relation."""
    alpha = to_mp(alpha)
    return modular_integral_side(z, w, alpha, ctx), modular_integral_side(z, w, 1 / alpha, ctx)


# ---------------------------------------------------------------------------
# integrals of the generalized K over (0, infinity)


def _hyp1f2_reg(a, b1, b2, z):
    """Regularized 1F2 by direct summation; poles of the lower parameters give zero terms."""
    k = 0
    for b in (b1, b2):
        if _is_int(b) and mpmath.re(b) <= 0:
            k = max(k, int(1 - mpmath.re(b)))
    t = mpmath.rf(a, k) * mpmath.rgamma(b1 + k) * mpmath.rgamma(b2 + k) * mpmath.power(z, k) / mpmath.factorial(k)
    s = t
    tol = mpmath.eps
    while True:
        t = t * (a + k) * z / ((b1 + k) * (b2 + k) * (k + 1))
        s += t
        k += 1
        if abs(t) <= tol * abs(s) and k > abs(z) ** (1 / 3):
            return s


def _mu_k_fast(mu, nu, z, w):
    """Two-1F2 form of the generalized K at the current precision plus the
    digits lost to the exponential cancellation."""
    half = mpmath.mpf(1) / 2
    with mp.workdps(mp.dps + int(0.87 * abs(mpmath.re(z))) + 5):
        a1 = mu + w + half
        a2 = mu + nu + w + half
        arg = z * z / 4
        f1 = _hyp1f2_reg(a1, w + half - nu, 1 - nu, arg)
        f2 = _hyp1f2_reg(a2, w + half, 1 + nu, arg)
        g1 = mpmath.gamma(a1) * mpmath.power(z / 2, -nu)
        g2 = mpmath.gamma(a2) * mpmath.power(z / 2, nu)
        pre = mpmath.pi * mpmath.power(z, w) * mpmath.power(2, mu + nu - 1) / mpmath.sinpi(nu)
        v = pre * (f1 * g1 - f2 * g2)
    return +v


def _power_tail(mu, nu, w, c, power, xc, count=60):
    """int_xc^inf x^power muK_nu(c x, w) dx from the algebraic expansion.

    Valid when c xc lies where the expansion remainder is exponentially small.
    """
    e0 = w + 2 * mu + nu + 1
    pre = mpmath.pi * mpmath.power(2, 3 * mu + 2 * nu + 2 * w) / mpmath.sinpi(nu) * mpmath.power(c, -e0)
    s = mpmath.mpf(0)
    last = None
    for k, ck in enumerate(asymptotic_coefficients(mu, nu, w, count)):
        if ck == 0:
            continue
        q = power - e0 - 2 * k + 1  # integral of x^(q-1)
        t = ck * mpmath.power(c / 2, -2 * k) * mpmath.power(xc, q) / (-q)
        if last is not None and abs(t) > last:
            break
        s += t
        last = abs(t)
        if last < mpmath.eps * abs(s):
            break
    return pre * s


def _gen_k_integral(mu, nu, w, c, power, ctx: PrecisionContext) -> ValueWithError:
    """int_0^inf x^power muK_nu(c x, w) dx with an analytic tail."""
    q = quad_context(ctx)
    target = mpmath.mpf(10) ** (-(ctx.decimal_digits // 2))
    xc = _asymptotic_tail_threshold(q) / mpmath.re(c)

    def f(x):
        return mpmath.power(x, power) * _mu_k_fast(mu, nu, c * x, w)

    pts = [p for p in _splits(xc) if p < xc]
    spec = QuadSpec(f, pts, xc, target, origin_power=2,
                    tail_value=lambda T: _power_tail(mu, nu, w, c, power, T),
                    tail_bound=lambda T: mpmath.mpf(10) ** (-q.working_digits) * (1 + abs(f(T)) * T))
    return integrate_semi_infinite(spec, ctx)


def _bracket_scale(a, y):
    """Q with {1F2 / cosh bracket}(x) = Q muK_(a/2)(4 pi^2 x / y, 0), mu = 1/2."""
    return (y * mpmath.sinpi(a / 2) / (2 * mpmath.pi) * 2 * mpmath.sqrt(2 * mpmath.pi)
            * mpmath.power(y, -1 - a / 2))


def bracket_integral(a, y, sign: int, ctx: PrecisionContext) -> ValueWithError:
    """int_0^inf x^(sign a/2) {x^(-a/2) (2pi)^-a 1F2(1; (1-a)/2, 1-a/2; 4pi^4x^2/y^2)/Gamma(1-a)
    - (4 pi^2 x / y^2)^(a/2) cosh(4 pi^2 x / y)} dx."""
    a, y = to_mp(a), to_mp(y)
    if not (mpmath.im(y) == 0 and y > 0):
        raise DomainError("y must be positive")
    if sign > 0 and not mpmath.re(a) > -1:
        raise DomainError("need Re(a) > -1")
    if sign < 0 and not -1 < mpmath.re(a) < 1:
        raise DomainError("need -1 < Re(a) < 1")
    if _is_int(a / 2):
        raise DomainError("a must not be an even integer")
    q = quad_context(ctx)
    with mp.workdps(q.working_digits):
        Q = _bracket_scale(a, y)
        c = 4 * mpmath.pi ** 2 / y
    half = mpmath.mpf(1) / 2
    r = _gen_k_integral(half, a / 2, 0, c, sign * a / 2, ctx)
    with mp.workdps(q.working_digits):
        return r.scale(Q)


def mu_k_half_integral(mu, k, ctx: PrecisionContext) -> ValueWithError:
    """int_0^inf x^(k/4 - 1/2) muK_(1/2)(pi^2 x, k/4) dx."""
    mu, k = to_mp(mu), to_mp(k)
    if not (mpmath.re(mu) > -0.5 or mu == -0.5):
        raise DomainError("need Re(mu) > -1/2 or mu = -1/2")
    if not mpmath.re(k) > 0:
        raise DomainError("need Re(k) > 0")
    return _gen_k_integral(mu, mpmath.mpf(1) / 2, k / 4, mpmath.pi ** 2, k / 4 - mpmath.mpf(1) / 2, ctx)
