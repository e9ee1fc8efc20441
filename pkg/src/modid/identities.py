"""Catalog of transformation identities with independent two-sided evaluation."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import mpmath

from . import quadrature as quad
from . import series
from .bessel import _is_int, besselk, mu_k_nu
from .classic import bernoulli, euler_gamma, pfq, zeta, zeta_prime
from .precision import (DomainError, PrecisionContext, ValueWithError, is_real_input, lost_digits,
                        realify, to_mp)

SERIES = "series"
QUADRATURE = "quadrature"
QUAD_TOL = mpmath.mpf(10) ** -10


class UnknownIdentity(KeyError):
    pass


class ConstraintError(DomainError):
    """Parameters violate an identity's hypotheses."""


@dataclass(frozen=True)
class ParamSpec:
    name: str
    kind: str  # "int", "real" or "complex"
    constraint: str = ""


@dataclass(frozen=True)
class Side:
    value: ValueWithError
    terms: int = 0
    scale: object = 0  # largest magnitude among the combined parts


@dataclass(frozen=True)
class IdentitySpec:
    id: str
    title: str
    params: tuple
    lhs: Callable
    rhs: Callable
    tier: str = SERIES
    check: Optional[Callable] = None
    grid: tuple = ()
    derived: Optional[Callable] = None
    lambert: Optional[Callable] = None  # the Lambert series part of the lhs

    @property
    def param_names(self):
        return tuple(p.name for p in self.params)


@dataclass
class IdentityReport:
    id: str
    params: dict
    lhs: ValueWithError
    rhs: ValueWithError
    abs_diff: object
    rel_diff: object
    verdict: str
    lhs_terms: int
    rhs_terms: int
    seconds: float
    digits: int = 30
    notes: list = field(default_factory=list)
    lhs_scale: object = 0
    rhs_scale: object = 0

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def record(self) -> dict:
        d = self.digits
        return {
            "id": self.id,
            "params": {k: format_number(v, d) for k, v in self.params.items()},
            "lhs": _vwe_record(self.lhs, d),
            "rhs": _vwe_record(self.rhs, d),
            "abs_diff": mpmath.nstr(self.abs_diff, 5),
            "rel_diff": mpmath.nstr(self.rel_diff, 5),
            "verdict": self.verdict,
            "lhs_terms": int(self.lhs_terms),
            "rhs_terms": int(self.rhs_terms),
            "seconds": round(self.seconds, 3),
        }


def format_number(v, digits: int = 15) -> str:
    if isinstance(v, int):
        return str(v)
    v = mpmath.mpmathify(v)
    if isinstance(v, mpmath.mpc):
        re, im = mpmath.nstr(v.real, digits), mpmath.nstr(abs(v.imag), digits)
        sign = "-" if v.imag < 0 else "+"
        return f"{re}{sign}{im}i"
    return mpmath.nstr(v, digits)


def _vwe_record(v: ValueWithError, digits: int) -> dict:
    return {"value": format_number(v.value, digits),
            "abs_error": mpmath.nstr(v.abs_error, 3), "rigor": v.rigor}


# ---------------------------------------------------------------------------
# helpers


def _side(parts, terms=0) -> Side:
    vals = [ValueWithError.lift(p) for p in parts]
    total = vals[0]
    for v in vals[1:]:
        total = total + v
    scale = max(abs(v.value) for v in vals)
    return Side(total, terms, scale)


def _exact(x) -> ValueWithError:
    """A closed-form value, correct up to rounding at the current precision."""
    x = mpmath.mpmathify(x)
    return ValueWithError(x, abs(x) * mpmath.mpf(10) ** (1 - mpmath.mp.dps))


def _Z(s, ctx):
    return zeta(s, ctx)


def _B(n, ctx):
    return bernoulli(n, ctx).value


def _half():
    return mpmath.mpf(1) / 2


def _re_pos(name):
    def chk(p):
        if not mpmath.re(p[name]) > 0:
            return f"need Re({name}) > 0"
    return chk


def _positive(name):
    def chk(p):
        v = p[name]
        if not (mpmath.im(v) == 0 and mpmath.re(v) > 0):
            return f"{name} must be a positive real number"
    return chk


def _int_at_least(name, lo):
    def chk(p):
        if p[name] < lo:
            return f"{name} must be an integer >= {lo}"
    return chk


def _all(*checks):
    def chk(p):
        for c in checks:
            msg = c(p)
            if msg:
                return msg
    return chk


def _beta(p):
    return {"beta": mpmath.pi ** 2 / p["alpha"]}


Y = ParamSpec("y", "complex", "Re(y) > 0")
Y_POS = ParamSpec("y", "real", "y > 0")
ALPHA = ParamSpec("alpha", "complex", "Re(alpha) > 0; beta = pi^2/alpha")
Y_GRID = ("1/2", "1", "2", "1+1/3i")
Y_REAL = ("1/2", "1", "2")
ALPHAS = ("pi/2", "pi", "2")


def _grid(**axes):
    """Cartesian product of named value lists in the given order."""
    out = [{}]
    for name, values in axes.items():
        out = [dict(d, **{name: v}) for d in out for v in values]
    return tuple(out)


# ---------------------------------------------------------------------------
# divisor Lambert series against the generalized K


def _sigma_rest(p, ctx):
    """Residual terms accompanying sum sigma_a(n) e^(-ny) in the generic identity."""
    a, y = p["a"], p["y"]
    with ctx.workdps():
        za = _Z(-a, ctx).scale((mpmath.power(2 * mpmath.pi / y, 1 + a) / mpmath.sinpi(a / 2) + 1) / 2)
        zb = _Z(1 - a, ctx).scale(-1 / y)
    return [za, zb]


def _lambert_sigma(p, ctx):
    return series.lambert_sigma(p["a"], p["y"], ctx)


def _lambert_lhs(rest):
    def lhs(p, ctx):
        L, n = series.lambert_sigma(p["a"] if "a" in p else 0, p["y"], ctx)
        return _side([L] + rest(p, ctx), n)
    return lhs


def _sigma_check(p):
    a = p["a"]
    if not mpmath.re(p["y"]) > 0:
        return "need Re(y) > 0"
    if _is_int(a / 2):
        return "a must not be an even integer"
    if _is_int(a) and mpmath.re(a) < 0:
        return "a must not be a negative odd integer"


def _sigma_main_check(p):
    if not mpmath.re(p["a"]) > -1:
        return "need Re(a) > -1"
    return _sigma_check(p)


def _sigma_master_check(p):
    if p["m"] < 0:
        return "m must be a nonnegative integer"
    if not mpmath.re(p["a"]) > -2 * p["m"] - 3:
        return "need Re(a) > -2m-3"
    return _sigma_check(p)


def _sigma_k_rhs(m):
    def rhs(p, ctx):
        a, y = p["a"], p["y"]
        mm = p["m"] if m else None
        S, n = series.sigma_k_series(a, y, mm, ctx)
        with ctx.workdps():
            main = S.scale(2 * mpmath.sqrt(2 * mpmath.pi) * mpmath.power(y, -1 - a / 2))
            parts = [main]
            if mm is not None:
                c = -y * mpmath.power(2 * mpmath.pi, -a - 3) / mpmath.sinpi(a / 2)
                X = 4 * mpmath.pi ** 2 / y
                for k in range(mm + 1):
                    zz = _Z(a + 2 * k + 2, ctx).value * _Z(2 * k + 2, ctx).value
                    parts.append(_exact(c * zz * mpmath.rgamma(-a - 1 - 2 * k) * mpmath.power(X, -2 * k)))
        return _side(parts, n)
    return rhs


def _sigma_2m_rest(p, ctx):
    m, y = p["m"], p["y"]
    with ctx.workdps():
        return [_Z(2 * m + 1, ctx).scale(-mpmath.factorial(2 * m) / mpmath.power(y, 2 * m + 1)),
                _exact(_B(2 * m, ctx) / (2 * m * y))]


def _sigma_2m_lambert(p, ctx):
    return series.lambert_sigma(2 * p["m"], p["y"], ctx)


def _sigma_2m_lhs(p, ctx):
    L, n = _sigma_2m_lambert(p, ctx)
    return _side([L] + _sigma_2m_rest(p, ctx), n)


def _sigma_2m_rhs(p, ctx):
    m, y = p["m"], p["y"]
    S, n = series.shichi_series(2 * m, y, m, ctx)
    with ctx.workdps():
        f = (-1) ** m * 2 / mpmath.pi * mpmath.power(2 * mpmath.pi / y, 2 * m + 1)
        return _side([S.scale(f)], n)


def _neg2m_rest(p, ctx):
    m, y = p["m"], p["y"]
    with ctx.workdps():
        pi = mpmath.pi
        c = mpmath.power(y / (2 * pi), 2 * m - 1)
        sg = (-1) ** m
        g = euler_gamma(ctx).value
        z2m = _Z(2 * m, ctx)
        parts = [z2m.scale(_half() + sg * g / pi * c + sg / pi * c * mpmath.log(2 * pi / y))]
        f = 2 * sg / pi * c
        parts.append(zeta_prime(2 * m, ctx).scale(-f / 2))
        for k in range(m):
            zz = _Z(2 * k + 3, ctx).value * _Z(2 * m - 2 * k - 2, ctx).value
            parts.append(_exact(f * 2 * pi ** 2 / y ** 2 * (-1) ** (k + 1) * zz
                                * mpmath.power(2 * pi / y, 2 * k)))
        return parts


def _neg2m_lambert(p, ctx):
    return series.lambert_sigma(-2 * p["m"], p["y"], ctx)


def _neg2m_lhs(p, ctx):
    L, n = _neg2m_lambert(p, ctx)
    return _side([L] + _neg2m_rest(p, ctx), n)


def _neg2m_rhs(p, ctx):
    m, y = p["m"], p["y"]
    S, n = series.shichi_series(-2 * m, y, 0, ctx)
    with ctx.workdps():
        f = 2 * (-1) ** m / mpmath.pi * mpmath.power(y / (2 * mpmath.pi), 2 * m - 1)
        return _side([S.scale(f)], n)


def _neg2m_psi_lhs(p, ctx):
    m, y = p["m"], p["y"]
    L, n = series.lambert_power(-2 * m, y, ctx)
    with ctx.workdps():
        parts = [L, _Z(2 * m, ctx).scale(_half())]
        for k in range(m):
            c = _B(2 * k, ctx) / mpmath.factorial(2 * k) * mpmath.power(y, 2 * k) / y
            parts.append(_Z(2 * m - 2 * k + 1, ctx).scale(-c))
    return _side(parts, n)


def _neg2m_psi_rhs(p, ctx):
    m, y = p["m"], p["y"]
    S, n = series.psi_pair_series(2 * m, 2 * mpmath.pi / y, ctx)
    with ctx.workdps():
        f = (-1) ** (m + 1) / y * mpmath.power(y / (2 * mpmath.pi), 2 * m)
        g = euler_gamma(ctx).value
        return _side([_Z(2 * m, ctx).scale(2 * g * f), S.scale(f)], n)


# ---------------------------------------------------------------------------
# alpha <-> beta forms


def _ram_part(m, t, ctx):
    L, n = series.lambert_power(-2 * m - 1, 2 * t, ctx)
    with ctx.workdps():
        return [L, _Z(2 * m + 1, ctx).scale(_half())], n


def _ram_lhs(p, ctx):
    m, al = p["m"], p["alpha"]
    v, n = _ram_part(m, al, ctx)
    with ctx.workdps():
        f = mpmath.power(al, -m)
        return _side([x.scale(f) for x in v], n)


def _ram_rhs(p, ctx):
    m, al = p["m"], p["alpha"]
    be = mpmath.pi ** 2 / al
    v, n = _ram_part(m, be, ctx)
    with ctx.workdps():
        f = mpmath.power(-be, -m)
        parts = [x.scale(f) for x in v]
        for k in range(m + 2):
            c = (_B(2 * k, ctx) * _B(2 * m + 2 - 2 * k, ctx)
                 / (mpmath.factorial(2 * k) * mpmath.factorial(2 * m + 2 - 2 * k)))
            parts.append(_exact(-mpmath.power(2, 2 * m) * (-1) ** k * c
                                * mpmath.power(al, m + 1 - k) * mpmath.power(be, k)))
    return _side(parts, n)


def _ram_check(p):
    if p["m"] == 0:
        return "m must be a nonzero integer"
    return _re_pos("alpha")(p)


def _eis_lhs(p, ctx):
    m, al = p["m"], p["alpha"]
    be = mpmath.pi ** 2 / al
    A, n1 = series.lambert_sigma(2 * m - 1, 2 * al, ctx)
    B, n2 = series.lambert_sigma(2 * m - 1, 2 * be, ctx)
    with ctx.workdps():
        return _side([A.scale(mpmath.power(al, m)), B.scale(-mpmath.power(-be, m))], n1 + n2)


def _eis_rhs(p, ctx):
    m, al = p["m"], p["alpha"]
    with ctx.workdps():
        be = mpmath.pi ** 2 / al
        c = _B(2 * m, ctx) / (4 * m)
        return _side([_exact(mpmath.power(al, m) * c), _exact(-mpmath.power(-be, m) * c)])


def _eta_lhs(p, ctx):
    al = p["alpha"]
    be = mpmath.pi ** 2 / al
    A, n1 = series.lambert_sigma(-1, 2 * al, ctx)
    B, n2 = series.lambert_sigma(-1, 2 * be, ctx)
    return _side([A, -B], n1 + n2)


def _eta_rhs(p, ctx):
    al = p["alpha"]
    with ctx.workdps():
        be = mpmath.pi ** 2 / al
        return _side([_exact(be / 12), _exact(-al / 12), _exact(mpmath.log(al) / 4),
                      _exact(-mpmath.log(be) / 4)])


def _e2_lhs(p, ctx):
    al = p["alpha"]
    be = mpmath.pi ** 2 / al
    A, n1 = series.lambert_power(1, 2 * al, ctx)
    B, n2 = series.lambert_power(1, 2 * be, ctx)
    with ctx.workdps():
        return _side([A.scale(al), B.scale(be)], n1 + n2)


def _e2_rhs(p, ctx):
    al = p["alpha"]
    with ctx.workdps():
        be = mpmath.pi ** 2 / al
        return _side([_exact(al / 24), _exact(be / 24), _exact(-_half() / 2)])


# ---------------------------------------------------------------------------
# divisor function and Wigert-type series


def _wigert_rest(p, ctx):
    y = p["y"]
    with ctx.workdps():
        g = euler_gamma(ctx).value
        return [_exact(-_half() / 2), _exact(-(g - mpmath.log(y)) / y)]


def _wigert_lambert(p, ctx):
    return series.lambert_sigma(0, p["y"], ctx)


def _wigert_dn_lhs(p, ctx):
    L, n = _wigert_lambert(p, ctx)
    return _side([L] + _wigert_rest(p, ctx), n)


def _wigert_dn_rhs(p, ctx):
    y = p["y"]
    S, n = series.shichi_series(0, y, 0, ctx)
    with ctx.workdps():
        return _side([S.scale(4 / y)], n)


def _wigert_psi_lhs(p, ctx):
    L, n = series.lambert_power(0, p["y"], ctx)
    return _side([L] + _wigert_rest(p, ctx), n)


def _wigert_psi_rhs(p, ctx):
    y = p["y"]
    S, n = series.psi_pair_series(0, 2 * mpmath.pi / y, ctx, with_log=True)
    with ctx.workdps():
        return _side([S.scale(2 / y)], n)


def _bellman_rhs(p, ctx):
    y = p["y"]
    # the series returns sum d(n) (U(1;1;X) + U(1;1;-X)) / 2
    S, n = series.shichi_series(0, y, 0, ctx, tricomi=True)
    with ctx.workdps():
        return _side([S.scale(4 / y)], n)


def _companion_lhs(p, ctx):
    m, al = p["m"], p["alpha"]
    L, n = series.lambert_power(-2 * m, 2 * al, ctx)
    with ctx.workdps():
        e = m - _half()
        parts = [(L + _Z(2 * m, ctx).scale(_half())).scale(mpmath.power(al, -e))]
        for k in range(m):
            c = mpmath.power(2, 2 * k - 1) * _B(2 * k, ctx) / mpmath.factorial(2 * k)
            parts.append(_Z(2 * m - 2 * k + 1, ctx).scale(-c * mpmath.power(al, 2 * k - m - _half())))
    return _side(parts, n)


def _companion_rhs(p, ctx):
    m, al = p["m"], p["alpha"]
    be = mpmath.pi ** 2 / al
    S, n = series.psi_pair_series(2 * m, be / mpmath.pi, ctx)
    with ctx.workdps():
        f = (-1) ** (m + 1) * mpmath.power(be, -(m - _half()))
        g = euler_gamma(ctx).value
        return _side([_Z(2 * m, ctx).scale(f * g / mpmath.pi), S.scale(f / (2 * mpmath.pi))], n)


def _zeta3_lhs(p, ctx):
    y = p["y"]
    L, n = series.lambert_power(-2, y, ctx)
    with ctx.workdps():
        g = euler_gamma(ctx).value
        return _side([L, _exact(mpmath.pi ** 2 / 12), _exact(-g * y / 12), _Z(3, ctx).scale(-1 / y)], n)


def _zeta3_rhs(p, ctx):
    y = p["y"]
    S, n = series.psi_pair_series(2, 2 * mpmath.pi / y, ctx)
    with ctx.workdps():
        return _side([S.scale(y / (4 * mpmath.pi ** 2))], n)


def _zeta5_lhs(p, ctx):
    y = p["y"]
    L, n = series.lambert_power(-4, y, ctx)
    with ctx.workdps():
        pi = mpmath.pi
        g = euler_gamma(ctx).value
        return _side([L, _exact(pi ** 4 / 180), _exact(g * y ** 3 / 720),
                      _Z(5, ctx).scale(-1 / y), _Z(3, ctx).scale(-y / 12)], n)


def _zeta5_rhs(p, ctx):
    y = p["y"]
    S, n = series.psi_pair_series(4, 2 * mpmath.pi / y, ctx)
    with ctx.workdps():
        return _side([S.scale(-y ** 3 / (16 * mpmath.pi ** 4))], n)


# ---------------------------------------------------------------------------
# sums of squares


def _rk_check(p):
    if p["k"] < 2:
        return "k must be an integer >= 2"
    mu = p["mu"]
    if not (mpmath.re(mu) > -0.5 or mu == -_half()):
        return "need Re(mu) > -1/2 or mu = -1/2"
    return _re_pos("z")(p)


def _rk_lhs(p, ctx):
    k, mu, z = p["k"], p["mu"], p["z"]
    L, n = series.rk_bessel_lhs(k, mu, z, ctx)
    with ctx.workdps():
        pi = mpmath.pi
        c = (mpmath.power(pi, mpmath.mpf(k + 1) / 2) * mpmath.power(2, mu)
             * mpmath.gamma(mu + mpmath.mpf(k) / 4 + _half())
             / (mpmath.power(z, mu + mpmath.mpf(k) / 2 + 1) * mpmath.gamma(mpmath.mpf(k) / 4)))
        return _side([L, _exact(-c)], n)


def _rk_rhs(p, ctx):
    k, mu, z = p["k"], p["mu"], p["z"]
    S, n = series.rk_k_series(k, mu, z, ctx)
    with ctx.workdps():
        pi = mpmath.pi
        parts = [S.scale(pi / mpmath.power(z, mu + mpmath.mpf(k) / 4 + mpmath.mpf(3) / 2))]
        if mu == -_half():
            R = mpmath.power(pi, mpmath.mpf(1 - k) / 2) * mpmath.gamma(mpmath.mpf(k) / 2) / mpmath.sqrt(2 * z)
            parts.append(_exact(-mpmath.power(pi, mpmath.mpf(k) / 2) * mpmath.rgamma(mpmath.mpf(k) / 2) * R))
        return _side(parts, n)


def _theta_lhs(p, ctx):
    v, n = series.theta_rk(p["k"], p["z"], ctx)
    return _side([v], n)


def _theta_rhs(p, ctx):
    k, z = p["k"], p["z"]
    with ctx.workdps():
        w = mpmath.pi ** 2 / z
    v, n = series.theta_rk(k, w, ctx)
    with ctx.workdps():
        return _side([v.scale(mpmath.power(mpmath.pi / z, mpmath.mpf(k) / 2))], n)


# ---------------------------------------------------------------------------
# hyperbolic cotangent forms


def _coth_lhs(p, ctx):
    m = p["m"]
    L, n = series.lambert_power(-2 * m, 2 * mpmath.pi, ctx)
    return _side([_Z(2 * m, ctx), L.scale(2)], n)


def _coth_rhs(p, ctx):
    m = p["m"]
    S, n = series.psi_pair_series(2 * m, 1, ctx)
    with ctx.workdps():
        pi = mpmath.pi
        g = euler_gamma(ctx).value
        parts = [_Z(2 * m, ctx).scale((-1) ** (m + 1) * 2 * g / pi)]
        for k in range(m):
            c = 2 / pi * mpmath.power(2, 2 * k - 1) * _B(2 * k, ctx) * pi ** (2 * k) / mpmath.factorial(2 * k)
            parts.append(_Z(2 * m - 2 * k + 1, ctx).scale(c))
        parts.append(S.scale((-1) ** (m + 1) / pi))
    return _side(parts, n)


def _lerch_check(p):
    m = p["m"]
    if m < 1 or m % 2 == 0:
        return "m must be a positive odd integer"


def _lerch_lhs(p, ctx):
    # sum coth(pi n) n^-(2m+1) = zeta(2m+1) + 2 sum n^-(2m+1) / (e^(2 pi n) - 1)
    m = p["m"]
    L, n = series.lambert_power(-2 * m - 1, 2 * mpmath.pi, ctx)
    return _side([_Z(2 * m + 1, ctx), L.scale(2)], n)


def _lerch_rhs(p, ctx):
    m = p["m"]
    with ctx.workdps():
        pi = mpmath.pi
        s = mpmath.fsum((-1) ** (k + 1) * _B(2 * k, ctx) * _B(2 * m + 2 - 2 * k, ctx)
                        / (mpmath.factorial(2 * k) * mpmath.factorial(2 * m + 2 - 2 * k))
                        for k in range(m + 2))
        return _side([_exact(mpmath.power(2, 2 * m) * mpmath.power(pi, 2 * m + 1) * s)])


# ---------------------------------------------------------------------------
# integral identities


def _q(fn):
    def ev(p, ctx):
        return _side([fn(p, ctx)])
    return ev


def _selfrec_check(p):
    z, w = p["z"], p["w"]
    if _positive("x")(p):
        return "x must be a positive real number"
    if not mpmath.re(w) > max(-0.5, (abs(mpmath.re(z)) - 1) / 2):
        return "need Re(w) > max(-1/2, (|Re(z)|-1)/2)"


def _selfrec_rhs(p, ctx):
    z, w, x = p["z"], p["w"], p["x"]
    K = besselk(z / 2, 2 * mpmath.pi * x, ctx)
    with ctx.workdps():
        return _side([K.scale(mpmath.power(x, w))])


def _kosh_check_general(shift):
    def chk(p):
        mu, nu = p["mu"], p["nu"]
        w = p.get("w", shift)
        if _positive("x")(p):
            return "x must be a positive real number"
        if not mpmath.re(w) > -0.5:
            return "need Re(w) > -1/2"
        if _is_int(nu) and nu != 0:
            return "nu must not be a nonzero integer"
        lim = -mpmath.re(w) - 0.5
        if mu == -nu:
            if not abs(mpmath.re(nu)) < mpmath.re(w) + 0.5:
                return "need |Re(nu)| < Re(w) + 1/2"
        elif not (mpmath.re(mu) > lim and mpmath.re(nu) > lim and mpmath.re(mu + nu) > lim):
            return "need Re(mu), Re(nu), Re(mu+nu) > -Re(w) - 1/2"
    return chk


def _kosh_lhs(p, ctx):
    return _side([quad.koshliakov_transform(quad.KernelParams(p["mu"], p["nu"], p["w"], p["x"]), ctx)])


def _kosh_rhs_w(w_fixed):
    def rhs(p, ctx):
        mu, nu, x = p["mu"], p["nu"], p["x"]
        w = p.get("w", w_fixed)
        if mu == -nu:
            K = besselk(nu, x, ctx)
            with ctx.workdps():
                return _side([K.scale(mpmath.power(x, w))])
        return _side([mu_k_nu(mu, nu, x, w, ctx)])
    return rhs


def _kosh_w0_rhs(p, ctx):
    mu, nu, x = p["mu"], p["nu"], p["x"]
    if mu == -nu:
        return _side([besselk(nu, x, ctx)])
    if nu == 0:
        return _side([mu_k_nu(mu, nu, x, 0, ctx)])
    h = _half()
    with ctx.workdps():
        F1 = pfq([mu + h], [h - nu, 1 - nu], x * x / 4, ctx)
        F2 = pfq([mu + nu + h], [h, 1 + nu], x * x / 4, ctx)
        pre = mpmath.pi * mpmath.power(2, mu + nu - 1) / mpmath.sinpi(nu)
        c1 = pre * mpmath.power(x / 2, -nu) * mpmath.gamma(mu + h) * mpmath.rgamma(1 - nu) * mpmath.rgamma(h - nu)
        c2 = -pre * mpmath.power(x / 2, nu) * mpmath.gamma(mu + nu + h) * mpmath.rgamma(1 + nu) / mpmath.sqrt(mpmath.pi)
        return _side([F1.scale(c1), F2.scale(c2)])


def _kosh_w1_check(p):
    mu, nu = p["mu"], p["nu"]
    if _positive("x")(p):
        return "x must be a positive real number"
    if mu == -nu:
        if not abs(mpmath.re(nu)) < 1.5:
            return "need |Re(nu)| < 3/2"
        return None
    if (_is_int(nu) and nu > 0) or nu == -1:
        return "nu must not be a positive integer or -1"
    if not (mpmath.re(mu) > -1.5 and mpmath.re(nu) > -1.5 and mpmath.re(mu + nu) > -1.5):
        return "need Re(mu), Re(nu), Re(mu+nu) > -3/2"


def _kosh_w1_rhs(p, ctx):
    mu, nu, x = p["mu"], p["nu"], p["x"]
    if mu == -nu:
        K = besselk(nu, x, ctx)
        with ctx.workdps():
            return _side([K.scale(x)])
    if nu == 0:
        return _side([mu_k_nu(mu, nu, x, 1, ctx)])
    h3 = mpmath.mpf(3) / 2
    with ctx.workdps():
        F1 = pfq([mu + h3], [h3 - nu, 1 - nu], x * x / 4, ctx)
        F2 = pfq([mu + nu + h3], [h3, 1 + nu], x * x / 4, ctx)
        pre = mpmath.pi * x * mpmath.power(2, mu + nu - 1) / mpmath.sinpi(nu)
        c1 = pre * mpmath.power(x / 2, -nu) * mpmath.gamma(mu + h3) * mpmath.rgamma(1 - nu) * mpmath.rgamma(h3 - nu)
        c2 = -pre * mpmath.power(x / 2, nu) * mpmath.gamma(mu + nu + h3) * mpmath.rgamma(1 + nu) * mpmath.rgamma(h3)
        return _side([F1.scale(c1), F2.scale(c2)])


def _hankel_check(p):
    mu, w = p["mu"], p["w"]
    if _positive("x")(p):
        return "x must be a positive real number"
    if mu == -_half():
        if not mpmath.re(w) > 0:
            return "need Re(w) > 0"
        return None
    if not (mpmath.re(w) > -0.5 and mpmath.re(mu) > -mpmath.re(w) - 0.5):
        return "need Re(w) > -1/2 and Re(mu) > -Re(w) - 1/2"


def _hankel_lhs(p, ctx):
    if p["mu"] == -_half():
        return _side([quad.laguerre_hankel_transform(p["w"], p["x"], ctx)])
    return _side([quad.hankel_k_transform(p["mu"], p["w"], p["x"], ctx)])


def _hankel_rhs(p, ctx):
    mu, w, x = p["mu"], p["w"], p["x"]
    h = _half()
    with ctx.workdps():
        if mu == -h:
            return _side([_exact(mpmath.exp(-x) * mpmath.power(x, w - h))])
        F1 = pfq([mu + w + h], [h, w], x * x / 4, ctx)
        F2 = pfq([mu + w + 1], [mpmath.mpf(3) / 2, w + h], x * x / 4, ctx)
        pre = mpmath.power(2, mu) * mpmath.sqrt(mpmath.pi) * mpmath.power(x, w - h)
        c1 = pre * mpmath.gamma(mu + w + h) * mpmath.rgamma(w)
        c2 = -pre * x * mpmath.gamma(mu + w + 1) * mpmath.rgamma(w + h)
        return _side([F1.scale(c1), F2.scale(c2)])


def _mellin_check(p):
    s, nu, w = p["s"], p["nu"], p["w"]
    if _positive("x")(p):
        return "x must be a positive real number"
    lo = max(-mpmath.re(w) + mpmath.re(nu), -mpmath.re(w) - mpmath.re(nu))
    if not lo < mpmath.re(s) < 0.75:
        return "need -Re(w) +- Re(nu) < Re(s) < 3/4"


def _modular_check(p):
    z, w = p["z"], p["w"]
    if w < 0:
        return "w must be a nonnegative integer"
    if not abs(mpmath.re(z)) < 2 * w + 1:
        return "need |Re(z)| < 2w + 1"
    if _positive("alpha")(p):
        return "alpha must be a positive real number"


def _modular_side(which):
    def ev(p, ctx):
        a = p["alpha"] if which == "alpha" else 1 / p["alpha"]
        return _side([quad.modular_integral_side(p["z"], p["w"], a, ctx)])
    return ev


def _int_eval_check(p):
    a = p["a"]
    if _positive("y")(p):
        return "y must be a positive real number"
    if not mpmath.re(a) > -1:
        return "need Re(a) > -1"
    if _is_int(a / 2):
        return "a must not be an even integer"


def _int_zero_check(p):
    a = p["a"]
    if _positive("y")(p):
        return "y must be a positive real number"
    if not -1 < mpmath.re(a) < 1:
        return "need -1 < Re(a) < 1"
    if a == 0:
        return "a must be nonzero"


def _int_eval_lhs(p, ctx):
    a, y = p["a"], p["y"]
    r = quad.bracket_integral(a, y, 1, ctx)
    with ctx.workdps():
        return _side([r.scale(2 * mpmath.pi / (y * mpmath.sinpi(a / 2)))])


def _int_eval_rhs(p, ctx):
    a = p["a"]
    with ctx.workdps():
        # 1/(Gamma(-a) cos(pi a/2)) = -2 sin(pi a/2) Gamma(1+a)/pi
        v = -mpmath.power(2, -1 - a) * mpmath.power(mpmath.pi, -a - 1) * mpmath.sinpi(a / 2) * mpmath.gamma(1 + a)
        return _side([_exact(v)])


def _int_zero_lhs(p, ctx):
    return _side([quad.bracket_integral(p["a"], p["y"], -1, ctx)])


def _zero(p, ctx):
    return _side([_exact(0)])


def _mukhalf_check(p):
    mu, k = p["mu"], p["k"]
    if k < 1:
        return "k must be a positive integer"
    if not (mpmath.re(mu) > -0.5 or mu == -_half()):
        return "need Re(mu) > -1/2 or mu = -1/2"


def _mukhalf_rhs(p, ctx):
    mu, k = p["mu"], p["k"]
    if mu != -_half():
        return _side([_exact(0)])
    with ctx.workdps():
        v = mpmath.power(mpmath.pi, -mpmath.mpf(k + 1) / 2) * mpmath.gamma(mpmath.mpf(k) / 2) / mpmath.sqrt(2)
        return _side([_exact(v)])


# ---------------------------------------------------------------------------
# catalog


def _P(name, kind="real", constraint=""):
    return ParamSpec(name, kind, constraint)


_CATALOG = (
    IdentitySpec(
        "sigma-main", "Modular-type transformation of the divisor Lambert series",
        (_P("a", "complex", "Re(a) > -1, a not an even integer"), Y),
        _lambert_lhs(_sigma_rest), _sigma_k_rhs(False), SERIES, _sigma_main_check,
        _grid(a=("0.5", "1", "3"), y=Y_GRID), lambert=_lambert_sigma),
    IdentitySpec(
        "sigma-master", "Master identity valid in Re(a) > -2m-3",
        (_P("a", "complex", "Re(a) > -2m-3, a not an even or negative odd integer"), Y,
         _P("m", "int", "m >= 0")),
        _lambert_lhs(_sigma_rest), _sigma_k_rhs(True), SERIES, _sigma_master_check,
        _grid(a=("-2.5", "-1.2", "0.5", "3"), y=Y_GRID, m=(1, 2, 3)), lambert=_lambert_sigma),
    IdentitySpec(
        "sigma-2m", "Even positive index divisor series via sinh Shi - cosh Chi",
        (_P("m", "int", "m >= 1"), Y), _sigma_2m_lhs, _sigma_2m_rhs, SERIES,
        _all(_int_at_least("m", 1), _re_pos("y")), _grid(m=(1, 2, 3), y=Y_GRID),
        lambert=_sigma_2m_lambert),
    IdentitySpec(
        "sigma-neg2m", "Even negative index divisor series via sinh Shi - cosh Chi",
        (_P("m", "int", "m >= 1"), Y), _neg2m_lhs, _neg2m_rhs, SERIES,
        _all(_int_at_least("m", 1), _re_pos("y")), _grid(m=(1, 2, 3), y=Y_REAL),
        lambert=_neg2m_lambert),
    IdentitySpec(
        "sigma-neg2m-psi", "Even negative index series via digamma pairs",
        (_P("m", "int", "m >= 1"), Y), _neg2m_psi_lhs, _neg2m_psi_rhs, SERIES,
        _all(_int_at_least("m", 1), _re_pos("y")), _grid(m=(1, 2, 3), y=Y_GRID)),
    IdentitySpec(
        "ramanujan-odd-zeta", "Odd zeta values and Lambert series under alpha beta = pi^2",
        (_P("m", "int", "m nonzero"), ALPHA), _ram_lhs, _ram_rhs, SERIES, _ram_check,
        _grid(m=(-3, -2, -1, 1, 2, 3), alpha=ALPHAS), derived=_beta),
    IdentitySpec(
        "eisenstein-2m", "Weight 2m Eisenstein series transformation",
        (_P("m", "int", "m >= 2"), ALPHA), _eis_lhs, _eis_rhs, SERIES,
        _all(_int_at_least("m", 2), _re_pos("alpha")), _grid(m=(2, 3, 4), alpha=ALPHAS),
        derived=_beta),
    IdentitySpec(
        "dedekind-eta", "Logarithm of the Dedekind eta function",
        (ALPHA,), _eta_lhs, _eta_rhs, SERIES, _re_pos("alpha"), _grid(alpha=ALPHAS),
        derived=_beta),
    IdentitySpec(
        "e2-quasimodular", "Weight 2 Eisenstein series quasi-modularity",
        (ALPHA,), _e2_lhs, _e2_rhs, SERIES, _re_pos("alpha"), _grid(alpha=ALPHAS),
        derived=_beta),
    IdentitySpec(
        "wigert-dn", "Divisor function series via sinh Shi - cosh Chi",
        (Y,), _wigert_dn_lhs, _wigert_dn_rhs, SERIES, _re_pos("y"), _grid(y=Y_GRID),
        lambert=_wigert_lambert),
    IdentitySpec(
        "wigert-psi", "Divisor function series via digamma pairs",
        (Y,), _wigert_psi_lhs, _wigert_psi_rhs, SERIES, _re_pos("y"), _grid(y=Y_GRID)),
    IdentitySpec(
        "wigert-bellman-u", "Divisor function series via Tricomi U",
        (Y,), _wigert_dn_lhs, _bellman_rhs, SERIES, _re_pos("y"), _grid(y=Y_REAL)),
    IdentitySpec(
        "companion-even-zeta", "Even zeta values with digamma pairs",
        (_P("m", "int", "m >= 1"), ALPHA), _companion_lhs, _companion_rhs, SERIES,
        _all(_int_at_least("m", 1), _re_pos("alpha")), _grid(m=(1, 2, 3), alpha=ALPHAS),
        derived=_beta),
    IdentitySpec(
        "zeta3", "zeta(3) with digamma pairs", (Y,), _zeta3_lhs, _zeta3_rhs, SERIES,
        _re_pos("y"), _grid(y=Y_GRID)),
    IdentitySpec(
        "zeta5", "zeta(5) with digamma pairs", (Y,), _zeta5_lhs, _zeta5_rhs, SERIES,
        _re_pos("y"), _grid(y=Y_GRID)),
    IdentitySpec(
        "rk-bessel", "Sums of squares against K and the generalized K",
        (_P("k", "int", "k >= 2"), _P("mu", "complex", "Re(mu) > -1/2 or mu = -1/2"),
         _P("z", "complex", "Re(z) > 0")),
        _rk_lhs, _rk_rhs, SERIES, _rk_check,
        _grid(k=(2, 3, 4, 5), mu=("0", "1/2", "-1/2"), z=("1", "2"))),
    IdentitySpec(
        "theta-rk", "Theta function transformation for sums of squares",
        (_P("k", "int", "k >= 2"), _P("z", "complex", "Re(z) > 0")),
        _theta_lhs, _theta_rhs, SERIES, _all(_int_at_least("k", 2), _re_pos("z")),
        _grid(k=(2, 3, 4, 5), z=("1/2", "1", "2"))),
    IdentitySpec(
        "coth-herglotz", "Even zeta values, hyperbolic cotangent and digamma pairs",
        (_P("m", "int", "m >= 1"),), _coth_lhs, _coth_rhs, SERIES, _int_at_least("m", 1),
        _grid(m=(1, 2, 3))),
    IdentitySpec(
        "lerch-coth", "Closed form of sum coth(pi n)/n^(2m+1) for odd m",
        (_P("m", "int", "m odd, m >= 1"),), _lerch_lhs, _lerch_rhs, SERIES, _lerch_check,
        _grid(m=(1, 3, 5))),
    IdentitySpec(
        "self-reciprocal-K", "K is self-reciprocal in the Watson kernel",
        (_P("z", "complex"), _P("w", "complex", "Re(w) > max(-1/2, (|Re(z)|-1)/2)"),
         _P("x", "real", "x > 0")),
        _q(lambda p, c: quad.self_reciprocal_integral(p["z"], p["w"], p["x"], c)),
        _selfrec_rhs, QUADRATURE, _selfrec_check,
        ({"z": "1", "w": "1/2", "x": "1"}, {"z": "1/2", "w": "0", "x": "7/10"},
         {"z": "3/2", "w": "1", "x": "1/2"})),
    IdentitySpec(
        "koshliakov-transform", "Watson kernel transform of K gives the generalized K",
        (_P("mu", "complex"), _P("nu", "complex", "nu not a nonzero integer"),
         _P("w", "complex", "Re(w) > -1/2"), _P("x", "real", "x > 0")),
        _kosh_lhs, _kosh_rhs_w(None), QUADRATURE, _kosh_check_general(0),
        ({"mu": "0.3", "nu": "0.2", "w": "0.5", "x": "1"},
         {"mu": "-0.2", "nu": "0.2", "w": "0.5", "x": "1"},
         {"mu": "0.5", "nu": "0.25", "w": "1.25", "x": "2"})),
    IdentitySpec(
        "koshliakov-w0", "First Koshliakov kernel transform of K",
        (_P("mu", "complex"), _P("nu", "complex", "nu not a positive integer"),
         _P("x", "real", "x > 0")),
        _q(lambda p, c: quad.koshliakov_first_kernel(p["mu"], p["nu"], p["x"], c)),
        _kosh_w0_rhs, QUADRATURE, _kosh_check_general(0),
        ({"mu": "0.3", "nu": "0.2", "x": "1"}, {"mu": "-0.2", "nu": "0.2", "x": "1"},
         {"mu": "0.5", "nu": "0.25", "x": "2"})),
    IdentitySpec(
        "koshliakov-w1", "Second Koshliakov kernel transform of K",
        (_P("mu", "complex"), _P("nu", "complex", "nu not a positive integer or -1"),
         _P("x", "real", "x > 0")),
        _q(lambda p, c: quad.koshliakov_second_kernel(p["mu"], p["nu"], p["x"], c)),
        _kosh_w1_rhs, QUADRATURE, _kosh_w1_check,
        ({"mu": "0.3", "nu": "0.2", "x": "1"}, {"mu": "-0.2", "nu": "0.2", "x": "1"},
         {"mu": "-1", "nu": "0.7", "x": "1/2"})),
    IdentitySpec(
        "hankel-K", "Hankel transform of t^(mu+w+1/2) K_mu(t)",
        (_P("mu", "complex"), _P("w", "complex", "Re(w) > -1/2"), _P("x", "real", "x > 0")),
        _hankel_lhs, _hankel_rhs, QUADRATURE, _hankel_check,
        ({"mu": "0", "w": "1", "x": "1"}, {"mu": "1/2", "w": "3/4", "x": "2"},
         {"mu": "-1/2", "w": "1", "x": "1"}, {"mu": "1", "w": "1/4", "x": "1/2"})),
    IdentitySpec(
        "mellin-watson", "Mellin transform of the Watson kernel",
        (_P("s", "complex"), _P("nu", "complex"), _P("w", "complex"), _P("x", "real", "x > 0")),
        _q(lambda p, c: quad.mellin_of_watson(p["s"], p["nu"], p["w"], p["x"], c)),
        _q(lambda p, c: quad.mellin_watson_closed(p["s"], p["nu"], p["w"], p["x"], c)),
        QUADRATURE, _mellin_check,
        ({"s": "0.3", "nu": "0.2", "w": "0.5", "x": "1.5"},
         {"s": "0.5", "nu": "0.1", "w": "0", "x": "1"},
         {"s": "0.2", "nu": "0.4", "w": "1", "x": "2"})),
    IdentitySpec(
        "modular-integral", "Modular relation between two K integrals",
        (_P("z", "complex"), _P("w", "int", "w >= 0"), _P("alpha", "real", "alpha > 0")),
        _modular_side("alpha"), _modular_side("beta"),
        QUADRATURE, _modular_check,
        ({"z": "1/2", "w": 0, "alpha": "2"}, {"z": "1/2", "w": 1, "alpha": "1/2"},
         {"z": "5/2", "w": 1, "alpha": "3"}),
        derived=lambda p: {"beta": 1 / p["alpha"]}),
    IdentitySpec(
        "int-eval-a", "Weighted integral of the 1F2 / cosh bracket",
        (_P("a", "complex", "Re(a) > -1, a not an even integer"), Y_POS),
        _int_eval_lhs, _int_eval_rhs, QUADRATURE, _int_eval_check,
        _grid(a=("0.5", "-0.5", "3", "1.5"), y=("1", "2"))),
    IdentitySpec(
        "int-eval-zero", "Vanishing integral of the 1F2 / cosh bracket",
        (_P("a", "complex", "-1 < Re(a) < 1, a nonzero"), Y_POS),
        _int_zero_lhs, _zero, QUADRATURE, _int_zero_check,
        _grid(a=("0.5", "-0.5", "0.3"), y=("1/2", "2"))),
    IdentitySpec(
        "mukhalf-int-zero", "Integral of the generalized K at nu = 1/2",
        (_P("mu", "complex", "Re(mu) > -1/2 or mu = -1/2"), _P("k", "int", "k >= 1")),
        _q(lambda p, c: quad.mu_k_half_integral(p["mu"], p["k"], c)),
        _mukhalf_rhs, QUADRATURE, _mukhalf_check,
        _grid(mu=("0", "1/2", "-1/2"), k=(2, 3))),
)

_BY_ID = {s.id: s for s in _CATALOG}


def list_identities() -> list:
    return list(_CATALOG)


def get_identity(identity_id: str) -> IdentitySpec:
    try:
        return _BY_ID[identity_id]
    except KeyError:
        raise UnknownIdentity(identity_id) from None


# ---------------------------------------------------------------------------
# parameters


def coerce_value(kind: str, v):
    if kind == "int":
        if isinstance(v, int) and not isinstance(v, bool):
            return v
        x = to_mp(v)
        if mpmath.im(x) != 0 or not mpmath.isint(mpmath.re(x)):
            raise ConstraintError(f"expected an integer, got {v!r}")
        return int(mpmath.re(x))
    x = to_mp(v)
    if kind == "real" and mpmath.im(x) != 0:
        raise ConstraintError(f"expected a real number, got {v!r}")
    if isinstance(x, mpmath.mpc) and mpmath.im(x) == 0:
        x = mpmath.re(x)
    return x


def resolve_params(spec: IdentitySpec, params: dict, ctx: PrecisionContext) -> dict:
    unknown = set(params) - set(spec.param_names)
    if unknown:
        raise ConstraintError(f"unknown parameters {sorted(unknown)} for {spec.id}")
    missing = [n for n in spec.param_names if n not in params]
    if missing:
        raise ConstraintError(f"missing parameters {missing} for {spec.id}")
    with ctx.workdps():
        out = {p.name: coerce_value(p.kind, params[p.name]) for p in spec.params}
    if spec.check is not None:
        msg = spec.check(out)
        if msg:
            raise ConstraintError(f"{spec.id}: {msg}")
    return out


def _with_derived(spec, p, ctx):
    if spec.derived is None:
        return dict(p)
    with ctx.workdps():
        return dict(p, **spec.derived(p))


# ---------------------------------------------------------------------------
# evaluation


def evaluate_side(identity_id: str, side: str, params: dict, ctx: PrecisionContext) -> Side:
    spec = get_identity(identity_id)
    if side not in ("lhs", "rhs"):
        raise ValueError("side must be 'lhs' or 'rhs'")
    p = resolve_params(spec, params, ctx)
    with ctx.workdps():
        return (spec.lhs if side == "lhs" else spec.rhs)(p, ctx)


def series_tolerance(ctx: PrecisionContext):
    return mpmath.mpf(10) ** (-(ctx.decimal_digits - 5))


def judge(tier: str, lhs: Side, rhs: Side, real: bool, ctx: PrecisionContext):
    """Return (abs_diff, rel_diff, passed).

    Series tier: |lhs - rhs| <= tol * max(|lhs|, |rhs|) + both error bounds,
    with each error bound itself below tol relative to the magnitude of the
    parts that were combined into that side. Quadrature tier: the same with
    an absolute tolerance.
    """
    with ctx.workdps():
        L, R = lhs.value, rhs.value
        diff = abs(L.value - R.value)
        mag = max(abs(L.value), abs(R.value))
        rel = diff / mag if mag else (mpmath.mpf(0) if diff == 0 else mpmath.inf)
        if tier == SERIES:
            tol = series_tolerance(ctx)
            allowed = tol * mag + L.abs_error + R.abs_error
            ok = (diff <= allowed
                  and L.abs_error <= tol * max(mag, lhs.scale)
                  and R.abs_error <= tol * max(mag, rhs.scale))
            im_tol = tol * max(mag, lhs.scale, rhs.scale)
        else:
            allowed = QUAD_TOL + L.abs_error + R.abs_error
            ok = diff <= allowed and L.abs_error <= QUAD_TOL and R.abs_error <= QUAD_TOL
            im_tol = QUAD_TOL
        if real:
            ok = ok and abs(mpmath.im(L.value)) <= im_tol and abs(mpmath.im(R.value)) <= im_tol
        return diff, rel, bool(ok)


MAX_EXTRA_DIGITS = 60


def _evaluate(spec, fn, params, p, ctx) -> Side:
    """Evaluate one side; when its parts cancel past the guard digits, redo it
    once with enough extra digits (parameters re-parsed at that precision)."""
    with ctx.workdps():
        side = fn(p, ctx)
    if spec.tier != SERIES:
        return side
    loss = lost_digits(side.scale, side.value.value)
    if loss <= ctx.guard_digits / 2:
        return side
    extra = MAX_EXTRA_DIGITS if loss == float("inf") else min(MAX_EXTRA_DIGITS, int(loss) + 5)
    c2 = ctx.raised(extra)
    p2 = resolve_params(spec, params, c2)
    with c2.workdps():
        return fn(p2, c2)


def verify(identity_id: str, params: dict, ctx: PrecisionContext) -> IdentityReport:
    spec = get_identity(identity_id)
    p = resolve_params(spec, params, ctx)
    t0 = time.perf_counter()
    lhs = _evaluate(spec, spec.lhs, params, p, ctx)
    rhs = _evaluate(spec, spec.rhs, params, p, ctx)
    real = is_real_input(*[v for v in p.values() if not isinstance(v, int)])
    diff, rel, ok = judge(spec.tier, lhs, rhs, real, ctx)
    return IdentityReport(spec.id, _with_derived(spec, p, ctx), realify(lhs.value, real),
                          realify(rhs.value, real), diff, rel,
                          "pass" if ok else "fail", lhs.terms, rhs.terms,
                          time.perf_counter() - t0, ctx.decimal_digits,
                          lhs_scale=lhs.scale, rhs_scale=rhs.scale)


# ---------------------------------------------------------------------------
# limits in the index a


LIMIT_TOL = mpmath.mpf(10) ** -8
_LIMIT_TARGETS = {
    "wigert-dn": lambda p: 0,
    "sigma-2m": lambda p: 2 * p["m"],
    "sigma-neg2m": lambda p: -2 * p["m"],
}


def _generic_prediction(a, y, ctx):
    """The generic identity solved for sum sigma_a(n) e^(-ny)."""
    if mpmath.re(a) > -1:
        spec, p = _BY_ID["sigma-main"], {"a": a, "y": y}
    else:
        m = max(0, int(mpmath.floor((-mpmath.re(a) - 3) / 2)) + 1)
        spec, p = _BY_ID["sigma-master"], {"a": a, "y": y, "m": m}
    rhs = spec.rhs(p, ctx)
    rest = _sigma_rest(p, ctx)
    with ctx.workdps():
        v = rhs.value
        for r in rest:
            v = v - r
        return v, rhs.terms


def verify_limit(identity_id: str, params: dict, limit_param: str, target, ctx: PrecisionContext,
                 steps=(mpmath.mpf("1e-3"), mpmath.mpf("1e-4"))) -> IdentityReport:
    """Reach a dedicated integer-index identity as a limit of the generic one.

    The generic identity is evaluated at target +- h; the symmetric mean
    removes the odd part of the expansion in h, and Richardson extrapolation
    over the two step sizes removes the h^2 term. The result is compared
    with the dedicated identity's prediction of the same Lambert series.
    """
    spec = get_identity(identity_id)
    if identity_id not in _LIMIT_TARGETS or spec.lambert is None:
        raise ConstraintError(f"{identity_id} is not reached as a limit in the index")
    if limit_param != "a":
        raise ConstraintError("the limit parameter must be 'a'")
    p = resolve_params(spec, params, ctx)
    t = to_mp(target)
    expected = _LIMIT_TARGETS[identity_id](p)
    if t != expected:
        raise ConstraintError(f"{identity_id} with these parameters is the limit a -> {expected}")
    t0 = time.perf_counter()
    y = p["y"]
    work = ctx.raised(10)
    terms = 0
    means = []
    for h in steps:
        up, n1 = _generic_prediction(t + h, y, work)
        dn, n2 = _generic_prediction(t - h, y, work)
        terms += n1 + n2
        with work.workdps():
            means.append((up + dn).scale(_half()))
    h1, h2 = steps
    with work.workdps():
        w1, w2 = h1 ** 2, h2 ** 2
        limit = (means[1].scale(w1) - means[0].scale(w2)).scale(1 / (w1 - w2))
        # remaining h^4 term, estimated from the spread of the two means
        limit = limit.with_error(abs(means[0].value - means[1].value) * w2 / (w1 - w2) * w2 / w1)
        lhs = spec.lhs(p, ctx)
        rhs = spec.rhs(p, ctx)
        lam = spec.lambert(p, ctx)[0]
        dedicated = rhs.value - (lhs.value - lam)
        diff = abs(limit.value - dedicated.value)
        mag = max(abs(limit.value), abs(dedicated.value))
        rel = diff / mag if mag else mpmath.mpf(0)
    ok = diff <= LIMIT_TOL
    real = is_real_input(y)
    report = IdentityReport(spec.id, dict(p, a=t), realify(limit, real), realify(dedicated, real), diff, rel,
                            "pass" if ok else "fail", terms, lhs.terms + rhs.terms,
                            time.perf_counter() - t0, ctx.decimal_digits)
    return report


def default_grid(identity_id: str) -> list:
    return [dict(g) for g in get_identity(identity_id).grid]
