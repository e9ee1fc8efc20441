from __future__ import annotations

import mpmath
from hypothesis import given, settings, strategies as st

from modid import series
from modid.arith import rk_table, sigma_values
from modid.bessel import mu_k_nu
from modid.precision import PrecisionContext

CTX = PrecisionContext(30)
TOL = mpmath.mpf(10) ** -25

exponents = st.floats(-3.5, 3.5, allow_nan=False)
real_y = st.floats(0.3, 4.0)
complex_y = st.tuples(st.floats(0.4, 3.0), st.floats(-1.0, 1.0)).map(lambda p: mpmath.mpc(*p))


def _agree(a, b, extra=0):
    return abs(a.value - b.value) <= TOL * max(abs(a.value), abs(b.value)) + a.abs_error + b.abs_error + extra


@settings(max_examples=30, deadline=None)
@given(exponents, st.one_of(real_y, complex_y))
def test_lambert_forms_agree(a, y):
    # sum sigma_a(n) e^{-ny} = sum n^a / (e^{ny} - 1)
    with CTX.workdps():
        a, y = mpmath.mpf(a), mpmath.mpmathify(y)
        s, _ = series.lambert_sigma(a, y, CTX)
        p, _ = series.lambert_power(a, y, CTX)
        assert _agree(s, p)


@settings(max_examples=10, deadline=None)
@given(exponents, real_y)
def test_lambert_sigma_oracle(a, y):
    with mpmath.workdps(60):
        a, y = mpmath.mpf(a), mpmath.mpf(y)
        N = int(60 * mpmath.log(10) / y + 6 * abs(a) / y) + 20
        sv = sigma_values(a, N)
        ref = mpmath.fsum(sv[n] * mpmath.exp(-n * y) for n in range(1, N + 1))
    with CTX.workdps():
        s, _ = series.lambert_sigma(a, y, CTX)
        assert abs(s.value - ref) <= TOL * abs(ref) + s.abs_error


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 6), st.one_of(st.floats(0.2, 5.0), complex_y))
def test_theta_power(k, z):
    with CTX.workdps():
        z = mpmath.mpmathify(z)
        t, _ = series.theta_rk(k, z, CTX)
        one = series.theta_one(z, CTX)
        one = one[0] if isinstance(one, tuple) else one
        power = mpmath.power(one.value, k)
        assert abs(t.value - power) <= TOL * abs(power) + t.abs_error + k * one.abs_error * abs(power / one.value)
    with mpmath.workdps(60):
        ref = mpmath.jtheta(3, 0, mpmath.exp(-z))
    with CTX.workdps():
        assert abs(one.value - ref) <= TOL * abs(ref) + one.abs_error


def test_rk_bessel_lhs_direct():
    k, mu, z = 3, mpmath.mpf("0.5"), mpmath.mpf("1.5")
    with mpmath.workdps(60):
        row = rk_table(k, 80)
        ref = mpmath.fsum(row[n] * mpmath.power(n, mu + 1) * mpmath.besselk(mu, n * z) for n in range(1, 81))
    with CTX.workdps():
        v, _ = series.rk_bessel_lhs(k, mu, z, CTX)
        assert abs(v.value - ref) <= TOL * abs(ref) + v.abs_error


@settings(max_examples=8, deadline=None)
@given(st.sampled_from(["0.5", "1.5", "3", "-0.5", "2.5", "0.3+0.2i"]), st.sampled_from(["1/2", "1", "2"]))
def test_two_representations_of_main_rhs(a, y):
    # the generalized-K series and the explicit 1F2/cosh bracket series agree
    from modid.precision import parse_number
    with CTX.workdps():
        a, y = parse_number(a), parse_number(y)
        k_form, _ = series.sigma_k_series(a, y, None, CTX)
        b_form, _ = series.sigma_k_series(a, y, None, CTX, bracket=True)
        assert _agree(k_form, b_form)


def test_bracket_termwise_matches_generalized_k():
    a, y = mpmath.mpf("1.5"), mpmath.mpf(1)
    with CTX.workdps():
        Q = y * mpmath.sinpi(a / 2) / (2 * mpmath.pi) * 2 * mpmath.sqrt(2 * mpmath.pi) * mpmath.power(y, -1 - a / 2)
        for n in (1, 2, 3):
            X = 4 * mpmath.pi ** 2 * n / y
            b = series._onef2_bracket(a, n, y, CTX)
            k = mu_k_nu(mpmath.mpf(1) / 2, a / 2, X, 0, CTX)
            assert abs(b.value - Q * mpmath.power(n, -a / 2) * k.value) <= TOL * abs(b.value) + b.abs_error * 2


@settings(max_examples=5, deadline=None)
@given(st.integers(2, 5), st.floats(0.5, 8.0))
def test_psi_pair_series_direct(power, x1):
    # partial sums with an Euler-Maclaurin tail
    x1 = mpmath.mpf(x1)
    with mpmath.workdps(40):
        f = lambda n: mpmath.power(n, -power) * 2 * mpmath.re(mpmath.digamma(1j * n * x1))  # noqa: E731
        ref = mpmath.fsum(f(n) for n in range(1, 201)) + mpmath.sumem(f, [201, mpmath.inf])
    with CTX.workdps():
        v, _ = series.psi_pair_series(power, x1, CTX)
        assert abs(v.value - ref) <= mpmath.mpf(10) ** -22 * abs(ref) + v.abs_error


def test_expansion_start_is_positive():
    assert series.asymptotic_start(mpmath.mpf(40), CTX) >= 0
    assert series.asymptotic_start(mpmath.mpf("0.1"), CTX) > series.asymptotic_start(mpmath.mpf(10), CTX)
