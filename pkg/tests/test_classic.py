from __future__ import annotations

from fractions import Fraction
from math import comb

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from conftest import close
from modid import classic
from modid.precision import DomainError, PrecisionContext


def test_gamma_values(ctx):
    assert classic.gamma(1, ctx).value == 1
    with ctx.workdps():
        assert close(classic.gamma(mpmath.mpf(1) / 2, ctx).value, mpmath.sqrt(mpmath.pi), digits=29)


def test_gamma_reflection_product(ctx):
    with ctx.workdps():
        p = classic.gamma(mpmath.mpf("0.25"), ctx) * classic.gamma(mpmath.mpf("0.75"), ctx)
        assert close(p.value, mpmath.pi * mpmath.sqrt(2), digits=29)


def test_gamma_pole(ctx):
    with pytest.raises(DomainError):
        classic.gamma(-2, ctx)


def test_digamma_values(ctx):
    with ctx.workdps():
        g = mpmath.euler
        assert close(classic.digamma(1, ctx).value, -g, digits=29)
        assert close(classic.digamma(2, ctx).value, 1 - g, digits=29)
        half = mpmath.mpf(1) / 2
        ref = -g + mpmath.nsum(lambda k: 1 / (k + 1) - 1 / (k + half), [0, mpmath.inf])
        assert close(ref, -g - 2 * mpmath.log(2), digits=25)
        assert close(classic.digamma(half, ctx).value, ref, digits=25)


def test_zeta_special_values(ctx):
    with ctx.workdps():
        assert close(classic.zeta(2, ctx).value, mpmath.pi ** 2 / 6, digits=29)
        assert close(classic.zeta(0, ctx).value, -mpmath.mpf(1) / 2, digits=29)
        # zeta(1 - 2m) = -B_2m / 2m at m = 2
        assert close(classic.zeta(-3, ctx).value, mpmath.mpf(1) / 120, digits=29)


def test_zeta_pole(ctx):
    with pytest.raises(DomainError):
        classic.zeta(1, ctx)


def test_zeta_prime_values(ctx):
    with ctx.workdps():
        z3 = classic.zeta(3, ctx).value
        assert close(classic.zeta_prime(-2, ctx).value, -z3 / (4 * mpmath.pi ** 2), digits=28)
        # partial sums with an Euler-Maclaurin tail
        f = lambda n: mpmath.log(n) / n ** 2  # noqa: E731
        ref2 = -(mpmath.fsum(f(n) for n in range(2, 200)) + mpmath.sumem(f, [200, mpmath.inf]))
        assert close(classic.zeta_prime(2, ctx).value, ref2, digits=28)
    with mpmath.workdps(90):
        h = mpmath.mpf(10) ** -30
        ref0 = (mpmath.zeta(h) - mpmath.zeta(-h)) / (2 * h)
    with ctx.workdps():
        v = classic.zeta_prime(0, ctx).value
        assert close(v, ref0, digits=28)
        assert close(v, -mpmath.log(2 * mpmath.pi) / 2, digits=28)


def _bernoulli_recursive(n):
    B = [Fraction(1)]
    for k in range(1, n + 1):
        B.append(-sum(comb(k + 1, j) * B[j] for j in range(k)) / (k + 1))
    return B[n]


@pytest.mark.parametrize("n", [0, 1, 2, 4, 12, 20])
def test_bernoulli(n, ctx):
    assert classic.bernoulli_fraction(n) == _bernoulli_recursive(n)
    with ctx.workdps():
        b = _bernoulli_recursive(n)
        assert close(classic.bernoulli(n, ctx).value, mpmath.mpf(b.numerator) / b.denominator, digits=29)


def test_bernoulli_known():
    assert classic.bernoulli_fraction(2) == Fraction(1, 6)
    assert classic.bernoulli_fraction(12) == Fraction(-691, 2730)


def test_hypergeometric_cosh_reductions(ctx):
    with ctx.workdps():
        half = mpmath.mpf(1) / 2
        assert close(classic.pfq([], [half], 1, ctx).value, mpmath.cosh(2), digits=29)
        assert close(classic.pfq([1], [1, half], mpmath.mpf(9) / 4, ctx).value, mpmath.cosh(3), digits=29)
        assert classic.pfq([2, 3], [4], 0, ctx).value == 1


@settings(max_examples=25, deadline=None)
@given(st.floats(0.1, 3), st.floats(0.3, 4), st.floats(0.3, 4), st.floats(-40, 40))
def test_hyp1f2_against_oracle(a, b1, b2, z):
    ctx = PrecisionContext(30)
    with ctx.workdps():
        v = classic.pfq([a], [b1, b2], z, ctx)
    ref = _oracle_hyper([a], [b1, b2], z)
    with ctx.workdps():
        assert abs(v.value - ref) <= mpmath.mpf(10) ** -25 * max(1, abs(ref)) + v.abs_error


def _oracle_hyper(a, b, z):
    with mpmath.workdps(80):
        return mpmath.hyper(a, b, z)


def test_tricomi_u_values(ctx):
    with ctx.workdps():
        assert close(classic.tricomi_u(1, 1, 1, ctx).value, -mpmath.e * mpmath.ei(-1), digits=28)
        s = classic.tricomi_u(1, 1, 2, ctx) + classic.tricomi_u(1, 1, -2, ctx)
        ref = 2 * (mpmath.sinh(2) * mpmath.shi(2) - mpmath.cosh(2) * mpmath.chi(2))
        assert close(s.value, ref, digits=27)


def test_tricomi_u_large_argument(ctx):
    # z^a U(a; c; z) = 1 - a(a - c + 1)/z + O(z^-2)
    a, c = mpmath.mpf(3) / 4, mpmath.mpf(1) / 2
    with ctx.workdps():
        v50 = classic.tricomi_u(a, c, 50, ctx).value * mpmath.power(50, a)
        v500 = classic.tricomi_u(a, c, 500, ctx).value * mpmath.power(500, a)
    assert abs(v50 - (1 - a * (a - c + 1) / 50)) < 1e-3
    assert abs(v500 - 1) < 1e-2


@pytest.mark.parametrize("a,c,z", [("0.3", "1.7", "2.5"), ("1", "1", "10"), ("2.5", "0.5", "0.7"),
                                   ("1", "1", "-3")])
def test_tricomi_u_oracle(a, c, z, ctx):
    # on the negative axis the value is the mean of the two sides of the cut
    with mpmath.workdps(80):
        ref = mpmath.re(mpmath.hyperu(mpmath.mpf(a), mpmath.mpf(c), mpmath.mpf(z)))
    with ctx.workdps():
        v = classic.tricomi_u(mpmath.mpf(a), mpmath.mpf(c), mpmath.mpf(z), ctx).value
        assert close(v, ref, digits=26)


def test_ei_relations(ctx):
    with ctx.workdps():
        one = mpmath.mpf(1)
        lhs = mpmath.e * classic.ei(-one, ctx).value + classic.ei(one, ctx).value / mpmath.e
        core = classic.sinh_shi_minus_cosh_chi(one, ctx).value
        assert close(lhs, -2 * core, digits=28)
        assert close(classic.ei(-one, ctx).value, -mpmath.gammainc(0, 1), digits=28)
        ref = mpmath.euler + mpmath.fsum(1 / (k * mpmath.factorial(k)) for k in range(1, 60))
        assert close(classic.ei(one, ctx).value, ref, digits=29)


def test_shi_chi(ctx):
    assert classic.shi(0, ctx).value == 0
    with ctx.workdps():
        z = mpmath.mpf(10) ** -6
        _, chi = classic.shi_chi(z, ctx)
        assert abs(chi.value - mpmath.euler - mpmath.log(z)) < 1e-11
        ref = mpmath.fsum(1 / ((2 * k - 1) * mpmath.factorial(2 * k - 1)) for k in range(1, 40))
        assert close(classic.shi(1, ctx).value, ref, digits=29)


@pytest.mark.parametrize("x", [1, 5, 30, 80, 200])
def test_sinh_shi_minus_cosh_chi_oracle(x, ctx):
    with mpmath.workdps(200 + 2 * x):
        X = mpmath.mpf(x)
        ref = mpmath.sinh(X) * mpmath.shi(X) - mpmath.cosh(X) * mpmath.chi(X)
    with ctx.workdps():
        v = classic.sinh_shi_minus_cosh_chi(x, ctx)
        assert close(v.value, ref, digits=27)


def _psi_direct(m, z):
    with mpmath.workdps(60):
        z = mpmath.mpf(z)
        return mpmath.nsum(lambda j: mpmath.digamma(2 * j + 2 * m + 1) * z ** (2 * j)
                           / (mpmath.rf(m + 1, j) * mpmath.rf(m + mpmath.mpf(1) / 2, j)), [0, mpmath.inf])


def test_psi_series_closed_m0(ctx):
    with ctx.workdps():
        two = mpmath.mpf(2)
        ref = (mpmath.sinh(two) * mpmath.shi(two) - mpmath.cosh(two) * mpmath.chi(two)
               + mpmath.log(two) * mpmath.cosh(two))
        assert close(classic.psi_series_closed(0, 1, ctx).value, ref, digits=28)


@pytest.mark.parametrize("m,z", [(0, "1"), (1, "1"), (2, "0.5"), (3, "2"), (4, "1.5")])
def test_psi_series_closed_direct(m, z, ctx):
    ref = _psi_direct(m, z)
    with ctx.workdps():
        assert close(classic.psi_series_closed(m, mpmath.mpf(z), ctx).value, ref, digits=25)
