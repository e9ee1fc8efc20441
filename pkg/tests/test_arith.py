from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from conftest import close
from modid import arith
from modid.precision import DomainError, PrecisionContext, parse_number


def _sigma_brute(a, n):
    return mpmath.fsum(mpmath.power(d, a) for d in range(1, n + 1) if n % d == 0)


def test_sigma_values_small(ctx):
    assert arith.sigma(mpmath.mpf("2.5"), 1, ctx).value == 1
    assert arith.sigma(1, 6, ctx).value == 12
    assert arith.sigma(0, 12, ctx).value == 6
    assert arith.divisor_count(12) == 6


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5000), st.sampled_from(["0", "1", "3", "-2", "0.5", "-1.3", "1+2i"]))
def test_sigma_against_divisor_enumeration(n, a):
    c = PrecisionContext(30)
    with c.workdps():
        a = parse_number(a)
        v = arith.sigma(a, n, c)
        ref = _sigma_brute(a, n)
        assert abs(v.value - ref) <= mpmath.mpf(10) ** -28 * abs(ref) + v.abs_error


def test_sigma_values_table(ctx):
    with ctx.workdps():
        vals = arith.sigma_values(mpmath.mpf("0.7"), 300)
        for n in range(1, 301):
            assert close(vals[n], _sigma_brute(mpmath.mpf("0.7"), n), digits=28)


@given(st.integers(2, 10 ** 9))
def test_factorize_roundtrip(n):
    prod = 1
    for p, e in arith.factorize(n):
        assert all(p % q for q in range(2, int(p ** 0.5) + 1))
        prod *= p ** e
    assert prod == n


def test_rk_small_values():
    assert all(arith.rk(k, 0) == 1 for k in range(1, 8))
    assert arith.rk(2, 1) == 4
    assert arith.rk(2, 5) == 8
    assert arith.rk(4, 2) == arith.rk_brute(4, 2) == 24


def test_rk_matches_enumeration():
    for k in range(1, 7):
        for n in range(0, 51):
            assert arith.rk(k, n) == arith.rk_brute(k, n), (k, n)


def test_rk_table_row_one():
    row = arith.rk_table(1, 100)
    squares = {m * m for m in range(1, 11)}
    assert row[0] == 1
    assert all(row[n] == (2 if n in squares else 0) for n in range(1, 101))


def test_rk_table_cache_consistent():
    a = arith.rk_table(3, 200)
    b = arith.rk_table(3, 200)
    assert a == b
    assert list(arith.rk_table(3, 50)) == list(a[:51])


def test_rk_table_thread_safe():
    with ThreadPoolExecutor(8) as pool:
        rows = list(pool.map(lambda k: arith.rk_table(k, 400), [2, 3, 4, 5] * 4))
    for k, row in zip([2, 3, 4, 5] * 4, rows):
        assert row[:40] == tuple(arith.rk_brute(k, n) for n in range(40))


def test_rk_domain():
    with pytest.raises(DomainError):
        arith.rk_table(0, 10)


@pytest.mark.parametrize("s", ["3", "4.5", "2+1i", "0.3"])
def test_lattice_zeta_four_squares(s, ctx):
    with mpmath.workdps(80):
        S = parse_number(s)
        ref = 8 * (1 - mpmath.power(4, 1 - S)) * mpmath.zeta(S) * mpmath.zeta(S - 1)
    with ctx.workdps():
        v = arith.lattice_zeta(4, parse_number(s), ctx)
        assert abs(v.value - ref) <= mpmath.mpf(10) ** -27 * abs(ref) + v.abs_error


@pytest.mark.parametrize("s", ["2", "3.5", "0.4"])
def test_lattice_zeta_two_squares(s, ctx):
    with mpmath.workdps(80):
        S = mpmath.mpf(s)
        ref = 4 * mpmath.zeta(S) * mpmath.dirichlet(S, [0, 1, 0, -1])
    with ctx.workdps():
        assert close(arith.lattice_zeta(2, mpmath.mpf(s), ctx).value, ref, digits=27)


def test_lattice_zeta_pole(ctx):
    with pytest.raises(DomainError):
        arith.lattice_zeta(4, 2, ctx)


@pytest.mark.parametrize("z,s,N", [(0, 4, 10 ** 4), (1, 5, 2000), (-2, 3, 2000)])
def test_dirichlet_sigma_check(z, s, N, ctx):
    r = arith.dirichlet_sigma_check(z, s, N, ctx)
    assert r.value <= r.abs_error
