"""End-to-end acceptance checks; each test prints one PASS/FAIL line."""
from __future__ import annotations

import random
import time

import mpmath
import pytest

from modid import arith, bessel, classic, identities, series
from modid.cli import SuiteConfig, run_suite
from modid.precision import PrecisionContext, to_mp

D = 30
SERIES_REL = mpmath.mpf(10) ** -25
QUAD_ABS = mpmath.mpf(10) ** -10


def report(pytestconfig, n: int, ok: bool, detail: str):
    line = f"CRITERION {n}: {'PASS' if ok else 'FAIL'} {detail}"
    capman = pytestconfig.pluginmanager.getplugin("capturemanager")
    with capman.global_and_fixture_disabled():
        print("\n" + line)
    return ok


def _series_ok(r) -> bool:
    """Relative agreement, or both sides vanishing relative to their parts."""
    if r.rel_diff < SERIES_REL:
        return True
    floor = SERIES_REL * max(r.lhs_scale, r.rhs_scale)
    return abs(r.lhs.value) <= floor and abs(r.rhs.value) <= floor


@pytest.mark.slow
def test_criterion_1_identity_suite(pytestconfig):
    t0 = time.perf_counter()
    reports = run_suite(SuiteConfig(digits=D, parallelism=8))
    elapsed = time.perf_counter() - t0
    tiers = {s.id: s.tier for s in identities.list_identities()}
    bad = []
    for r in reports:
        if not r.passed:
            bad.append((r.id, r.params, "verdict"))
        elif tiers[r.id] == identities.SERIES:
            if not _series_ok(r):
                bad.append((r.id, r.params, mpmath.nstr(r.rel_diff, 3)))
        elif r.abs_diff >= QUAD_ABS:
            bad.append((r.id, r.params, mpmath.nstr(r.abs_diff, 3)))
    ids = {r.id for r in reports}
    ok = not bad and ids == set(tiers) and elapsed < 600
    report(pytestconfig, 1, ok,
           f"{len(reports) - len(bad)}/{len(reports)} points over {len(ids)} ids in {elapsed:.0f} s")
    assert not bad, bad
    assert ids == set(tiers)
    assert elapsed < 600


def test_criterion_2_zeta3_self_dual(pytestconfig):
    ctx = PrecisionContext(D)
    r = identities.verify("ramanujan-odd-zeta", {"m": 1, "alpha": "pi"}, ctx)
    with ctx.workdps():
        pi = mpmath.pi
        S, _ = series.lambert_power(-3, 2 * pi, ctx)
        z3 = 7 * pi ** 3 / 180 - 2 * S.value
    with mpmath.workdps(60):
        # direct summation: partial sum plus Euler-Maclaurin tail
        N = 1000
        head = mpmath.fsum(mpmath.mpf(n) ** -3 for n in range(1, N))
        tail = mpmath.sumem(lambda n: n ** -3, [N, mpmath.inf])
        direct = head + tail
    rel = abs(z3 - direct) / direct
    ok = r.passed and rel < SERIES_REL
    report(pytestconfig, 2, ok, f"identity {r.verdict}, zeta(3) rel diff {mpmath.nstr(rel, 3)}")
    assert r.passed
    assert rel < SERIES_REL


def test_criterion_3_theta(pytestconfig):
    ctx = PrecisionContext(D)
    worst = mpmath.mpf(0)
    ok = True
    for k in (2, 3, 4, 5):
        for z in ("1/2", "1", "2"):
            r = identities.verify("theta-rk", {"k": k, "z": z}, ctx)
            zz = to_mp(z)
            lhs, _ = series.theta_rk(k, zz, ctx)
            one, _ = series.theta_one(zz, ctx)
            with ctx.workdps():
                power_rel = abs(lhs.value - one.value ** k) / abs(lhs.value)
            worst = max(worst, r.rel_diff, power_rel)
            ok = ok and r.passed and r.rel_diff < SERIES_REL and power_rel < SERIES_REL
    report(pytestconfig, 3, ok, f"12 points, worst rel diff {mpmath.nstr(worst, 3)}")
    assert ok


LIMITS = [
    ("wigert-dn", {"y": "1"}, 0),
    ("wigert-dn", {"y": "1/2"}, 0),
    ("sigma-2m", {"m": 1, "y": "1"}, 2),
    ("sigma-2m", {"m": 2, "y": "1"}, 4),
    ("sigma-neg2m", {"m": 1, "y": "1"}, -2),
    ("sigma-neg2m", {"m": 2, "y": "1"}, -4),
]


def test_criterion_4_limits(pytestconfig):
    ctx = PrecisionContext(D)
    worst = mpmath.mpf(0)
    ok = True
    for ident, params, target in LIMITS:
        r = identities.verify_limit(ident, params, "a", target, ctx)
        worst = max(worst, r.abs_diff)
        ok = ok and r.abs_diff <= mpmath.mpf("1e-8")
    report(pytestconfig, 4, ok, f"{len(LIMITS)} limits, worst abs diff {mpmath.nstr(worst, 3)}")
    assert ok


QUAD_POINTS = {
    "koshliakov-w0 (mu = -nu)": ("koshliakov-w0", [
        {"mu": "-0.2", "nu": "0.2", "x": "1"},
        {"mu": "-0.3", "nu": "0.3", "x": "2"},
        {"mu": "-0.1", "nu": "0.1", "x": "1/2"},
    ]),
    "koshliakov-w0": ("koshliakov-w0", identities.default_grid("koshliakov-w0")),
    "self-reciprocal-K": ("self-reciprocal-K", identities.default_grid("self-reciprocal-K")),
    "koshliakov-w1": ("koshliakov-w1", identities.default_grid("koshliakov-w1")),
    "hankel-K": ("hankel-K", identities.default_grid("hankel-K")),
    "mellin-watson": ("mellin-watson", identities.default_grid("mellin-watson")),
}


def test_criterion_5_quadrature(pytestconfig):
    ctx = PrecisionContext(D)
    worst, slowest = mpmath.mpf(0), 0.0
    bad = []
    for label, (ident, grid) in QUAD_POINTS.items():
        assert len(grid) >= 3
        for params in grid:
            t0 = time.perf_counter()
            r = identities.verify(ident, params, ctx)
            dt = time.perf_counter() - t0
            worst, slowest = max(worst, r.abs_diff), max(slowest, dt)
            if not (r.passed and r.abs_diff < QUAD_ABS and dt < 5):
                bad.append((label, params, mpmath.nstr(r.abs_diff, 3), round(dt, 2)))
    ok = not bad
    report(pytestconfig, 5, ok,
           f"worst abs diff {mpmath.nstr(worst, 3)}, slowest check {slowest:.2f} s")
    assert ok, bad


def _asym_ratios(mu, nu, w, ctx, relative_to_prefactor=False):
    out = []
    for m in (0, 1):
        errs = []
        for z in (20, 40):
            with mpmath.workdps(80):
                exact = bessel.mu_k_nu(mu, nu, z, w, PrecisionContext(60)).value
            approx = bessel.mu_k_asymptotic(m, mu, nu, w, z, ctx).value
            e = abs(exact - approx)
            if relative_to_prefactor:
                e /= abs(bessel._asym_prefactor(to_mp(mu), to_mp(nu), to_mp(w), mpmath.mpf(z)))
            errs.append(e)
        out.append((m, errs[1] / errs[0]))
    return out


def test_criterion_6_asymptotic_order(pytestconfig):
    ctx = PrecisionContext(D)
    with ctx.workdps():
        ratios = _asym_ratios("1/2", "1/2", "1/4", ctx)
        side = _asym_ratios("0", "1/2", "1/4", ctx, relative_to_prefactor=True)
    inside = [2.0 ** (-2 * m - 2) / 2 <= r <= 2.0 * 2 ** (-2 * m - 2) for m, r in ratios]
    side_inside = [2.0 ** (-2 * m - 2) / 2 <= r <= 2.0 * 2 ** (-2 * m - 2) for m, r in side]
    ok = all(inside)
    detail = ", ".join(f"m={m} ratio {mpmath.nstr(r, 3)}" for m, r in ratios)
    detail += "; at (0,1/2,1/4) relative to the leading factor: "
    detail += ", ".join(f"m={m} ratio {mpmath.nstr(r, 3)}" for m, r in side)
    report(pytestconfig, 6, ok, detail)
    assert all(side_inside), side
    assert ok, ratios


def test_criterion_7_oracles(pytestconfig):
    ctx = PrecisionContext(D)
    tol = mpmath.mpf(10) ** -(D - 5)
    bad = []
    for k in range(1, 7):
        for n in range(51):
            if arith.rk(k, n) != arith.rk_brute(k, n):
                bad.append(("rk", k, n))
    with mpmath.workdps(60):
        for m in range(5):
            for z in ("1/2", "1", "2"):
                zz = to_mp(z)
                got = classic.psi_series_closed(m, zz, ctx).value
                ref = mpmath.nsum(lambda j: mpmath.digamma(2 * j + 2 * m + 1) * zz ** (2 * j)
                                  / (mpmath.rf(m + 1, j) * mpmath.rf(m + mpmath.mpf(1) / 2, j)),
                                  [0, mpmath.inf])
                if abs(got - ref) > tol * abs(ref):
                    bad.append(("psi", m, z))
        for m in range(4):
            for x in ("0.5", "2", "6.5"):
                xx = to_mp(x)
                got = bessel.onef2_integer_reduction(m, xx, ctx).value
                ref = mpmath.hyp1f2(1, m + 1, m + mpmath.mpf(1) / 2, xx * xx) / mpmath.factorial(2 * m)
                if abs(got - ref) > tol * abs(ref):
                    bad.append(("onef2", m, x))
    for m in range(4):
        for z in ("0.5", "1", "3"):
            zz = to_mp(z)
            with ctx.workdps():
                got = bessel.mu_k_half_closed(m, zz, ctx)
                ref = bessel.mu_k_nu(mpmath.mpf(1) / 2, -(2 * m + 1) * mpmath.mpf(1) / 2, zz, 0, ctx)
                if abs(got.value - ref.value) > tol * abs(got.value) + got.abs_error + ref.abs_error:
                    bad.append(("mu_k_half", m, z))
    ok = not bad
    report(pytestconfig, 7, ok, "rk, psi_series_closed, onef2_integer_reduction, mu_k_half_closed"
           + ("" if ok else f" mismatches {bad[:5]}"))
    assert ok, bad


def _random_calls(rng: random.Random, count: int):
    def real(lo, hi):
        return mpmath.mpf(rng.randint(int(lo * 1000), int(hi * 1000))) / 1000

    makers = [
        lambda: ("gamma", classic.gamma, (real(0.1, 20),)),
        lambda: ("zeta", classic.zeta, (real(1.1, 12),)),
        lambda: ("digamma", classic.digamma, (real(0.2, 30),)),
        lambda: ("bernoulli", classic.bernoulli, (2 * rng.randint(1, 20),)),
        lambda: ("pfq", lambda a, b1, b2, z, c: classic.pfq([a], [b1, b2], z, c),
                 (real(0.1, 3), real(0.5, 3), real(0.5, 3), real(-10, 10))),
        lambda: ("ei", classic.ei, (real(0.1, 20),)),
        lambda: ("shi", classic.shi, (real(0.1, 20),)),
        lambda: ("besselj", bessel.besselj, (real(0, 3), real(0.1, 10))),
        lambda: ("besseli", bessel.besseli, (real(0, 3), real(0.1, 10))),
        lambda: ("sigma", arith.sigma, (real(-3, 3), rng.randint(1, 5000))),
        lambda: ("lattice_zeta", arith.lattice_zeta, (rng.choice([2, 4, 6, 8]), real(5, 9))),
        lambda: ("onef2_integer_reduction", bessel.onef2_integer_reduction, (rng.randint(0, 3), real(0.1, 20))),
        lambda: ("mu_k_half_closed", bessel.mu_k_half_closed, (rng.randint(0, 3), real(0.1, 10))),
        lambda: ("lambert_power", lambda a, y, c: series.lambert_power(a, y, c)[0], (real(-4, 4), real(0.3, 3))),
        lambda: ("theta_rk", lambda k, z, c: series.theta_rk(k, z, c)[0], (rng.randint(1, 6), real(0.3, 3))),
    ]
    return [rng.choice(makers)() for _ in range(count)]


def test_criterion_8_precision_doubling(pytestconfig):
    lo, hi = PrecisionContext(30), PrecisionContext(60)
    rng = random.Random(20260101)
    rigorous, bad = 0, []
    for name, fn, args in _random_calls(rng, 200):
        v30 = fn(*args, lo)
        if not v30.rigorous:
            continue
        v60 = fn(*args, hi)
        rigorous += 1
        with mpmath.workdps(90):
            diff = abs(v60.value - v30.value)
            if diff > v30.abs_error + v60.abs_error:
                bad.append((name, [mpmath.nstr(a, 8) for a in args], mpmath.nstr(diff, 3),
                            mpmath.nstr(v30.abs_error, 3)))
    ok = rigorous >= 100 and not bad
    report(pytestconfig, 8, ok, f"{rigorous} rigorous calls, {len(bad)} outside the 30-digit bound")
    assert rigorous >= 100
    assert not bad, bad
