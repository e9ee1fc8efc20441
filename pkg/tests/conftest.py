from __future__ import annotations

import mpmath
import pytest

from modid.precision import PrecisionContext


@pytest.fixture
def ctx():
    return PrecisionContext(30)


def close(a, b, rel=None, abs_tol=0, digits=25):
    """|a - b| <= rel * max(|a|, |b|) + abs_tol with rel = 10^-digits by default."""
    rel = mpmath.mpf(10) ** (-digits) if rel is None else rel
    a, b = mpmath.mpmathify(a), mpmath.mpmathify(b)
    return abs(a - b) <= rel * max(abs(a), abs(b)) + abs_tol


def oracle(fn, *args, dps=80):
    """Reference value from mpmath at a much higher precision."""
    with mpmath.workdps(dps):
        return fn(*args)
