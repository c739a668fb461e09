import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chaoszeta.zetafn import (
    PoleProximityError,
    ZetaEvalConfig,
    bernoulli,
    covariance_kernel,
    principal_L,
    zeta,
    zeta_with_bound,
)

ZETA_HALF = -1.46035450880958681289  # mpmath, 30 digits
LOG_ZETA_1_PLUS_I = complex(0.0903084973166064162, -1.00996743976037162087)
LOG_ZETA_1_PLUS_HALF_I = complex(0.716363658546778281, -1.28431442473871144877)


def test_bernoulli():
    from fractions import Fraction

    assert [bernoulli(n) for n in (0, 2, 4, 6, 12)] == [1, Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-691, 2730)]


def test_zeta_examples():
    assert abs(zeta(2) - math.pi**2 / 6) <= 1e-10
    assert abs(zeta(0.5) - ZETA_HALF) <= 1e-10
    assert abs(zeta(0.5 + 14.134725j)) <= 1e-3


def test_pole_rejected():
    with pytest.raises(PoleProximityError):
        zeta(1.0005)
    assert np.isfinite(zeta(1.002))


@given(st.floats(0.5, 4), st.floats(-60, 60))
@settings(max_examples=60, deadline=None)
def test_zeta_against_mpmath(sigma, t):
    s = complex(sigma, t)
    if abs(s - 1) < 1e-3:
        return
    ref = complex(mpmath.zeta(s))
    assert abs(zeta(s) - ref) <= 1e-10 * max(1.0, abs(ref))


def test_remainder_bound_reported():
    val, bound = zeta_with_bound(2 + 5j)
    assert 0 <= bound <= 1e-10


@pytest.mark.parametrize("sigma", [0.5, 0.75, 0.99, 1.01, 2.0])
@pytest.mark.parametrize("t", [0.0, 5.0, 50.0])
def test_cutoff_doubling(sigma, t):
    s = complex(sigma, t)
    a = zeta(s)
    base = max(16, int(abs(t)) + 16)
    b = zeta(s, ZetaEvalConfig(cutoff=2 * base))
    c = zeta(s, ZetaEvalConfig(cutoff=base))
    assert abs(a - b) <= 1e-10 and abs(b - c) <= 1e-10


def test_direct_series_region():
    s = 3 + 1j
    n = np.arange(1, 20001)
    direct = np.sum(n ** (-s))
    # tail beyond 20000 bounded by the integral 20000^(1 - 3) / 2
    assert abs(zeta(s) - direct) <= 20000.0**-2 / 2 + 1e-10


def test_principal_L():
    assert principal_L(2, 1) == zeta(2)
    assert abs(principal_L(2, 2) - math.pi**2 / 8) <= 1e-9
    assert abs(principal_L(2, 6) - zeta(2) * (1 - 1 / 4) * (1 - 1 / 9)) <= 1e-12
    assert principal_L(0.6 + 3j, 12) == pytest.approx(principal_L(0.6 + 3j, 6), abs=1e-14)


def test_principal_L_direct_series():
    s, q = 2.5 + 1j, 7
    n = np.arange(1, 200001)
    n = n[n % q != 0]
    assert abs(principal_L(s, q) - np.sum(n ** (-s))) <= 1e-8


def test_covariance_kernel():
    assert abs(covariance_kernel(1.0) - LOG_ZETA_1_PLUS_I) <= 1e-10
    assert abs(covariance_kernel(0.5) - LOG_ZETA_1_PLUS_HALF_I) <= 1e-10
    u = np.array([0.3, 1.0, 2.7])
    assert np.allclose(covariance_kernel(-u), np.conj(covariance_kernel(u)), atol=1e-14)
    with pytest.raises(ValueError):
        covariance_kernel(1e-4)


def test_kernel_small_u_behaviour():
    # zeta(1 + iu) ~ 1/(iu) so Re log zeta - log(1/u) stays bounded
    u = np.array([1e-3, 3e-3, 1e-2, 3e-2, 1e-1])
    d = covariance_kernel(u).real - np.log(1 / u)
    assert np.all(np.abs(d) < 0.1)
    assert np.ptp(d) < 0.1
