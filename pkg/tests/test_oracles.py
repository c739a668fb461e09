import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chaoszeta.arith import primes_up_to, totient
from chaoszeta.characters import enumerate_characters, orthogonality_sum
from chaoszeta.oracles import (
    E_M1M2_closed,
    E_M1M2_terms,
    E_analytic_closed,
    KernelSumSpec,
    NonSummableError,
    S_M_bound,
    character_moment,
    enumeration_variance,
    exact_expectation,
    gaussian_covariance_closed,
    iter_smooth,
    kernel_double_sum,
    lemma_sum_ratio2,
    lemma_sum_ratio2_direct,
    lemma_sum_ratio2_raw,
    lemma_sum_ratio3,
    lemma_sum_zero,
    prime_power_correction,
    prime_power_log_series,
    prime_tail_estimate,
    reciprocal_euler_product,
    smooth_numbers,
    smooth_series,
    variance_kernel_sum,
)
from chaoszeta.testfn import TestFunction, build_cache
from chaoszeta.zetafn import covariance_kernel

F = TestFunction()
CACHE = build_cache(F, 1 << 12)
# mpmath at 25 digits: closed form at (M1, M2) = (8, 2) with the 2-smooth tail summed to 2^79
E_8_2 = 0.11828627369330318826
# sum over 3-smooth n of |fhat(log n / 2pi)|^2 / n, mpmath
SMOOTH3_SQ = 0.43501709054244999957


@pytest.mark.parametrize(
    "spec",
    [
        KernelSumSpec(7),
        KernelSumSpec(12, weight="square"),
        KernelSumSpec(10, weight="random", weight_seed=3),
        KernelSumSpec(30, m=2, s=1, weight="power", a=3),
    ],
)
def test_lemma_sum_zero_examples(spec):
    scale = np.sum(np.abs(spec.weights()))
    assert abs(lemma_sum_zero(spec)) <= 1e-9 * scale


@given(st.integers(2, 500), st.integers(0, 3), st.integers(0, 3), st.integers(0, 10**6))
@settings(max_examples=50, deadline=None)
def test_lemma_sum_zero_random(q, m, s, seed):
    spec = KernelSumSpec(q, m=m, s=s, weight="random", weight_seed=seed)
    assert abs(lemma_sum_zero(spec)) <= 1e-9 * max(1.0, np.sum(np.abs(spec.weights())))


def test_kernel_spec_validation():
    with pytest.raises(ValueError):
        KernelSumSpec(1)
    with pytest.raises(ValueError):
        KernelSumSpec(5, sigma=0.4)


@given(st.integers(2, 300), st.integers(0, 2), st.integers(0, 2), st.sampled_from([0.5, 0.75, 1.0]))
@settings(max_examples=40, deadline=None)
def test_ratio2_fast_matches_direct(q, a, b, sigma):
    assert lemma_sum_ratio2_raw(q, a, b, sigma) == pytest.approx(lemma_sum_ratio2_direct(q, a, b, sigma), rel=1e-10)


def test_ratio2_examples():
    for q in (10, 101, 1000, 9973, 10**4):
        r = lemma_sum_ratio2(q, 0, 0, 0.5)
        assert r == lemma_sum_ratio2_raw(q, 0, 0, 0.5)
        assert r <= 2 * totient(q) / q
        assert lemma_sum_ratio2_raw(q, 1, 0, 1.0) <= lemma_sum_ratio2_raw(q, 1, 0, 0.5)
    vals = [lemma_sum_ratio2(q, 0, 0, 1.0) for q in (100, 1000, 10**4)]
    assert max(vals) / min(vals) <= 10


def test_ratio3_examples():
    for q in (10, 101, 1000, 10**4):
        assert lemma_sum_ratio3(q, 0, 0, 0.5) <= 4
    for a, b, sigma in ((0, 0, 0.75), (1, 1, 0.5)):
        vals = [lemma_sum_ratio3(q, a, b, sigma) for q in (100, 1000, 10**4)]
        assert max(vals) / min(vals) <= 10


def test_exact_expectation():
    q = 12
    for n, m in ((5, 5), (5, 7), (7, 19)):
        got = exact_expectation(q, lambda chi: chi(n) * np.conj(chi(m)))
        assert abs(got - orthogonality_sum(q, n, m) / totient(q)) <= 1e-12
    assert exact_expectation(q, lambda chi: 1.0) == 1
    assert exact_expectation(q, lambda chi: float(chi.is_principal)) == pytest.approx(1 / totient(q))


def test_character_moment_matches_expectation():
    tuples = [(2, 1, 0), (5, 2, 1)]
    slow = exact_expectation(
        11, lambda chi: np.prod([chi(n) ** k * np.conj(chi(n)) ** m for n, k, m in tuples])
    )
    assert abs(character_moment(11, tuples) - slow) <= 1e-12


def test_kernel_sum_empty_beyond_cutoff():
    assert variance_kernel_sum(11, 33, CACHE, 3).total == 0


@pytest.mark.parametrize("q, M", [(11, 3), (12, 5), (30, 2), (101, 10)])
def test_kernel_sum_routes(q, M):
    ks = variance_kernel_sum(q, M, CACHE, 3)
    literal = kernel_double_sum(q, M, CACHE, 3)
    enum = enumeration_variance(q, M, CACHE, 3)
    assert abs(literal.imag) <= 1e-14
    assert ks.total == pytest.approx(literal.real, rel=1e-10, abs=1e-15)
    assert ks.total == pytest.approx(enum, rel=1e-8)
    assert ks.total == pytest.approx(ks.S_M + ks.S_L.real + ks.S_L_bar.real + ks.S_LL, rel=1e-14)


def test_S_M_bound():
    for q, M in ((101, 10), (211, 5), (1009, 20)):
        ks = variance_kernel_sum(q, M, CACHE, 3)
        assert 0 <= ks.S_M <= S_M_bound(q, M, CACHE)


def test_kernel_sum_cache_guard():
    with pytest.raises(ValueError):
        variance_kernel_sum(2003, 5, CACHE, 3)


def test_smooth_numbers_against_heap():
    for M2, cutoff in ((1, 10), (2, 1000), (5, 10**4), (13, 10**5)):
        assert smooth_numbers(M2, cutoff).tolist() == list(iter_smooth(M2, cutoff))


def test_smooth_series_examples():
    one = smooth_series(1, lambda n: 1.0 / n, 10**6)
    assert one.value == 1 and one.count == 1
    two = smooth_series(2, lambda n: 1.0 / n.astype(float), 2**40)
    assert abs(two.value - 2) <= 2**-40 + 1e-15
    assert abs(2 - two.value) <= two.tail_bound + 1e-15
    three = smooth_series(3, lambda n: n.astype(float) ** -2, 10**6)
    assert abs(three.value - 1.5) <= three.tail_bound + 1e-15
    assert three.tail_bound < 1e-5


def test_smooth_series_rejects_divergent():
    with pytest.raises(NonSummableError):
        smooth_series(3, lambda n: np.ones(n.shape), 1000)


def test_reciprocal_euler_product():
    assert reciprocal_euler_product(3) == pytest.approx(3.0)
    assert reciprocal_euler_product(1) == 1.0


def test_E_M1M2_closed_examples():
    assert E_M1M2_closed(CACHE, 1, 1) == 0.0
    assert abs(E_M1M2_closed(CACHE, 8, 2) - E_8_2) <= 1e-12
    t = E_M1M2_terms(CACHE, 8, 3)
    assert abs(t.third.value - SMOOTH3_SQ) <= t.third.tail_bound + 1e-12
    vals = [E_M1M2_closed(CACHE, M, M) for M in (2, 8, 32, 128)]
    assert all(v > 0 for v in vals)
    assert all(b < a for a, b in zip(vals, vals[1:]))
    with pytest.raises(ValueError):
        E_M1M2_closed(CACHE, 10, 2, cutoff=5)


def test_E_analytic_closed():
    assert E_analytic_closed(1.0, 1, 1) == 0
    v = E_analytic_closed(1.0, 10**4, 10**3)
    assert 0 < v < 1e-2
    assert E_analytic_closed(1.0, 10**4, 2000) < v
    assert E_analytic_closed(1.0, 2 * 10**4, 10**3) < v
    assert E_analytic_closed(1.2, 10**4, 10**3) < v
    assert E_analytic_closed(1.0 + 7j, 50, 10) == E_analytic_closed(1.0, 50, 10)
    # the truncated smooth series converges to the Euler product
    assert E_analytic_closed(1.0, 50, 10, cutoff=10**9) == pytest.approx(E_analytic_closed(1.0, 50, 10), abs=1e-6)
    with pytest.raises(ValueError):
        E_analytic_closed(0.5, 10, 10)


def test_gaussian_covariance_closed():
    assert gaussian_covariance_closed(0.0, 10) == pytest.approx(1 / 2 + 1 / 3 + 1 / 5 + 1 / 7)
    u = np.array([0.5, 2.0])
    assert np.allclose(gaussian_covariance_closed(-u, 1000), np.conj(gaussian_covariance_closed(u, 1000)))


def test_prime_power_series():
    # the prime-power identity reaches log zeta only once the prime tail is restored
    s = prime_power_log_series(1.0, 10**6)
    tail = prime_tail_estimate(1.0, 10**6)
    assert abs(s + tail - covariance_kernel(1.0)) <= 1e-4
    corr = prime_power_correction(1.0, 1000)
    assert abs(corr + gaussian_covariance_closed(1.0, 1000) - prime_power_log_series(1.0, 1000)) <= 1e-14
    p = primes_up_to(1000).astype(float)
    want = np.sum(p ** (-2 * (1 + 1j)) / 2)
    assert abs(prime_power_log_series(1.0, 1000, K=2) - gaussian_covariance_closed(1.0, 1000) - want) <= 1e-14
