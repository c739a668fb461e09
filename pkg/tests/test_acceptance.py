"""Acceptance criteria, each at its stated tolerance and runtime budget.

Run ``pytest tests/test_acceptance.py -v``; the terminal summary lists one
PASS/FAIL line per criterion.
"""

import itertools
import math
import time

import numpy as np
import pytest

from chaoszeta.arith import totient, unit_group_structure
from chaoszeta.characters import character_table, orthogonality_sum, render
from chaoszeta.harness import ExperimentConfig, emit, run_experiment
from chaoszeta.oracles import (
    KernelSumSpec,
    enumeration_variance,
    kernel_double_sum,
    lemma_sum_ratio2,
    lemma_sum_ratio2_direct,
    lemma_sum_ratio2_raw,
    lemma_sum_ratio3,
    lemma_sum_zero,
    variance_kernel_sum,
)
from chaoszeta.randmodel import RandomStream, chi_moment_oracle, omega_moment_oracle
from chaoszeta.testfn import TestFunction, build_cache
from chaoszeta.zetafn import ZetaEvalConfig, zeta

pytestmark = pytest.mark.acceptance


class Budget:
    """Wall-clock guard for a criterion's runtime limit."""

    def __init__(self, seconds):
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.seconds, f"took {self.elapsed:.1f}s, budget {self.seconds}s"


def failed_checks(res):
    return [f"{c.name}: {c.detail}" for c in res.checks if not c.passed]


@pytest.mark.criterion(1, "orthogonality for q <= 50")
def test_criterion_01_orthogonality():
    with Budget(10):
        worst = 0.0
        for q in range(1, 51):
            phi = totient(q)
            for n in range(1, q):
                for m in range(1, q):
                    want = phi if (n == m and math.gcd(n, q) == 1) else 0
                    worst = max(worst, abs(orthogonality_sum(q, n, m) - want))
        assert worst <= 1e-10


BASE = np.array([2, 3, 5, 6])
# every (k_i, m_i) in {0, 1, 2}^2 for each of the four integers
EXPONENTS = np.array(list(itertools.product(range(3), repeat=8))).reshape(-1, 4, 2)


def enumeration_moments(q, exps):
    """Average of prod chi(n_i)^k_i conj(chi(n_i))^m_i over all characters, one row per exponent set."""
    d = unit_group_structure(q).exponent
    T = character_table(q, BASE)  # (phi, 4) angle numerators, -1 where chi vanishes
    active = (exps[:, :, 0] + exps[:, :, 1]) > 0
    vanishes = (active & (T[0] < 0)[None, :]).any(axis=1)
    net = exps[:, :, 0] - exps[:, :, 1]
    out = np.zeros(len(exps), dtype=complex)
    Tc = np.where(T < 0, 0, T)
    for s in range(0, len(exps), 2048):
        ang = (net[s : s + 2048] @ Tc.T) % d
        out[s : s + 2048] = render(ang, d).mean(axis=1)
    out[vanishes] = 0
    return out


def as_tuples(e):
    return [(int(n), int(k), int(m)) for n, (k, m) in zip(BASE, e)]


@pytest.mark.criterion(2, "moment oracles against full enumeration")
def test_criterion_02_moment_oracles():
    with Budget(30):
        tuples = [as_tuples(e) for e in EXPONENTS]
        for q in range(1, 31):
            enum = enumeration_moments(q, EXPONENTS)
            oracle = np.array([chi_moment_oracle(q, t) for t in tuples])
            assert np.max(np.abs(enum - oracle)) <= 1e-10, q
        lhs = np.prod(BASE.astype(float)[None, :] ** EXPONENTS[:, :, 0], axis=1)
        rhs = np.prod(BASE.astype(float)[None, :] ** EXPONENTS[:, :, 1], axis=1)
        omega = np.array([omega_moment_oracle(t) for t in tuples])
        for q in (101, 1009, 10007):
            keep = np.maximum(lhs, rhs) < q
            enum = enumeration_moments(q, EXPONENTS[keep])
            assert np.max(np.abs(enum - omega[keep])) <= 1e-10, q


@pytest.mark.criterion(3, "summation identities and normalized ratios")
def test_criterion_03_summation_lemmas():
    with Budget(60):
        g = RandomStream(2024, ("criterion-3",)).generator()
        qs = g.integers(2, 501, size=50)
        for i, q in enumerate(qs):
            spec = KernelSumSpec(int(q), m=int(g.integers(4)), s=int(g.integers(4)), weight="random", weight_seed=i)
            scale = float(np.sum(np.abs(spec.weights())))
            assert abs(lemma_sum_zero(spec)) <= 1e-9 * scale
        for q in (100, 1000):
            assert lemma_sum_ratio2_raw(q, 1, 1, 0.75) == pytest.approx(lemma_sum_ratio2_direct(q, 1, 1, 0.75), rel=1e-10)
        for ratio in (lemma_sum_ratio2, lemma_sum_ratio3):
            for sigma in (0.5, 0.75, 1.0):
                for a, b in itertools.product((0, 1), repeat=2):
                    vals = [ratio(q, a, b, sigma) for q in (10**2, 10**3, 10**4)]
                    assert min(vals) > 0
                    assert max(vals) / min(vals) <= 10, (ratio.__name__, sigma, a, b, vals)


@pytest.mark.criterion(4, "two-route variance identity")
def test_criterion_04_two_route_identity():
    with Budget(120):
        cache = build_cache(TestFunction(), 3 * 211)
        for q in (101, 211):
            for M in (5, 20):
                ks = variance_kernel_sum(q, M, cache, 3)
                enum = enumeration_variance(q, M, cache, 3)
                literal = kernel_double_sum(q, M, cache, 3).real
                assert abs(enum - ks.total) / enum <= 1e-6
                assert abs(literal - ks.total) / literal <= 1e-6


@pytest.mark.criterion(5, "variance tracks the Fourier tail at q = 10007")
def test_criterion_05_variance_trend():
    with Budget(120):
        cfg = ExperimentConfig("qM_convergence", q_grid=(10007,), M_grid=(10, 50))
        res = run_experiment(cfg, workers=4)
        E = [res.value("E", q=10007, M1=M) for M in (10, 50)]
        tail = [res.value("fourier_tail", q=10007, M1=M) for M in (10, 50)]
        for e, t in zip(E, tail):
            assert t / 2 <= e <= 2 * t
        assert E[1] < E[0]
        assert not failed_checks(res), failed_checks(res)


@pytest.mark.criterion(6, "closed form against Monte Carlo for (M1, M2)")
def test_criterion_06_M1M2():
    with Budget(60):
        cfg = ExperimentConfig("M1M2_equivalence", M1_grid=(1, 8, 32, 128), M2_grid=(1, 2, 8, 32), samples=10_000)
        res = run_experiment(cfg, workers=4)
        assert res.value("closed_form", M1=1, M2=1) == 0.0
        closed = [res.value("closed_form", M1=a, M2=b) for a, b in ((8, 2), (32, 8), (128, 32))]
        assert closed[0] > closed[1] > closed[2] > 0
        for (a, b), c in zip(((8, 2), (32, 8), (128, 32)), closed):
            mc = res.value("monte_carlo", M1=a, M2=b)
            se = res.value("monte_carlo_se", M1=a, M2=b)
            assert abs(mc - c) <= 5 * se
        assert not failed_checks(res), failed_checks(res)


@pytest.mark.criterion(7, "distribution distances shrink along q")
def test_criterion_07_distribution():
    with Budget(300):
        cfg = ExperimentConfig("fixedM_law", q_grid=(101, 1009, 10007), M_grid=(30,), samples=10_000)
        res = run_experiment(cfg, workers=4)
        for stat, floor in (("ecf_distance", "floor_ecf"), ("energy_distance", "floor_energy")):
            d = [res.value(stat, q=q) for q in (101, 1009, 10007)]
            assert all(v >= 0 for v in d)
            assert d[0] > d[1] > d[2], (stat, d)
            assert d[2] < 3 * res.value(floor)
        assert res.value("floor_energy") < res.value("energy_distance", q=101)


@pytest.mark.criterion(8, "zeta engine")
def test_criterion_08_zeta():
    with Budget(10):
        assert abs(zeta(2) - math.pi**2 / 6) <= 1e-10
        assert abs(zeta(0.5 + 14.134725j)) <= 1e-3
        for sigma in (0.5, 0.75, 0.99, 1.01, 2.0):
            for t in (0.0, 5.0, 50.0):
                s = complex(sigma, t)
                J = max(32, int(abs(t)) + 32)
                a = zeta(s, ZetaEvalConfig(cutoff=J))
                b = zeta(s, ZetaEvalConfig(cutoff=2 * J))
                assert abs(a - b) <= 1e-10, s


COVARIANCE = ExperimentConfig(
    "covariance_check",
    N_grid=(1000,),
    x_grid=(-1.0, 0.0, 0.5, 2.0),
    u_grid=(0.5, 1.0, 1.5, 2.0, 2.5, 3.0),
    samples=10_000,
)


@pytest.fixture(scope="module")
def covariance_result():
    start = time.perf_counter()
    res = run_experiment(COVARIANCE, workers=4)
    return res, time.perf_counter() - start


@pytest.mark.criterion(9, "covariance structure of the Gaussian part")
def test_criterion_09_monte_carlo_moments(covariance_result):
    res, elapsed = covariance_result
    assert elapsed < 180
    mc = [c for c in res.checks if "covariance" in c.name]
    assert len(mc) == 20
    assert all(c.passed for c in mc), [c for c in mc if not c.passed]


@pytest.mark.criterion(9, "covariance structure of the Gaussian part")
def test_criterion_09_prime_power_series_matches_log_zeta(covariance_result):
    # The truncated prime-power series omits sum_{p > N} p^(-1 - iu), which is of
    # size 1 / (u log N) ~ 0.14 at u = 0.5, N = 10^6, so the stated 1e-3 is out of
    # reach for any implementation of this quantity.  Kept at the stated tolerance.
    res, _ = covariance_result
    gaps = res.values("kernel_gap")
    assert len(gaps) == 6
    assert max(gaps) <= 1e-3, f"max gap {max(gaps):.3e}"


def test_prime_power_series_with_prime_tail(covariance_result):
    # diagnostic companion: restoring the omitted prime tail closes the gap
    res, _ = covariance_result
    assert max(res.values("kernel_gap_tail_corrected")) <= 1e-4


@pytest.mark.criterion(10, "analytic suite on the half-plane")
def test_criterion_10_analytic():
    with Budget(120):
        cfg = ExperimentConfig("analytic_convergence", q_grid=(101, 211), M_grid=(10, 40, 160))
        res = run_experiment(cfg, workers=4)
        closed = [res.value("E_analytic_closed", M1=M) for M in (10, 40, 100, 160, 1000)]
        assert all(b < a for a, b in zip(closed, closed[1:]))
        assert closed[-1] < 1e-3
        direct, ring = res.value("cauchy_direct_sup"), res.value("cauchy_ring_sup")
        assert abs(direct - ring) <= 0.05 * direct
        assert not failed_checks(res), failed_checks(res)


@pytest.mark.criterion(11, "determinism across worker counts")
def test_criterion_11_determinism():
    with Budget(60):
        configs = [
            ExperimentConfig("M1M2_equivalence", M1_grid=(8, 32), M2_grid=(2, 8), samples=2000, seed=5),
            ExperimentConfig("fixedM_law", q_grid=(101, 1009), M_grid=(12,), samples=2000, seed=5),
            ExperimentConfig("covariance_check", N_grid=(200,), x_grid=(0.0, 1.0), samples=1500, seed=5),
        ]
        for cfg in configs:
            outputs = [emit(run_experiment(cfg, workers=w)) for w in (1, 4, 8, 1)]
            assert len(outputs[0].splitlines()) > 3
            assert all(o == outputs[0] for o in outputs[1:]), cfg.experiment


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-v", "-p", "no:cacheprovider"]))
