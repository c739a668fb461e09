"""Convergence experiments at desk scale.

Monte Carlo draws come from keyed streams (one per sample index), and work
is split into fixed chunks whose results are concatenated in chunk order,
so the output does not depend on the number of worker threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ..arith import distinct_primes, primes_up_to, totient, unit_group_structure
from ..characters import Character
from ..functionals import (
    L_functional_principal,
    L_omega_truncated_batch,
    L_pointwise_all,
    L_truncated,
    L_truncated_all,
    euler_product_functional_batch,
    gaussian_part_batch,
    partial_L_pointwise_all,
    truncated_coefficients,
)
from ..oracles import (
    E_M1M2_closed,
    E_analytic_closed,
    S_M_bound,
    enumeration_variance,
    fourier_tail,
    gaussian_covariance_closed,
    prime_power_log_series,
    prime_tail_estimate,
    variance_kernel_sum,
)
from ..randmodel import RandomStream, multiplicative_angles, sample_omega_angles
from ..testfn import TestFunction, build_cache
from ..zetafn import covariance_kernel, zeta
from .config import CompactRect, ExhaustionSpec, ExperimentConfig
from .metrics import (
    cauchy_sup,
    ecf_distance,
    energy_distance,
    energy_from_distances,
    exhaustion_points,
    frechet_matrix,
    split_half,
    sup_norm_on_rect,
)
from .report import ExperimentResult

CHUNK = 500
ANALYTIC_RECT = CompactRect(0.75, 2.0, -2.0, 2.0, 11, 33)


def parallel_map(fn, items, workers: int = 1) -> list:
    """``[fn(x) for x in items]``, optionally on a thread pool; order is always preserved."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def omega_angles(N: int, seed: int, n_samples: int, workers: int = 1, tag: str = "omega") -> np.ndarray:
    """Prime angles for samples 0..n_samples-1, sample j from stream ``(seed, tag, j)``."""
    stream = RandomStream(seed, (tag,))
    starts = range(0, n_samples, CHUNK)
    parts = parallel_map(lambda s: sample_omega_angles(N, stream, min(CHUNK, n_samples - s), start=s), starts, workers)
    return np.concatenate(parts, axis=0)


def _chunked(fn, theta: np.ndarray, workers: int) -> np.ndarray:
    starts = range(0, theta.shape[0], CHUNK)
    return np.concatenate(parallel_map(lambda s: fn(theta[s : s + CHUNK]), starts, workers), axis=0)


def _mean_se(z: np.ndarray):
    """Sample mean and its standard error ``sqrt(mean |z - mean|^2 / n)``."""
    m = z.mean(axis=0)
    se = np.sqrt(np.mean(np.abs(z - m) ** 2, axis=0) / z.shape[0])
    return m, se


def zeta_l1_norm(f: TestFunction) -> float:
    """``int |f(x) zeta(1/2 + ix)| dx``."""
    g = TestFunction(f.center, f.width, abs(f.amplitude))
    val, _, _ = g.integrate(lambda x: np.abs(zeta(0.5 + 1j * np.asarray(x))), tol=1e-8)
    return float(val)


def _strictly_decreasing(vals) -> bool:
    return all(b < a for a, b in zip(vals, vals[1:]))


def run_qM_convergence(config: ExperimentConfig, workers: int = 1) -> ExperimentResult:
    """``E_{q,M} = E|L_q(f) - L_{M,q}(f)|^2`` over the (q, M) grid.

    The non-principal part comes from the kernel double sum, the principal
    part from ``|L^0_q(f) - L^0_{M,q}(f)|^2 / phi(q)``.  Up to
    ``enumeration_max_q`` the kernel value is checked against a full
    average over characters.
    """
    res = ExperimentResult("qM_convergence", config)
    f = config.test_function
    L = config.L_cutoff
    enum_max = int(config.tol("enumeration_max_q", 211))
    # the kernel route is O(q); only the enumeration cross-check is O(q^2)
    q_limit = int(config.tol("max_q", 10**5))
    if max(config.q_grid) > q_limit:
        raise ValueError(f"qM_convergence is limited to q <= {q_limit}")
    cache = build_cache(f, max(L * max(config.q_grid), 1 << 17))
    l1 = zeta_l1_norm(f)
    two_route = config.tol("two_route_rel", 1e-6)

    def per_q(q):
        phi = totient(q)
        L0 = L_functional_principal(f, q).value
        chi0 = Character(q, (0,) * len(unit_group_structure(q).orders))
        out = []
        for M in config.M_grid:
            ks = variance_kernel_sum(q, M, cache, L)
            E2 = abs(L0 - L_truncated(cache, chi0, M)) ** 2 / phi
            enum = enumeration_variance(q, M, cache, L) if q <= enum_max else None
            out.append((M, ks, E2, enum))
        return q, phi, out, L0

    for q, phi, out, L0 in parallel_map(per_q, config.q_grid, workers):
        bound = l1**2 * 4 ** len(distinct_primes(q))
        res.add("principal_sq", abs(L0) ** 2, q=q, seed=config.seed)
        res.add("principal_sq_bound", bound, q=q, seed=config.seed)
        res.check(f"|L0_q(f)|^2 <= ||f zeta||_1^2 4^omega(q) at q={q}", abs(L0) ** 2 <= bound)
        for M, ks, E2, enum in out:
            tags = dict(q=q, M1=M, seed=config.seed)
            E = ks.total + E2
            res.add("E1", ks.total, **tags)
            res.add("E2", E2, **tags)
            res.add("E", E, **tags)
            res.add("S_M", ks.S_M, **tags)
            res.add("S_L_plus_conj", 2 * ks.S_L.real, **tags)
            res.add("S_LL", ks.S_LL, **tags)
            res.add("S_M_bound", S_M_bound(q, M, cache), **tags)
            res.add("fourier_tail", fourier_tail(cache, M), **tags)
            # |L0 - L0_M| <= |L0| + sum_{n <= M} |a_n|
            diff_bound = (math.sqrt(bound) + float(np.sum(np.abs(truncated_coefficients(cache, M))))) ** 2
            res.add("E2_scaled", phi * E2, **tags)
            res.add("E2_scaled_bound", diff_bound, **tags)
            res.check(f"E2 scaled bound q={q} M={M}", phi * E2 <= diff_bound, f"{phi * E2:.3e} <= {diff_bound:.3e}")
            if enum is not None:
                res.add("E1_enumeration", enum, **tags)
                rel = abs(enum - ks.total) / max(abs(enum), 1e-300)
                res.check(f"two-route identity q={q} M={M}", rel <= two_route, f"relative difference {rel:.2e}")
    # the principal term grows with M at small q, so monotonicity is asked only at the top modulus
    q_top = max(config.q_grid)
    E_top = [res.value("E", q=q_top, M1=M) for M in config.M_grid]
    res.check(f"E decreasing in M at q={q_top}", _strictly_decreasing(E_top), str(E_top))
    for M in config.M_grid:
        E = res.value("E", q=q_top, M1=M)
        tail = res.value("fourier_tail", q=q_top, M1=M)
        res.check(f"E within 2x of tail q={q_top} M={M}", tail / 2 <= E <= 2 * tail, f"E={E:.4e} tail={tail:.4e}")
    return res


def run_fixedM_law(config: ExperimentConfig, workers: int = 1) -> ExperimentResult:
    """Exact law of ``L_{M,q}(f)`` (all characters, uniform weights) against Monte Carlo ``L_{M,omega}(f)``."""
    res = ExperimentResult("fixedM_law", config)
    f = config.test_function
    M = config.M_grid[0]
    if M > 50:
        raise ValueError("fixedM_law keeps M <= 50")
    cache = build_cache(f, max(M, 1))
    primes = primes_up_to(M)
    theta = omega_angles(M, config.seed, config.samples, workers)
    cloud = _chunked(lambda th: L_omega_truncated_batch(cache, th, primes, M), theta, workers)
    a, b = split_half(cloud)
    floor_ecf, floor_energy = ecf_distance(a, b), energy_distance(a, b)
    tags = dict(M1=M, N=M, seed=config.seed)
    res.add("floor_ecf", floor_ecf, **tags)
    res.add("floor_energy", floor_energy, **tags)

    def per_q(q):
        exact = L_truncated_all(cache, q, M)
        return q, ecf_distance(exact, cloud), energy_distance(exact, cloud)

    ecfs, energies = [], []
    for q, d_ecf, d_en in parallel_map(per_q, config.q_grid, workers):
        res.add("ecf_distance", d_ecf, q=q, **tags)
        res.add("energy_distance", d_en, q=q, **tags)
        ecfs.append(d_ecf)
        energies.append(d_en)
    if len(config.q_grid) > 1:
        res.check("ECF distance strictly decreasing in q", _strictly_decreasing(ecfs), str(ecfs))
        res.check("energy distance strictly decreasing in q", _strictly_decreasing(energies), str(energies))
    k = config.tol("floor_factor", 3.0)
    res.check(f"final ECF distance below {k:g}x floor", ecfs[-1] < k * floor_ecf, f"{ecfs[-1]:.4e} vs {floor_ecf:.4e}")
    res.check(
        f"final energy distance below {k:g}x floor",
        energies[-1] < k * floor_energy,
        f"{energies[-1]:.4e} vs {floor_energy:.4e}",
    )
    return res


def run_M1M2_equivalence(config: ExperimentConfig, workers: int = 1) -> ExperimentResult:
    """Closed form of ``E|L_{M1,omega}(f) - zeta_{M2,rand}(f)|^2`` against Monte Carlo, pairing the M1 and M2 grids."""
    res = ExperimentResult("M1M2_equivalence", config)
    if len(config.M1_grid) != len(config.M2_grid):
        raise ValueError("M1_grid and M2_grid are paired and must have equal length")
    f = config.test_function
    pairs = list(zip(config.M1_grid, config.M2_grid))
    P = max(max(config.M1_grid), max(config.M2_grid))
    cache = build_cache(f, max(config.M1_grid))
    primes = primes_up_to(P)
    theta = omega_angles(P, config.seed, config.samples, workers)
    k = config.tol("se_factor", 5.0)
    closed_vals = []
    for M1, M2 in pairs:
        tags = dict(M1=M1, M2=M2, N=M2, seed=config.seed)
        closed = E_M1M2_closed(cache, M1, M2)
        closed_vals.append(closed)

        def diff(th, M1=M1, M2=M2):
            A = L_omega_truncated_batch(cache, th, primes, M1)
            B = euler_product_functional_batch(f, th, primes, M2)
            return np.abs(A - B) ** 2

        d = _chunked(diff, theta, workers)
        mean, se = _mean_se(d)
        res.add("closed_form", closed, **tags)
        res.add("monte_carlo", float(mean), ci_low=float(mean - k * se), ci_high=float(mean + k * se), **tags)
        res.add("monte_carlo_se", float(se), **tags)
        if (M1, M2) == (1, 1):
            res.check("(1,1) closed form is exactly 0", closed == 0.0, f"{closed!r}")
        res.check(
            f"closed form within {k:g} SE at ({M1},{M2})",
            abs(mean - closed) <= k * se + 1e-14,
            f"|{mean:.5e} - {closed:.5e}| vs {k * se:.2e}",
        )
    decay = [v for (M1, M2), v in zip(pairs, closed_vals) if (M1, M2) != (1, 1)]
    if len(decay) > 1:
        res.check("closed form decreasing along the grid", _strictly_decreasing(decay), str(decay))
    return res


def _character_subset(phi: int, k: int) -> np.ndarray:
    """Up to k non-principal character indices spread evenly over 1..phi-1."""
    if phi - 1 <= k:
        return np.arange(1, phi)
    return np.unique(np.linspace(1, phi - 1, k).round().astype(np.int64))


def run_analytic_convergence(config: ExperimentConfig, workers: int = 1) -> ExperimentResult:
    """Pointwise analogue on K = [0.75, 2] x [-2, 2]: sup-norm errors, closed forms, Frechet laws and the Cauchy-ring check."""
    res = ExperimentResult("analytic_convergence", config)
    K = ANALYTIC_RECT
    s_grid = K.grid()
    on_line = np.isclose(s_grid.real, 1.0)

    def per_q(q):
        Lall = L_pointwise_all(s_grid, q)[1:]
        out = []
        for M in config.M_grid:
            d = np.abs(Lall - partial_L_pointwise_all(s_grid, q, M)[1:]) ** 2
            sup_sq = d.reshape(d.shape[0], -1).max(axis=1)
            line_sq = d[:, on_line].max(axis=1)
            out.append((M, float(sup_sq.mean()), float(line_sq.mean())))
        return q, out

    for q, out in parallel_map(per_q, config.q_grid, workers):
        line_vals = []
        for M, sup_mean, line_mean in out:
            res.add("sup_sq_mean", sup_mean, q=q, M1=M, seed=config.seed)
            res.add("sigma1_sup_sq_mean", line_mean, q=q, M1=M, sigma=1.0, seed=config.seed)
            line_vals.append(line_mean)
        res.check(f"sigma=1 error decreasing in M at q={q}", _strictly_decreasing(line_vals), str(line_vals))

    closed_M = sorted(set(config.M_grid) | {10, 100, 1000})
    closed = [E_analytic_closed(1.0, M, M) for M in closed_M]
    for M, v in zip(closed_M, closed):
        res.add("E_analytic_closed", v, M1=M, M2=M, sigma=1.0)
    res.check("closed form decreasing in M at sigma=1", _strictly_decreasing(closed), str(closed))
    res.check("closed form below 1e-3 by M=1000", closed[closed_M.index(1000)] < 1e-3, f"{closed[-1]:.3e}")

    # law comparison in the Frechet metric at fixed M
    M = config.M_grid[0]
    n_terms = int(config.tol("frechet_terms", 3))
    n_law = int(config.tol("frechet_samples", 200))
    pts, masks = exhaustion_points(ExhaustionSpec(points_per_unit=4), n_terms)
    n = np.arange(1, M + 1)
    powers = np.exp(-np.log(n.astype(float))[:, None] * pts[None, :])
    theta = omega_angles(M, config.seed, n_law, workers, tag="frechet")
    om = np.exp(2j * np.pi * multiplicative_angles(theta, primes_up_to(M), M)[:, 1:])
    omega_vals = om @ powers
    d_yy = frechet_matrix(omega_vals, masks, n_terms)
    for q in config.q_grid:
        chars = partial_L_pointwise_all(pts, q, M)[_character_subset(totient(q), n_law)]
        both = np.concatenate([chars, omega_vals])
        D = frechet_matrix(both, masks, n_terms)
        k = chars.shape[0]
        stat = energy_from_distances(D[:k, k:], D[:k, :k], d_yy)
        res.add("frechet_energy", stat, q=q, M1=M, seed=config.seed)
        res.check(f"Frechet energy non-negative q={q}", stat >= 0)
        res.check(
            f"Frechet axioms on sampled pairs q={q}",
            np.allclose(np.diag(D), 0) and np.allclose(D, D.T, atol=1e-15) and D.max() <= 1,
        )

    # Cauchy-ring cross-check of the sup over K
    q = config.q_grid[0]
    chi_idx = 1
    delta = config.tol("cauchy_delta", 0.1)

    def g(s):
        s = np.asarray(s, dtype=complex)
        return L_pointwise_all(s, q)[chi_idx] - partial_L_pointwise_all(s, q, M)[chi_idx]

    direct = sup_norm_on_rect(g, CompactRect(K.sigma_min, K.sigma_max, K.t_min, K.t_max, 6, 17), rel_tol=0.01)
    ring = cauchy_sup(g, CompactRect(K.sigma_min, K.sigma_max, K.t_min, K.t_max, 6, 17), delta=delta)
    rel = abs(direct - ring) / direct
    res.add("cauchy_direct_sup", direct, q=q, M1=M)
    res.add("cauchy_ring_sup", ring, q=q, M1=M)
    res.check("Cauchy-ring sup within 5% of grid sup", rel <= config.tol("cauchy_rel", 0.05), f"relative {rel:.2e}")
    return res


def run_covariance_check(config: ExperimentConfig, workers: int = 1) -> ExperimentResult:
    """Second moments of ``G_N`` on an (x, y) grid, and the prime-sum kernel against log zeta(1 + iu)."""
    res = ExperimentResult("covariance_check", config)
    N = config.N_grid[0]
    x = np.asarray(config.x_grid, dtype=float)
    primes = primes_up_to(N)
    theta = omega_angles(N, config.seed, config.samples, workers)
    G = _chunked(lambda th: gaussian_part_batch(x, th, primes, N), theta, workers)
    k = config.tol("se_factor", 5.0)
    for i in range(x.size):
        for j in range(i, x.size):
            tags = dict(N=N, t=float(x[i] - x[j]), seed=config.seed)
            pm, pse = _mean_se(G[:, i] * G[:, j])
            cm, cse = _mean_se(G[:, i] * G[:, j].conj())
            closed = gaussian_covariance_closed(x[i] - x[j], N)
            res.add("pseudo_covariance", complex(pm), ci_low=-k * pse, ci_high=k * pse, **tags)
            res.add("covariance", complex(cm), ci_low=-k * cse, ci_high=k * cse, **tags)
            res.add("covariance_closed", closed, **tags)
            res.check(
                f"pseudo-covariance ~ 0 at x={x[i]:g}, y={x[j]:g}", abs(pm) <= k * pse, f"{abs(pm):.2e} vs {k * pse:.2e}"
            )
            res.check(
                f"covariance ~ closed form at x={x[i]:g}, y={x[j]:g}",
                abs(cm - closed) <= k * cse,
                f"{abs(cm - closed):.2e} vs {k * cse:.2e}",
            )

    u = np.asarray(config.u_grid or (0.5, 1.0, 1.5, 2.0, 2.5, 3.0), dtype=float)
    N_kernel = int(config.tol("kernel_N", 10**6))
    series = prime_power_log_series(u, N_kernel)
    tail = prime_tail_estimate(u, N_kernel)
    for ui, si, ti in zip(u, series, tail):
        logz = covariance_kernel(float(ui))
        tags = dict(N=N_kernel, t=float(ui))
        res.add("log_zeta", logz, **tags)
        res.add("prime_power_series", complex(si), **tags)
        res.add("kernel_gap", abs(si - logz), **tags)
        res.add("kernel_gap_tail_corrected", abs(si + ti - logz), **tags)
    gaps = np.abs(series - covariance_kernel(u))
    corrected = np.abs(series + tail - covariance_kernel(u))
    res.check(
        "prime-power series within 1e-3 of log zeta(1+iu)",
        gaps.max() <= config.tol("kernel_tol", 1e-3),
        f"max gap {gaps.max():.3e}",
    )
    res.check(
        "prime-power series plus prime tail within 1e-4 of log zeta(1+iu)",
        corrected.max() <= 1e-4,
        f"max gap {corrected.max():.3e}",
    )
    return res


RUNNERS = {
    "qM_convergence": run_qM_convergence,
    "fixedM_law": run_fixedM_law,
    "M1M2_equivalence": run_M1M2_equivalence,
    "analytic_convergence": run_analytic_convergence,
    "covariance_check": run_covariance_check,
}


def run_experiment(config: ExperimentConfig, workers: int = 1) -> ExperimentResult:
    return RUNNERS[config.experiment](config, workers)
