"""Smoothed and pointwise L-objects.

Notation: ``a_n = n^-1/2 fhat(log n / 2pi)``, so that for a non-principal
character ``L_q(f) = sum chi(n) a_n`` (a conditionally convergent series),
``L_{M,q}(f)`` is its partial sum up to M and ``L_{M,omega}(f)`` the same
with omega_n in place of chi(n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import distinct_primes, totient, unit_group_structure
from .characters import Character, character_table, render
from .randmodel import OmegaAssignment, multiplicative_angles
from .testfn import FourierCache, QuadratureError, TestFunction, fourier_at
from .zetafn import DEFAULT_CONFIG, ZetaEvalConfig, euler_maclaurin_tail, zeta

FOURIER_SERIES = "fourier-series"
QUADRATURE = "quadrature"


class PrincipalCharacterError(ValueError):
    pass


class CutoffExhaustedError(RuntimeError):
    pass


@dataclass(frozen=True)
class FunctionalValue:
    """A computed functional with the cutoff used and a bound on what was left out."""

    value: complex
    cutoff: int
    tail_bound: float
    method: str

    def __post_init__(self):
        if not self.tail_bound >= 0:
            raise ValueError("tail bound must be non-negative")
        if self.method not in (FOURIER_SERIES, QUADRATURE):
            raise ValueError(f"unknown method tag {self.method!r}")

    @property
    def error_budget(self) -> float:
        return self.tail_bound


def _require_nonprincipal(chi: Character):
    if chi.is_principal:
        raise PrincipalCharacterError("the series representation needs a non-principal character")


def _coefficients(f: TestFunction, n: np.ndarray, cache: FourierCache | None = None) -> np.ndarray:
    n = np.asarray(n, dtype=np.int64)
    if cache is not None and cache.f == f:
        fh = cache.hat(n)
    else:
        fh = np.asarray(fourier_at(f, np.log(n) / (2 * np.pi)), dtype=complex)
    return fh / np.sqrt(n)


def _abs_moment(f: TestFunction) -> float:
    """``int |x f(x)| dx``; bounds ``|fhat'| / 2pi``."""
    val, _, _ = TestFunction(0.0, f.width, abs(f.amplitude)).integrate(lambda y: np.abs(y + f.center), tol=1e-8)
    return float(val)


def coefficient_variation(f: TestFunction, N: float, grid_per_unit: int = 400, span: float = 60.0) -> float:
    """Total variation of ``x -> x^-1/2 fhat(log x / 2pi)`` on ``[N, inf)``.

    Sampled on a fine grid in ``u = log x`` over ``[log N, log N + span]``;
    the remainder beyond is bounded by ``e^-u/2 (||f||_1 + 2 ||x f||_1)``.
    """
    u0 = math.log(N)
    u = np.linspace(u0, u0 + span, int(span * grid_per_unit) + 1)
    b = np.exp(-u / 2) * np.asarray(fourier_at(f, u / (2 * np.pi)), dtype=complex)
    tv = float(np.sum(np.abs(np.diff(b))))
    tv += math.exp(-(u0 + span) / 2) * (f.l1_norm() + 2 * _abs_moment(f))
    return tv


def max_partial_character_sum(chi: Character) -> float:
    """``max_x |sum_{n <= x} chi(n)|`` over one period (the sums are periodic for chi != chi_0)."""
    vals = chi.values(np.arange(1, chi.q + 1))
    return float(np.max(np.abs(np.cumsum(vals))))


def L_functional(
    f: TestFunction,
    cache: FourierCache | None,
    chi: Character,
    tol: float = 1e-5,
    max_cutoff: int = 1 << 22,
    min_cutoff: int = 1 << 10,
) -> FunctionalValue:
    """``L_q(f) = sum chi(n) a_n`` summed over complete periods.

    The remainder after ``N = K q`` terms is bounded by Abel summation:
    the largest partial character sum times the total variation of
    ``a_x`` on ``[N, inf)``.  The cutoff doubles until that bound is
    below ``tol``.
    """
    _require_nonprincipal(chi)
    q = chi.q
    P = max_partial_character_sum(chi)
    period = chi.values(np.arange(1, q + 1))
    K = max(1, -(-min_cutoff // q))
    total = 0j
    done = 0
    while True:
        N = K * q
        n = np.arange(done + 1, N + 1)
        if n.size:
            # period values tile exactly since blocks are complete
            total += complex(np.sum(np.tile(period, n.size // q) * _coefficients(f, n, cache)))
        done = N
        bound = P * coefficient_variation(f, N + 1)
        if bound <= tol:
            return FunctionalValue(total, N, bound, FOURIER_SERIES)
        if 2 * N > max_cutoff:
            raise CutoffExhaustedError(f"tail bound {bound:.3e} above {tol:.1e} at cutoff {N}")
        K *= 2


def L_functional_quadrature(f: TestFunction, chi: Character, tol: float = 1e-9) -> FunctionalValue:
    """``int f(x) L(1/2 + ix, chi) dx`` with the pointwise L-function; a second route to L_q(f)."""
    _require_nonprincipal(chi)
    val, err, panels = f.integrate(lambda x: L_pointwise(0.5 + 1j * x, chi, tol=1e-12), tol=tol)
    return FunctionalValue(complex(val), panels, float(err), QUADRATURE)


def _principal_factor(s: np.ndarray, q: int) -> np.ndarray:
    out = np.ones(s.shape, dtype=complex)
    for p in distinct_primes(q):
        out = out * (1 - float(p) ** (-s))
    return out


def L_functional_principal(
    f: TestFunction, q: int, cfg: ZetaEvalConfig = DEFAULT_CONFIG, tol: float = 1e-9
) -> FunctionalValue:
    """``int f(x) zeta(1/2 + ix) prod_{p | q}(1 - p^(-1/2 - ix)) dx`` over the support of f."""
    if q < 1:
        raise ValueError("modulus must be positive")
    if f.amplitude == 0:
        return FunctionalValue(0j, 0, 0.0, QUADRATURE)

    def integrand(x):
        s = 0.5 + 1j * np.asarray(x)
        return zeta(s, cfg) * _principal_factor(s, q)

    val, err, panels = f.integrate(integrand, tol=tol)
    return FunctionalValue(complex(val), panels, float(err), QUADRATURE)


def _check_cache(cache: FourierCache, M: int):
    if M > cache.n_max:
        raise ValueError(f"cache holds n <= {cache.n_max}, asked for M={M}")
    if M < 0:
        raise ValueError("M must be non-negative")


def truncated_coefficients(cache: FourierCache, M: int) -> np.ndarray:
    """``a_n`` for n = 1..M."""
    _check_cache(cache, M)
    return cache.upto(M) / np.sqrt(np.arange(1, M + 1))


def L_truncated(cache: FourierCache, chi: Character, M: int) -> complex:
    """``L_{M,q}(f) = sum_{n <= M} chi(n) a_n`` (exact finite sum)."""
    a = truncated_coefficients(cache, M)
    return complex(np.dot(chi.values(np.arange(1, M + 1)), a)) if M else 0j


def L_truncated_all(cache: FourierCache, q: int, M: int) -> np.ndarray:
    """``L_{M,q}(f)`` for every character mod q, in enumeration order."""
    a = truncated_coefficients(cache, M)
    if M == 0:
        return np.zeros(totient(q), dtype=complex)
    d = unit_group_structure(q).exponent
    table = character_table(q, np.arange(1, M + 1))
    return render(table, d) @ a


def L_omega_truncated(cache: FourierCache, assignment: OmegaAssignment, M: int) -> complex:
    """``L_{M,omega}(f) = sum_{n <= M} omega_n a_n``."""
    if M > assignment.N:
        raise ValueError(f"omega_n for n <= {M} needs primes up to {M}, assignment stops at {assignment.N}")
    return complex(L_omega_truncated_batch(cache, assignment.angles[None, :], assignment.primes, M)[0])


def L_omega_truncated_batch(cache: FourierCache, theta: np.ndarray, primes: np.ndarray, M: int) -> np.ndarray:
    """``L_{M,omega}(f)`` for each row of prime angles ``theta``."""
    a = truncated_coefficients(cache, M)
    if M == 0:
        return np.zeros(theta.shape[0], dtype=complex)
    ang = multiplicative_angles(theta, primes, M)[:, 1:]
    return np.exp(2j * np.pi * ang) @ a


def _log_euler_product(s: np.ndarray, omega: np.ndarray, primes: np.ndarray) -> np.ndarray:
    """``-sum_p log(1 - omega_p p^-s)`` for s of any shape; omega is 1-D over primes."""
    s = np.asarray(s, dtype=complex)
    out = np.zeros(s.shape, dtype=complex)
    logp = np.log(primes.astype(float))
    flat = s.reshape(-1)
    res = out.reshape(-1)
    for i in range(0, flat.size, 1024):
        z = omega[None, :] * np.exp(-flat[i : i + 1024, None] * logp[None, :])
        # |z| <= 2^-Re(s) < 1 keeps every factor in the right half-plane
        res[i : i + 1024] = -np.sum(np.log1p(-z), axis=1)
    return out


def _assignment_prefix(assignment: OmegaAssignment, N: int):
    if N > assignment.N:
        raise ValueError(f"assignment covers primes <= {assignment.N}, asked for N={N}")
    k = int(np.searchsorted(assignment.primes, N, side="right"))
    return assignment.primes[:k], assignment.values[:k]


def euler_product_pointwise(s, assignment: OmegaAssignment, N: int):
    """``prod_{p <= N} (1 - omega_p p^-s)^-1`` for Re s > 1/2."""
    primes, omega = _assignment_prefix(assignment, N)
    s_arr = np.asarray(s, dtype=complex)
    if np.any(s_arr.real <= 0.5):
        raise ValueError("the randomized Euler product is used only for Re s > 1/2")
    out = np.exp(_log_euler_product(s_arr, omega, primes))
    return complex(out) if out.ndim == 0 else out


def log_euler_product_pointwise(s, assignment: OmegaAssignment, N: int):
    """Principal-branch sum ``-sum_{p <= N} log(1 - omega_p p^-s)``."""
    primes, omega = _assignment_prefix(assignment, N)
    out = _log_euler_product(np.asarray(s, dtype=complex), omega, primes)
    return complex(out) if out.ndim == 0 else out


def euler_product_functional(
    f: TestFunction, assignment: OmegaAssignment, N: int, tol: float = 1e-10
) -> FunctionalValue:
    """``zeta_{N,rand}(f) = int f(x) prod_{p <= N} (1 - omega_p p^(-1/2 - ix))^-1 dx``."""
    primes, omega = _assignment_prefix(assignment, N)
    val, err, panels = f.integrate(lambda x: np.exp(_log_euler_product(0.5 + 1j * x, omega, primes)), tol=tol)
    return FunctionalValue(complex(val), panels, float(err), QUADRATURE)


def euler_product_functional_batch(
    f: TestFunction, theta: np.ndarray, primes: np.ndarray, N: int, panels: int = 32
) -> np.ndarray:
    """``zeta_{N,rand}(f)`` for every row of prime angles, on one fixed quadrature rule."""
    k = int(np.searchsorted(primes, N, side="right"))
    x, wf = f.quadrature(panels)
    if k == 0:
        return np.full(theta.shape[0], np.sum(wf), dtype=complex)
    logp = np.log(primes[:k].astype(float))
    # p^(-1/2 - ix) on the nodes, shape (nodes, primes)
    base = np.exp(-(0.5 + 1j * x)[:, None] * logp[None, :])
    out = np.empty(theta.shape[0], dtype=complex)
    for i in range(0, theta.shape[0], 256):
        om = np.exp(2j * np.pi * theta[i : i + 256, :k])
        logs = -np.log1p(-om[:, None, :] * base[None, :, :]).sum(axis=2)
        out[i : i + 256] = np.exp(logs) @ wf
    return out


def gaussian_part(x, assignment: OmegaAssignment, N: int):
    """``G_N(x) = sum_{p <= N} omega_p p^(-1/2 - ix)``, the first-order term of the log Euler product."""
    primes, _ = _assignment_prefix(assignment, N)
    out = gaussian_part_batch(x, assignment.angles[None, : primes.size], primes, N)[0]
    return complex(out) if np.ndim(x) == 0 else out


def gaussian_part_batch(x, theta: np.ndarray, primes: np.ndarray, N: int) -> np.ndarray:
    """``G_N(x)`` for each row of prime angles; shape ``(rows,) + shape(x)``."""
    k = int(np.searchsorted(primes, N, side="right"))
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    logp = np.log(primes[:k].astype(float))
    base = np.exp(-(0.5 + 1j * x_arr.ravel())[None, :] * logp[:, None])  # (primes, x)
    out = np.exp(2j * np.pi * theta[:, :k]) @ base
    return out.reshape((theta.shape[0],) + np.shape(x))


def residue_class_sums(s, q: int, tol: float = 1e-12, bernoulli_terms: int = 8, max_blocks: int = 1 << 14):
    """Class sums ``R_a(s)`` for a = 1..q with ``L(s, chi) = sum_a chi(a) R_a(s)`` for chi != chi_0.

    The first K blocks are summed directly and the rest of each class by
    Euler-Maclaurin, ``q^-s sum_{m >= 0} (K + a/q + m)^-s``, regularized so
    that every ``R_a`` is finite at s = 1.  ``R_a`` therefore equals
    ``sum_{n = a mod q} n^-s`` only up to a constant shared by all classes,
    which the character weights cancel.  K doubles until the summed
    remainder bounds fall below ``tol``.
    """
    s = complex(s)
    a = np.arange(1, q + 1, dtype=float)
    K = max(4, int(math.ceil(abs(s) / q)) + 2)
    while True:
        tails, bounds = euler_maclaurin_tail(s, K + a / q, bernoulli_terms, regularized=True)
        scale = float(q) ** (-s)
        bound = abs(scale) * float(np.sum(bounds))
        if bound <= tol or K >= max_blocks:
            break
        K *= 2
    if bound > tol:
        raise CutoffExhaustedError(f"remainder bound {bound:.3e} above {tol:.1e} with {K} blocks")
    n = np.arange(1, K * q + 1, dtype=float).reshape(K, q)
    direct = np.sum(n ** (-s), axis=0)
    return direct + scale * tails, bound, K


def L_pointwise(s, chi: Character, tol: float = 1e-10):
    """``L(s, chi) = sum chi(n) n^-s`` for non-principal chi, Re s > 1/2 (scalar or array s)."""
    _require_nonprincipal(chi)
    s_arr = np.asarray(s, dtype=complex)
    if np.any(s_arr.real < 0.5):
        raise ValueError("pointwise evaluation is guaranteed only for Re s >= 1/2")
    vals = chi.values(np.arange(1, chi.q + 1))
    out = np.empty(s_arr.shape, dtype=complex)
    for idx in np.ndindex(s_arr.shape):
        R, _, _ = residue_class_sums(s_arr[idx], chi.q, tol=tol)
        out[idx] = np.dot(vals, R)
    return complex(out) if out.ndim == 0 else out


def L_pointwise_all(s, q: int, tol: float = 1e-10) -> np.ndarray:
    """``L(s, chi)`` for all characters mod q at the points s; shape ``(phi(q),) + shape(s)``.

    Row 0 belongs to the principal character, which the class sums do not
    represent; it is filled with NaN.
    """
    s_arr = np.asarray(s, dtype=complex)
    d = unit_group_structure(q).exponent
    V = render(character_table(q, np.arange(1, q + 1)), d)
    R = np.empty((q,) + s_arr.shape, dtype=complex)
    for idx in np.ndindex(s_arr.shape):
        R[(slice(None),) + idx] = residue_class_sums(s_arr[idx], q, tol=tol)[0]
    out = np.tensordot(V, R, axes=(1, 0))
    out[0] = np.nan
    return out


def partial_L_pointwise_all(s, q: int, M: int) -> np.ndarray:
    """``sum_{n <= M} chi(n) n^-s`` for all characters mod q; shape ``(phi(q),) + shape(s)``."""
    s_arr = np.asarray(s, dtype=complex)
    d = unit_group_structure(q).exponent
    n = np.arange(1, M + 1)
    V = render(character_table(q, n), d)
    powers = np.exp(-np.log(n.astype(float))[:, None] * s_arr.reshape(-1)[None, :])
    return (V @ powers).reshape((V.shape[0],) + s_arr.shape)


__all__ = [
    "CutoffExhaustedError",
    "FunctionalValue",
    "L_functional",
    "L_functional_principal",
    "L_functional_quadrature",
    "L_omega_truncated",
    "L_omega_truncated_batch",
    "L_pointwise",
    "L_pointwise_all",
    "L_truncated",
    "L_truncated_all",
    "PrincipalCharacterError",
    "QuadratureError",
    "euler_product_functional",
    "euler_product_functional_batch",
    "euler_product_pointwise",
    "gaussian_part",
    "gaussian_part_batch",
    "log_euler_product_pointwise",
    "partial_L_pointwise_all",
    "residue_class_sums",
    "truncated_coefficients",
]
