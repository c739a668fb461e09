"""Riemann zeta by Euler-Maclaurin summation, the principal L-function and log zeta(1 + iu)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith import distinct_primes


class PoleProximityError(ValueError):
    pass


class ToleranceError(RuntimeError):
    pass


class BranchError(RuntimeError):
    pass


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n (B_1 = -1/2)."""
    B = [Fraction(1)]
    for m in range(1, n + 1):
        B.append(-sum(math.comb(m + 1, j) * B[j] for j in range(m)) / (m + 1))
    return B[n]


@dataclass(frozen=True)
class ZetaEvalConfig:
    """``cutoff=None`` lets the cutoff grow from ``|Im s|`` until the remainder bound meets ``tol``."""

    cutoff: int | None = None
    bernoulli_terms: int = 8
    tol: float = 1e-10
    max_cutoff: int = 1 << 16


DEFAULT_CONFIG = ZetaEvalConfig()


def _em_coefficients(J: int) -> np.ndarray:
    return np.array([float(bernoulli(2 * j) / math.factorial(2 * j)) for j in range(1, J + 2)])


def _rising(s: np.ndarray, m: int) -> np.ndarray:
    out = np.ones_like(s)
    for i in range(m):
        out = out * (s + i)
    return out


def euler_maclaurin_tail(s: np.ndarray, a: np.ndarray, J: int, regularized: bool = False):
    """``sum_{m >= 0} (a + m)^-s`` for ``a > 0`` large enough, and its remainder bound.

    Uses ``int_a^inf + g(a)/2 - sum_j B_2j/(2j)! g^(2j-1)(a)`` with
    ``g(x) = x^-s``; the remainder is bounded by the first omitted term
    times ``|s + 2J + 1| / (Re s + 2J + 1)``.

    ``regularized=True`` drops the a-independent constant ``1/(s - 1)``
    from the integral term, which keeps the result finite at s = 1.
    Differences over ``a`` (such as character-weighted sums) are unchanged.
    """
    s = np.asarray(s, dtype=complex)
    a = np.asarray(a, dtype=float)
    sigma = s.real
    a_s = a ** (-s)
    if regularized:
        # (a^(1-s) - 1) / (s - 1) = -log(a) * expm1(z) / z with z = (1 - s) log a
        z = (1 - s) * np.log(a)
        safe = np.where(z == 0, 1.0, z)
        ratio = np.where(z == 0, 1.0, np.expm1(safe) / safe)
        total = -np.log(a) * ratio + 0.5 * a_s
    else:
        total = a * a_s / (s - 1) + 0.5 * a_s
    coef = _em_coefficients(J)
    # g^(2j-1)(a) = -s(s+1)...(s+2j-2) a^(-s-2j+1)
    for j in range(1, J + 1):
        total = total + coef[j - 1] * _rising(s, 2 * j - 1) * a_s * a ** (-(2 * j - 1))
    bound = (
        abs(coef[J])
        * np.abs(_rising(s, 2 * J + 1))
        * np.abs(a_s)
        * a ** (-(2 * J + 1))
        * np.abs(s + 2 * J + 1)
        / (sigma + 2 * J + 1)
    )
    return total, bound


def _check_domain(s: np.ndarray, cfg: ZetaEvalConfig):
    if np.any(np.abs(s - 1) < 1e-3):
        raise PoleProximityError("zeta evaluated within 1e-3 of the pole at s = 1")
    if np.any(s.real <= -2 * cfg.bernoulli_terms):
        raise ToleranceError("Euler-Maclaurin configuration cannot reach this far left")


def zeta_with_bound(s, cfg: ZetaEvalConfig = DEFAULT_CONFIG):
    """Value of zeta(s) and a bound on the Euler-Maclaurin remainder."""
    s_arr = np.atleast_1d(np.asarray(s, dtype=complex))
    _check_domain(s_arr, cfg)
    J = cfg.bernoulli_terms
    if cfg.cutoff is not None:
        N = np.full(s_arr.shape, cfg.cutoff)
    else:
        N = np.maximum(10, np.ceil(np.abs(s_arr) / 2)).astype(np.int64)
    vals = np.empty(s_arr.shape, dtype=complex)
    bounds = np.empty(s_arr.shape)
    for idx in np.ndindex(s_arr.shape):
        si, Ni = s_arr[idx], int(N[idx])
        while True:
            tail, b = euler_maclaurin_tail(si, float(Ni), J)
            if b <= cfg.tol or cfg.cutoff is not None:
                break
            if Ni >= cfg.max_cutoff:
                raise ToleranceError(f"tolerance {cfg.tol} not reached at s={si} with cutoff {Ni}")
            Ni *= 2
        n = np.arange(1, Ni, dtype=float)
        vals[idx] = np.sum(n ** (-si)) + tail
        bounds[idx] = b
    if np.ndim(s) == 0:
        return complex(vals[0]), float(bounds[0])
    return vals.reshape(np.shape(s)), bounds.reshape(np.shape(s))


def zeta(s, cfg: ZetaEvalConfig = DEFAULT_CONFIG):
    """Riemann zeta off the pole; guaranteed tolerance for Re s >= 1/2, |Im s| <= 1e3."""
    return zeta_with_bound(s, cfg)[0]


def principal_L(s, q: int, cfg: ZetaEvalConfig = DEFAULT_CONFIG):
    """``L(s, chi_0) = zeta(s) * prod_{p | q} (1 - p^-s)``."""
    if q < 1:
        raise ValueError("modulus must be positive")
    s_arr = np.asarray(s, dtype=complex)
    factor = np.ones(s_arr.shape, dtype=complex)
    for p in distinct_primes(q):
        factor = factor * (1 - float(p) ** (-s_arr))
    out = zeta(s_arr, cfg) * factor
    return complex(out) if np.ndim(s) == 0 else out


def covariance_kernel(u, cfg: ZetaEvalConfig = DEFAULT_CONFIG, path_step: float = 0.05):
    """Principal branch of ``log zeta(1 + iu)``, the covariance of the limiting field.

    The argument is also tracked continuously along the line Re s = 1 from
    near the pole (where zeta(1 + iv) ~ 1/(iv)); a disagreement with the
    principal value raises :class:`BranchError`.
    """
    u_arr = np.atleast_1d(np.asarray(u, dtype=float))
    if np.any(np.abs(u_arr) < 1e-3):
        raise PoleProximityError("covariance kernel needs |u| >= 1e-3")
    out = np.empty(u_arr.shape, dtype=complex)
    for i, ui in enumerate(u_arr):
        z = zeta(1 + 1j * ui, cfg)
        principal = np.log(z)
        sign = math.copysign(1.0, ui)
        steps = max(2, int(math.ceil((abs(ui) - 1e-3) / path_step)) + 1)
        path = sign * np.linspace(1e-3, abs(ui), steps)
        arg = np.unwrap(np.angle(zeta(1 + 1j * path, cfg)))
        # near the pole the argument is -pi/2 * sign(u), fixing the branch
        arg += 2 * np.pi * np.round((-sign * np.pi / 2 - arg[0]) / (2 * np.pi))
        if abs(arg[-1] - principal.imag) > 1e-6:
            raise BranchError(
                f"continuous argument {arg[-1]:.6f} differs from principal {principal.imag:.6f} at u={ui}"
            )
        out[i] = principal
    return complex(out[0]) if np.ndim(u) == 0 else out.reshape(np.shape(u))
