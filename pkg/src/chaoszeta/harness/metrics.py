"""Distances between empirical laws of complex-valued samples, and sup-norm machinery on the half-plane."""

from __future__ import annotations

import numpy as np

from .config import CompactRect, ExhaustionSpec

# frequency points (t1, t2) of the characteristic-function distance
ECF_AXIS = np.linspace(-2.0, 2.0, 5)
_CHUNK = 2048


def _mean_abs_diff(x: np.ndarray, y: np.ndarray) -> float:
    """``mean |x_i - y_j|`` over all pairs, in row chunks with a fixed summation order."""
    total = 0.0
    for i in range(0, x.size, _CHUNK):
        total += float(np.abs(x[i : i + _CHUNK, None] - y[None, :]).sum())
    return total / (x.size * y.size)


def energy_distance(x, y) -> float:
    """``2 E|X - Y| - E|X - X'| - E|Y - Y'|`` for two clouds of points in the plane (V-statistic, >= 0)."""
    x = np.asarray(x, dtype=complex).ravel()
    y = np.asarray(y, dtype=complex).ravel()
    d = 2 * _mean_abs_diff(x, y) - _mean_abs_diff(x, x) - _mean_abs_diff(y, y)
    return max(d, 0.0)


def ecf(x, axis: np.ndarray = ECF_AXIS) -> np.ndarray:
    """Empirical characteristic function ``mean exp(i (t1 Re x + t2 Im x))`` on the grid ``axis x axis``."""
    x = np.asarray(x, dtype=complex).ravel()
    t1, t2 = np.meshgrid(axis, axis, indexing="ij")
    phase = t1.ravel()[:, None] * x.real[None, :] + t2.ravel()[:, None] * x.imag[None, :]
    return np.exp(1j * phase).mean(axis=1).reshape(t1.shape)


def ecf_distance(x, y, axis: np.ndarray = ECF_AXIS) -> float:
    """``max_t |phi_x(t) - phi_y(t)|`` over the fixed frequency grid."""
    return float(np.max(np.abs(ecf(x, axis) - ecf(y, axis))))


def split_half(x):
    x = np.asarray(x).ravel()
    h = x.size // 2
    return x[:h], x[h : 2 * h]


def sup_norm_on_rect(g, K: CompactRect, rel_tol: float = 0.01, max_refine: int = 4) -> float:
    """``max |g|`` over the grid of K, refined until one doubling moves it by less than ``rel_tol``.

    ``g`` maps an array of points s to values.  If the refinement budget
    runs out the last value is returned; :func:`sup_norm_refinement` exposes
    the sequence.
    """
    return sup_norm_refinement(g, K, rel_tol, max_refine)[-1]


def sup_norm_refinement(g, K: CompactRect, rel_tol: float = 0.01, max_refine: int = 4) -> list[float]:
    vals = [float(np.max(np.abs(g(K.grid()))))]
    for _ in range(max_refine):
        K = K.refined()
        vals.append(float(np.max(np.abs(g(K.grid())))))
        if abs(vals[-1] - vals[-2]) <= rel_tol * max(abs(vals[-1]), 1e-300):
            break
    return vals


def frechet_distance(g1, g2, exhaustion: ExhaustionSpec = ExhaustionSpec(), n_terms: int = 4) -> float:
    """``sum_{n <= n_terms} 2^-n d_n / (1 + d_n)`` with ``d_n`` the grid sup of |g1 - g2| on K_n.

    The omitted part of the series is at most :func:`frechet_tail_bound`.
    """
    total = 0.0
    for n in range(1, n_terms + 1):
        s = exhaustion.rect(n).grid()
        d = float(np.max(np.abs(np.asarray(g1(s)) - np.asarray(g2(s)))))
        total += 2.0**-n * d / (1 + d)
    return total


def frechet_tail_bound(n_terms: int) -> float:
    return 2.0**-n_terms


def frechet_matrix(values: np.ndarray, masks: list[np.ndarray], n_terms: int) -> np.ndarray:
    """Pairwise Frechet distances for functions tabulated on a shared point set.

    ``values`` has one row per function; ``masks[n-1]`` selects the points
    of K_n.  Returns the series without the ``2^-n_terms`` tail term.
    """
    k = values.shape[0]
    out = np.zeros((k, k))
    for n in range(1, n_terms + 1):
        v = values[:, masks[n - 1]]
        d = np.empty((k, k))
        for i in range(k):
            d[i] = np.max(np.abs(v[i][None, :] - v), axis=1)
        out += 2.0**-n * d / (1 + d)
    return out


def exhaustion_points(exhaustion: ExhaustionSpec, n_terms: int):
    """The union of the grids of K_1..K_n and a mask per K_n into it."""
    grids = [exhaustion.rect(n).grid().ravel() for n in range(1, n_terms + 1)]
    pts = np.concatenate(grids)
    masks, start = [], 0
    for g in grids:
        m = np.zeros(pts.size, dtype=bool)
        m[start : start + g.size] = True
        masks.append(m)
        start += g.size
    return pts, masks


def energy_from_distances(dxy: np.ndarray, dxx: np.ndarray, dyy: np.ndarray) -> float:
    """Energy statistic from precomputed distance matrices."""
    return max(2 * float(dxy.mean()) - float(dxx.mean()) - float(dyy.mean()), 0.0)


def cauchy_sup(g, K: CompactRect, delta: float = 0.1, nodes_per_edge: int = 256) -> float:
    """``max |g|`` over the grid of K, with g on K rebuilt from its values on the boundary of K' = K + delta.

    Cauchy's formula ``g(s) = (2 pi i)^-1 oint g(z) / (z - s) dz`` over the
    boundary of K'; the boundary stays at distance delta from K so the
    quadrature is smooth.
    """
    ring = K.enlarged(delta)
    z, dz = ring.boundary_rule(nodes_per_edge, panels=max(1, nodes_per_edge // 16))
    gz = np.asarray(g(z))
    s = K.grid().ravel()
    vals = (gz * dz)[None, :] / (z[None, :] - s[:, None])
    return float(np.max(np.abs(vals.sum(axis=1) / (2j * np.pi))))
