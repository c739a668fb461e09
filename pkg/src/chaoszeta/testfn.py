"""Compactly supported bump test functions and their Fourier transforms.

The transform convention is ``fhat(k) = int f(x) exp(-2*pi*i*x*k) dx``.
All integrals over the support use composite Gauss-Legendre panels; the
bump vanishes to all orders at the ends of its support, so no endpoint
treatment is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

DEFAULT_ORDER = 20
DEFAULT_TOL = 1e-10
MAX_PANELS = 4096
_CHUNK = 4096


class QuadratureError(RuntimeError):
    def __init__(self, message: str, achieved: float):
        super().__init__(f"{message} (achieved error estimate {achieved:.3e})")
        self.achieved = achieved


@lru_cache(maxsize=16)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def composite_rule(a: float, b: float, panels: int, order: int = DEFAULT_ORDER):
    """Nodes and weights of ``panels`` equal Gauss-Legendre panels on [a, b]."""
    x, w = gauss_legendre(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    return (mid[:, None] + half[:, None] * x).ravel(), (half[:, None] * w).ravel()


def _bump(y: np.ndarray) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    out = np.zeros_like(y)
    inside = np.abs(y) < 1
    out[inside] = np.exp(-1.0 / (1.0 - y[inside] ** 2))
    return out


@dataclass(frozen=True)
class TestFunction:
    """``f(x) = A * exp(-1 / (1 - ((x - c) / w)^2))`` on ``|x - c| < w``, zero elsewhere."""

    __test__ = False  # not a pytest class

    center: float = 0.0
    width: float = 1.0
    amplitude: float = 1.0

    def __post_init__(self):
        if not self.width > 0:
            raise ValueError(f"half-width must be positive, got {self.width}")

    @property
    def support(self) -> tuple[float, float]:
        return self.center - self.width, self.center + self.width

    def __call__(self, x):
        return self.amplitude * _bump((np.asarray(x, dtype=float) - self.center) / self.width)

    def scaled(self, factor: float) -> "TestFunction":
        return TestFunction(self.center, self.width, self.amplitude * factor)

    def quadrature(self, panels: int = 32, order: int = DEFAULT_ORDER):
        """Nodes ``x`` and weights ``w * f(x)`` for integrals of ``f * g`` over the support."""
        x, w = composite_rule(*self.support, panels, order)
        return x, w * self(x)

    def integrate(self, g, tol: float = DEFAULT_TOL, panels: int = 16, order: int = DEFAULT_ORDER):
        """``int f(x) g(x) dx`` with panel doubling until successive values agree to ``tol``.

        ``g`` maps an array of nodes to an array of values.  Returns
        ``(value, error_estimate, panels_used)``.
        """
        prev = None
        while panels <= MAX_PANELS:
            x, wf = self.quadrature(panels, order)
            val = np.dot(wf, g(x))
            if prev is not None:
                err = abs(val - prev)
                if err <= tol * max(1.0, abs(val)):
                    return val, err, panels
            prev = val
            panels *= 2
        raise QuadratureError("integral over the support did not converge", err)

    def l1_norm(self) -> float:
        """``int |f|``, which also bounds ``|fhat|`` everywhere."""
        x, w = composite_rule(-1.0, 1.0, 64)
        return abs(self.amplitude) * self.width * float(np.dot(w, _bump(x)))

    def l2_norm_sq(self) -> float:
        x, w = composite_rule(-1.0, 1.0, 64)
        return self.amplitude**2 * self.width * float(np.dot(w, _bump(x) ** 2))


def _centered_transform(k: np.ndarray, panels: int, order: int = DEFAULT_ORDER) -> np.ndarray:
    """``int_{-1}^{1} bump(y) cos(2*pi*y*k) dy`` for each k (unit bump, unit width)."""
    y, w = composite_rule(0.0, 1.0, panels, order)
    wb = 2.0 * w * _bump(y)
    out = np.empty(k.shape)
    flat_k = k.ravel()
    flat = out.reshape(-1)
    for s in range(0, flat_k.size, _CHUNK):
        kk = flat_k[s : s + _CHUNK]
        # row-wise pairwise sums keep every entry independent of the chunking
        flat[s : s + _CHUNK] = (np.cos(2 * np.pi * np.outer(kk, y)) * wb).sum(axis=1)
    return out


@lru_cache(maxsize=64)
def _panels_for(tol: float, kmax: float) -> int:
    """Panel count (on [0, 1]) resolving the unit bump transform up to frequency kmax."""
    ref = np.linspace(0.0, kmax, 129)
    panels = 4
    prev = _centered_transform(ref, panels)
    while panels < MAX_PANELS:
        panels *= 2
        cur = _centered_transform(ref, panels)
        err = float(np.max(np.abs(cur - prev)))
        if err <= tol:
            return panels
        prev = cur
    raise QuadratureError(f"bump transform unresolved at kmax={kmax}", err)


def _frequency_bucket(kmax: float) -> float:
    return max(4.0, 2.0 ** math.ceil(math.log2(max(kmax, 1e-300))))


def fourier_at(f: TestFunction, k, tol: float = DEFAULT_TOL):
    """``fhat(k)`` for scalar or array ``k``; complex unless the center is 0."""
    k_arr = np.asarray(k, dtype=float)
    scaled = f.width * k_arr
    # tolerance for the unit bump such that the scaled values meet ``tol``
    scale = abs(f.amplitude) * f.width
    unit_tol = min(max(tol / scale if scale else tol, 1e-14), 1e-6)
    panels = _panels_for(unit_tol, _frequency_bucket(float(np.max(np.abs(scaled), initial=0.0))))
    vals = f.amplitude * f.width * _centered_transform(np.abs(scaled), panels)
    if f.center != 0.0:
        vals = vals * np.exp(-2j * np.pi * k_arr * f.center)
    else:
        vals = vals.astype(complex)
    return complex(vals) if vals.ndim == 0 else vals


@dataclass(frozen=True)
class FourierCache:
    """``fhat(log n / 2pi)`` for n = 1..n_max (``values[n - 1]``)."""

    f: TestFunction
    n_max: int
    tol: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.values.setflags(write=False)

    def __getitem__(self, n: int) -> complex:
        if not 1 <= n <= self.n_max:
            raise IndexError(f"n={n} outside cache range 1..{self.n_max}")
        return complex(self.values[n - 1])

    def upto(self, M: int) -> np.ndarray:
        """``fhat(log n / 2pi)`` for n = 1..M."""
        if M > self.n_max:
            raise ValueError(f"cache holds n <= {self.n_max}, asked for {M}")
        return self.values[:M]

    def hat(self, n) -> np.ndarray:
        """Values at arbitrary n, computed directly beyond the cached range."""
        n = np.asarray(n, dtype=np.int64)
        out = np.empty(n.shape, dtype=complex)
        inside = (n >= 1) & (n <= self.n_max)
        out[inside] = self.values[n[inside] - 1]
        if not inside.all():
            out[~inside] = log_fourier(self.f, n[~inside], self.tol)
        return out


def log_fourier(f: TestFunction, n, tol: float = DEFAULT_TOL) -> np.ndarray:
    """``fhat(log n / 2pi)`` for integer array n >= 1."""
    n = np.asarray(n)
    return np.asarray(fourier_at(f, np.log(n.astype(float)) / (2 * np.pi), tol), dtype=complex)


def build_cache(f: TestFunction, n_max: int, tol: float = DEFAULT_TOL) -> FourierCache:
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    return FourierCache(f, int(n_max), tol, log_fourier(f, np.arange(1, n_max + 1), tol))


def verify_decay(f: TestFunction, k_order: int, n_min: int, n_max: int, tol: float = DEFAULT_TOL) -> float:
    """``max_{n_min <= n <= n_max} |fhat(log n / 2pi)| * (log n)^k_order``.

    A value that stays put as ``n_max`` grows witnesses the bound
    ``|fhat(log n / 2pi)| <= C_k (log n)^-k``.
    """
    if k_order < 0 or not 2 <= n_min < n_max:
        raise ValueError("need k_order >= 0 and 2 <= n_min < n_max")
    n = np.arange(n_min, n_max + 1)
    return float(np.max(np.abs(log_fourier(f, n, tol)) * np.log(n) ** k_order))
