"""Experiment configuration, compact rectangles in the half-plane and the compact exhaustion."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from ..testfn import TestFunction, composite_rule

EXPERIMENTS = ("qM_convergence", "fixedM_law", "M1M2_equivalence", "analytic_convergence", "covariance_check")

# grids each experiment reads; others may be left empty
_REQUIRED_GRIDS = {
    "qM_convergence": ("q_grid", "M_grid"),
    "fixedM_law": ("q_grid", "M_grid"),
    "M1M2_equivalence": ("M1_grid", "M2_grid"),
    "analytic_convergence": ("q_grid", "M_grid"),
    "covariance_check": ("N_grid", "x_grid"),
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment run.  ``bump`` holds ``center``, ``width``, ``amplitude``.

    ``tolerances`` overrides named check thresholds (e.g. ``{"se_factor": 5}``).
    """

    experiment: str
    q_grid: tuple[int, ...] = ()
    M_grid: tuple[int, ...] = ()
    M1_grid: tuple[int, ...] = ()
    M2_grid: tuple[int, ...] = ()
    N_grid: tuple[int, ...] = ()
    x_grid: tuple[float, ...] = ()
    u_grid: tuple[float, ...] = ()
    bump: dict = field(default_factory=lambda: {"center": 0.0, "width": 1.0, "amplitude": 1.0})
    seed: int = 0
    samples: int = 10_000
    L_cutoff: int = 3
    output: str | None = None
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; choose from {EXPERIMENTS}")
        for f in fields(self):
            if f.name.endswith("_grid"):
                grid = tuple(getattr(self, f.name))
                object.__setattr__(self, f.name, grid)
                if any(b <= a for a, b in zip(grid, grid[1:])):
                    raise ConfigError(f"{f.name} must be strictly increasing, got {grid}")
        for name in _REQUIRED_GRIDS[self.experiment]:
            if not getattr(self, name):
                raise ConfigError(f"{self.experiment} needs a non-empty {name}")
        if self.samples < 100:
            raise ConfigError(f"samples must be >= 100, got {self.samples}")
        if self.L_cutoff < 1:
            raise ConfigError("L_cutoff must be >= 1")
        object.__setattr__(self, "bump", dict(self.bump))
        object.__setattr__(self, "tolerances", dict(self.tolerances))

    @property
    def test_function(self) -> TestFunction:
        return TestFunction(**self.bump)

    def tol(self, name: str, default: float) -> float:
        return float(self.tolerances.get(name, default))

    def to_dict(self) -> dict:
        d = asdict(self)
        for k, v in d.items():
            if isinstance(v, tuple):
                d[k] = list(v)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        return cls(**d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        return cls.from_dict(json.loads(text))

    def replace(self, **changes) -> "ExperimentConfig":
        d = self.to_dict()
        d.update(changes)
        return type(self).from_dict(d)


def load_config(path) -> ExperimentConfig:
    """Read a config file; a result JSON written by ``emit`` is accepted too."""
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc
    if "records" in data and "config" in data:
        data = data["config"]
    return ExperimentConfig.from_dict(data)


@dataclass(frozen=True)
class CompactRect:
    """``[sigma_min, sigma_max] x [t_min, t_max]`` inside Re s > 1/2, sampled on an ``n_sigma x n_t`` grid."""

    sigma_min: float
    sigma_max: float
    t_min: float
    t_max: float
    n_sigma: int = 21
    n_t: int = 41

    def __post_init__(self):
        if not self.sigma_min > 0.5:
            raise ValueError(f"sigma_min must exceed 1/2, got {self.sigma_min}")
        if not (self.sigma_max >= self.sigma_min and self.t_max >= self.t_min):
            raise ValueError("empty rectangle")
        if self.n_sigma < 2 or self.n_t < 2:
            raise ValueError("grid needs at least two points per side")

    def grid(self) -> np.ndarray:
        sig = np.linspace(self.sigma_min, self.sigma_max, self.n_sigma)
        t = np.linspace(self.t_min, self.t_max, self.n_t)
        return sig[:, None] + 1j * t[None, :]

    def refined(self) -> "CompactRect":
        return CompactRect(
            self.sigma_min, self.sigma_max, self.t_min, self.t_max, 2 * self.n_sigma - 1, 2 * self.n_t - 1
        )

    def enlarged(self, delta: float) -> "CompactRect":
        return CompactRect(
            self.sigma_min - delta, self.sigma_max + delta, self.t_min - delta, self.t_max + delta, self.n_sigma, self.n_t
        )

    def contains(self, s) -> np.ndarray:
        s = np.asarray(s)
        return (
            (s.real >= self.sigma_min)
            & (s.real <= self.sigma_max)
            & (s.imag >= self.t_min)
            & (s.imag <= self.t_max)
        )

    def boundary_rule(self, nodes_per_edge: int = 64, panels: int = 8):
        """Points ``z`` and weights ``dz`` for the counter-clockwise contour integral over the boundary."""
        corners = [
            complex(self.sigma_min, self.t_min),
            complex(self.sigma_max, self.t_min),
            complex(self.sigma_max, self.t_max),
            complex(self.sigma_min, self.t_max),
        ]
        order = max(2, nodes_per_edge // panels)
        zs, ws = [], []
        for a, b in zip(corners, corners[1:] + corners[:1]):
            x, w = composite_rule(0.0, 1.0, panels, order)
            zs.append(a + (b - a) * x)
            ws.append((b - a) * w)
        return np.concatenate(zs), np.concatenate(ws)


@dataclass(frozen=True)
class ExhaustionSpec:
    """``K_n = [1/2 + 1/(n+1), n] x [-n, n]``; each K_n lies inside K_{n+1} and they cover Re s > 1/2."""

    points_per_unit: int = 8

    def rect(self, n: int) -> CompactRect:
        if n < 1:
            raise ValueError("exhaustion index starts at 1")
        lo, hi = 0.5 + 1.0 / (n + 1), float(n)
        n_sigma = max(2, int(np.ceil((hi - lo) * self.points_per_unit)) + 1)
        n_t = max(2, 2 * n * self.points_per_unit + 1)
        return CompactRect(lo, hi, -float(n), float(n), n_sigma, n_t)
