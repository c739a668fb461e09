"""Experiments, distances and reporting."""

from .config import CompactRect, ConfigError, ExhaustionSpec, ExperimentConfig, load_config
from .experiments import (
    RUNNERS,
    run_analytic_convergence,
    run_covariance_check,
    run_experiment,
    run_fixedM_law,
    run_M1M2_equivalence,
    run_qM_convergence,
)
from .metrics import (
    cauchy_sup,
    ecf_distance,
    energy_distance,
    frechet_distance,
    frechet_tail_bound,
    sup_norm_on_rect,
)
from .report import COLUMNS, Check, ExperimentResult, Row, emit
