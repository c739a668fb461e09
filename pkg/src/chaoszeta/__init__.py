"""Dirichlet characters, random multiplicative models and smoothed L-function statistics.

Submodules
----------
arith        unit-group structure, discrete logarithms, primes
characters   Dirichlet characters as exact angles
randmodel    keyed random streams, Steinhaus variables, exact moment oracles
testfn       bump test functions and their Fourier transforms
zetafn       Euler-Maclaurin zeta and log zeta(1 + iu)
functionals  pointwise and smoothed L-values, truncations, random Euler products
oracles      closed forms and brute-force checks
harness      experiment configs, runners, distances and reports
"""

from . import arith, characters, functionals, oracles, randmodel, testfn, zetafn
from .arith import unit_group_structure
from .characters import Character, character_table, enumerate_characters
from .functionals import FunctionalValue, L_functional, L_pointwise, L_truncated
from .randmodel import OmegaAssignment, RandomStream, sample_omegas
from .testfn import TestFunction, build_cache
from .zetafn import covariance_kernel, zeta, zeta_with_bound

__version__ = "0.1.0"

__all__ = [
    "arith",
    "characters",
    "functionals",
    "oracles",
    "randmodel",
    "testfn",
    "zetafn",
    "unit_group_structure",
    "Character",
    "character_table",
    "enumerate_characters",
    "FunctionalValue",
    "L_functional",
    "L_pointwise",
    "L_truncated",
    "OmegaAssignment",
    "RandomStream",
    "sample_omegas",
    "TestFunction",
    "build_cache",
    "covariance_kernel",
    "zeta",
    "zeta_with_bound",
]
