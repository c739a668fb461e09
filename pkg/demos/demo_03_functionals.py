"""
Smoothed L-values
=================

Pairing L(1/2 + ix, chi) with a bump f gives a convergent Dirichlet series
with coefficients fhat(log n / 2 pi) / sqrt(n).  We sum it over complete
periods with a certified tail, and cross-check with direct quadrature of
the L-function.
"""

from chaoszeta.characters import enumerate_characters
from chaoszeta.functionals import L_functional, L_functional_principal, L_functional_quadrature, L_truncated
from chaoszeta.testfn import TestFunction, build_cache

f = TestFunction()  # c = 0, w = 1, A = 1
chi = enumerate_characters(5)[1]

##############################################################################
# Two routes to the same number.

series = L_functional(f, None, chi)
quad = L_functional_quadrature(f, chi)
print(f"series     {series.value:.9f}  cutoff {series.cutoff}  tail <= {series.tail_bound:.1e}")
print(f"quadrature {quad.value:.9f}")

##############################################################################
# Truncations approach it slowly; the tail is a smoothed character sum.

cache = build_cache(f, 10**4)
for M in (10, 100, 1000, 10**4):
    print(f"M={M:<6d} L_M = {L_truncated(cache, chi, M):.6f}")

##############################################################################
# The principal character goes through zeta instead.

for q in (1, 2, 4, 6):
    print(f"q={q}: {L_functional_principal(f, q).value.real:+.9f}")
