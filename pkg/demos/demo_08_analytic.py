"""
Convergence as analytic functions
=================================

On a compact rectangle inside Re s > 1/2 the partial sums of L(s, chi)
converge uniformly, and sup norms there can be read off the boundary of a
slightly larger rectangle with Cauchy's formula.  Laws of random analytic
functions are compared in the Frechet metric of locally uniform
convergence.
"""

import numpy as np

from chaoszeta.characters import enumerate_characters
from chaoszeta.functionals import L_pointwise
from chaoszeta.harness import CompactRect, ExhaustionSpec, cauchy_sup, frechet_distance, sup_norm_on_rect
from chaoszeta.oracles import E_analytic_closed

K = CompactRect(0.75, 2.0, -2.0, 2.0, 6, 17)
chi = enumerate_characters(7)[1]


def g(s):
    return L_pointwise(s, chi)


print("grid sup   ", sup_norm_on_rect(g, K))
print("Cauchy sup ", cauchy_sup(g, K))

##############################################################################
# Closed form of the mean square gap at sigma = 1.

for M in (10, 100, 1000):
    print(f"M={M:<5d} {E_analytic_closed(1.0, M, M):.3e}")

##############################################################################
# Frechet distance between 1/s and exp(-s); the omitted tail is 2^-n_terms.

print("d =", frechet_distance(lambda s: 1 / s, lambda s: np.exp(-s), ExhaustionSpec(2), 4))
