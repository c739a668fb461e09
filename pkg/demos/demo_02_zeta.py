"""
Zeta off the pole and the covariance kernel
===========================================

Euler-Maclaurin summation gives zeta anywhere except near s = 1, with a
bound on the remainder.  The log of zeta on the line Re s = 1 is the
covariance kernel of the Gaussian part.
"""

import numpy as np

from chaoszeta.zetafn import covariance_kernel, principal_L, zeta, zeta_with_bound

##############################################################################
# A few reference points.

for s in (2, 0.5, 0.5 + 14.134725j, 1 + 1j):
    val, bound = zeta_with_bound(s)
    print(f"zeta({s}) = {val:.12f}   remainder <= {bound:.1e}")

##############################################################################
# The principal L-function strips the Euler factors of the primes dividing q.

print("L(2, chi_0 mod 6) =", principal_L(2, 6).real, "=", (np.pi**2 / 6) * (3 / 4) * (8 / 9))

##############################################################################
# The kernel log zeta(1 + iu) blows up like log(1/u) near u = 0.

u = np.array([1e-3, 1e-2, 0.1, 0.5, 1, 2, 3])
k = covariance_kernel(u)
for ui, ki in zip(u, k):
    print(f"u={ui:<6g} log zeta(1+iu) = {ki.real:+.5f} {ki.imag:+.5f}i   Re - log(1/u) = {ki.real - np.log(1 / ui):+.4f}")
