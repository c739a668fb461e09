"""
Mean square error of truncation
===============================

E|L_q(f) - L_{M,q}(f)|^2 over a uniform character has an exact kernel
representation.  The kernel sum is checked against brute-force
enumeration, then followed to a large modulus where it tracks the Fourier
tail sum_{n > M} |fhat|^2 / n.
"""

from chaoszeta.harness import ExperimentConfig, run_experiment
from chaoszeta.oracles import enumeration_variance, variance_kernel_sum
from chaoszeta.testfn import TestFunction, build_cache

cache = build_cache(TestFunction(), 1 << 15)

##############################################################################
# Two routes at small q.

for q, M in ((101, 5), (211, 20)):
    ks = variance_kernel_sum(q, M, cache, 3)
    en = enumeration_variance(q, M, cache, 3)
    print(f"q={q} M={M}: kernel {ks.total:.12e}  enumeration {en:.12e}")
    print(f"   S_M {ks.S_M:.3e}  2 Re S_L {2 * ks.S_L.real:+.3e}  S_LL {ks.S_LL:.3e}")

##############################################################################
# At q = 10007 the principal term is negligible and E follows the tail.

res = run_experiment(ExperimentConfig("qM_convergence", q_grid=(10007,), M_grid=(10, 20, 50)), workers=4)
for M in (10, 20, 50):
    print(f"M={M:<3d} E={res.value('E', q=10007, M1=M):.4e}  tail={res.value('fourier_tail', q=10007, M1=M):.4e}")
