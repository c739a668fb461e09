"""
Truncated sums against truncated Euler products
===============================================

The random Dirichlet polynomial sum_{n <= M1} omega_n a_n and the Euler
product over primes <= M2 differ in mean square by a closed form in
|fhat|^2 / n over smooth numbers.
"""

from chaoszeta.harness import ExperimentConfig, run_experiment
from chaoszeta.oracles import smooth_numbers, iter_smooth

print("5-smooth numbers up to 50:", smooth_numbers(5, 50).tolist())
assert smooth_numbers(5, 10**4).tolist() == list(iter_smooth(5, 10**4))

cfg = ExperimentConfig("M1M2_equivalence", M1_grid=(1, 8, 32, 128), M2_grid=(1, 2, 8, 32), samples=5000)
res = run_experiment(cfg, workers=4)
for M1, M2 in zip(cfg.M1_grid, cfg.M2_grid):
    c = res.value("closed_form", M1=M1, M2=M2)
    m = res.value("monte_carlo", M1=M1, M2=M2)
    se = res.value("monte_carlo_se", M1=M1, M2=M2)
    print(f"({M1:>3d},{M2:>2d})  closed {c:.5f}  Monte Carlo {m:.5f} +- {se:.5f}")
