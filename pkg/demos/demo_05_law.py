"""
From characters to random multiplicative functions
==================================================

For fixed M the law of L_{M,q}(f) under a uniform character approaches
the law of the same sum with chi(n) replaced by a Steinhaus random
multiplicative function omega_n.  We measure the gap with an empirical
characteristic function distance and an energy distance.
"""

from chaoszeta.harness import ExperimentConfig, run_experiment

cfg = ExperimentConfig("fixedM_law", q_grid=(101, 1009, 10007), M_grid=(30,), samples=4000, seed=1)
res = run_experiment(cfg, workers=4)

print(f"Monte Carlo floor: ecf {res.value('floor_ecf'):.4f}  energy {res.value('floor_energy'):.2e}")
for q in cfg.q_grid:
    print(f"q={q:<6d} ecf {res.value('ecf_distance', q=q):.4f}  energy {res.value('energy_distance', q=q):.2e}")
