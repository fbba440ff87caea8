"""
Searching for the minimum numerically.

The optimizer knows nothing about the cyclic configuration.  It runs a
multi-restart simplex search over angles and radii, so positivity holds by
construction, and reports how far the best point lands from the closed form.
For odd n the minimizer is unique up to scale; for n = 6 it need not be.
"""
from grplus import OptimizerConfig, Tolerance, cyclic_matrix, minimize, minors, normalize, proportional

for n in (5, 6):
    res = minimize(OptimizerConfig(n=n, restarts=10, seed=0))
    P = normalize(minors(res.matrix))
    same = proportional(minors(cyclic_matrix(n)), P, Tolerance(rel=1e-4, abs=0))
    print(f"n={n}: best E={res.best_E:.10f}  gap={res.gap_to_theory:.1e}  "
          f"proportional to cyclic: {same}")
