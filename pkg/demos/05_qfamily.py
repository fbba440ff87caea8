"""
A flat valley of minimizers when n % 4 == 2.

Scaling odd columns by 1/q and even columns by q leaves odd-gap minors
alone and moves even-gap minors by q^{±2}.  While the moved values stay
between the extreme ones the loss does not change, so a whole interval of
distinct points attains the optimum.
"""
import numpy as np

from grplus import admissible_interval, cyclic_matrix, loss_E, minors, optimal_loss, q_transform

for n in (6, 10):
    lo, hi = admissible_interval(n)
    print(f"n={n}: flat for q in ({lo:.6f}, {hi:.6f}), optimum {optimal_loss(n):.6f}")
    for q in np.geomspace(lo ** 2, hi ** 2, 7):
        E = loss_E(minors(q_transform(cyclic_matrix(n), q)))
        tag = "flat" if lo < q < hi else "    "
        print(f"   q={q:.4f}  E={E:.10f}  {tag}")
