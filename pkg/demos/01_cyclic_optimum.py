"""
The cyclic configuration and its loss.

Place n unit vectors at angles 0, π/n, ..., (n-1)π/n.  Every 2x2 minor
depends only on the index gap, so the ratio of largest to smallest minor is
sin(dπ/n) / sin(π/n) with d = n // 2.  This script prints that ratio next
to the loss of a few random positive points, which always sit above it.
"""
import numpy as np

from grplus import cyclic_matrix, loss_E, minors, optimal_loss, sample_positive, to_matrix

for n in (4, 5, 6, 9, 16):
    C = cyclic_matrix(n)
    E = loss_E(minors(C))
    rand = [loss_E(minors(to_matrix(sample_positive(n, s)))) for s in range(200)]
    print(f"n={n:2d}  E(C)={E:.10f}  closed form={optimal_loss(n):.10f}  "
          f"best of 200 random={min(rand):.4f}")
