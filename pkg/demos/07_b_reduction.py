"""
From arbitrary signs to a positive point.

Flip every column into the upper half-plane and sort by angle.  The minors
of the result are the absolute values of the original minors, just
permuted, so any 2 x n matrix has a positive twin with the same loss.
"""
import numpy as np

from grplus import PointMatrix, b_reduction, loss_B, loss_E, minors

X = PointMatrix(np.random.default_rng(4).standard_normal((6, 2)))
Y = b_reduction(X)
print("input minors signs:", np.sign(minors(X).values()).astype(int))
print("output minors all positive:", bool(np.all(minors(Y).values() > 0)))
print(f"loss_B(X) = {loss_B(X):.6f}, loss_E(Y) = {loss_E(minors(Y)):.6f}")
