"""
Why the normalized logs vanish at an optimum.

At a minimizer the vector a is fixed by an averaging operator S whose
weights q_k are all below one.  Repeated application shrinks any admissible
vector geometrically, so the only fixed point is zero.
"""
import numpy as np

from grplus import contraction_weights, operator_S

n = 12
rng = np.random.default_rng(0)
a = rng.uniform(0, 1, n - 1)
a[0] = a[-1] = 0.0
qmax = contraction_weights(n).max()
print(f"n={n}, max q_k = {qmax:.6f}")
y = a
for m in range(1, 11):
    y = operator_S(y, n)
    print(f"  m={m:2d}  |S^m a| = {np.abs(y).max():.3e}  bound {qmax ** m * np.abs(a).max():.3e}")
