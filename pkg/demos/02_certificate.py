"""
Certifying the lower bound at a single point.

For a positive point the minors are grouped into cyclic orbits and replaced
by their geometric means D_k.  Those means satisfy a family of three-term
inequalities, and after taking logs the normalized values a_k are all
non-negative.  certify_point runs every check and reports the slack.
"""
from grplus import certify_point, cyclic_matrix, sample_positive, to_matrix

rep = certify_point(cyclic_matrix(7))
print("cyclic, n=7:", "passed" if rep.passed else "FAILED")
print(f"  E = {rep.E_value:.12f}, L = {rep.L_value:.12f}, gap = {rep.lower_bound_gap:.2e}")

X = to_matrix(sample_positive(7, seed=1))
rep = certify_point(X)
print("random, n=7:", "passed" if rep.passed else "FAILED")
print(f"  E = {rep.E_value:.6f} >= L = {rep.L_value:.6f} >= optimum {rep.optimum:.6f}")
print(f"  smallest slacks: geomean {rep.geomean_min_slack:.3e}, linear {rep.linear_min_slack:.3e}")
print(f"  smallest a_k: {rep.a_min:.3e}")
