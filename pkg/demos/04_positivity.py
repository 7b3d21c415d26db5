"""
Positivity-preserving semigroups and the sign pattern of M(s)
=============================================================

A real symmetric H with nonpositive off-diagonal entries generates an
entrywise nonnegative semigroup exp(-sH); resolvent powers inherit the
property and converge to the semigroup.
"""

import numpy as np

from traceineq import aho, cex, gt, sampling

L = gt.graph_laplacian(gt.GraphSpec.cycle(6))
rep = aho.semigroup_positivity(L, aho.closed_grid(0.1, 5.0, 0.1))
print("cycle Laplacian, min entry of exp(-sL) over s:", rep.min_entry)

for n in (2**6, 2**10, 2**14):
    print(f"n = {n:6d}: |(I + L/n)^-n - exp(-L)| = {aho.resolvent_limit_error(L, 1.0, n):.3e}")

flipped = np.array([[1.0, 0.5], [0.5, 1.0]])
print("positive off-diagonal:", aho.bd_offdiag_check(flipped))

# M(s)_ij = (X^s)_ij (X^(1-s))_ji. For the tridiagonal example one entry is
# negative, never two.
dec = cex.tridiag_decomposition()
for s in (0.1, 0.3, 0.5, 0.7, 0.9):
    M = aho.m_profile(dec, np.eye(3), s).m_matrix
    print(f"s = {s}: M12 = {M[0, 1]: .4f}, M13 = {M[0, 2]: .4f}, M23 = {M[1, 2]: .4f}")

rng = np.random.default_rng(3)
worst = min(
    aho.oct_quadratic_form(sampling.random_psd(rng, 4), rng.uniform(0.05, 0.95), rng.standard_normal(4))
    for _ in range(500)
)
print("smallest sum_ij M_ij (y_i - y_j)^2 over 500 random draws:", worst)
