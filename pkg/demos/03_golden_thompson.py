"""
Interpolating Golden-Thompson
=============================

f(u) = Tr[exp(H + (1-u)K) exp(uK)] runs from Tr[e^(H+K)] at u = 0 to
Tr[e^H e^K] at u = 1. It is increasing when K is diagonal and H has
nonnegative off-diagonal entries, but not in general.
"""

import numpy as np

from traceineq import cex, gt

# A Schroedinger-type operator on a path graph: H = -Laplacian, K = -potential
g = gt.GraphSpec.path(5)
prof = gt.gt_graph_demo(g, [1, 0, 0, 0, -1], n_points=11)
print(" u      f(u)         f'(u)")
for u, f, fp in zip(prof.u_grid, prof.f_values, prof.fprime_values):
    print(f"{u:4.1f}  {f:.8f}  {fp: .3e}")
print("monotone:", prof.monotone, " strictly:", prof.strictly_increasing)

# A random pair: f(0) <= f(1) always, but f need not be monotone
rng = np.random.default_rng(7)
H = rng.standard_normal((3, 3)); H = (H + H.T) * 2
K = rng.standard_normal((3, 3)); K = (K + K.T) * 2
prof = gt.gt_profile(H, K, 101)
print(f"\nrandom pair: f(0) = {prof.f_values[0]:.4f}, f(1) = {prof.f_values[-1]:.4f}, "
      f"min f' = {prof.min_derivative:.4f}")

# The counterexample matrices: K = log X, H = log Y with Y singular. The
# derivative at u = 1 has an exact limit thanks to the logarithmic mean.
for name, inst in (("a=1e-10, b=1e-19", cex.example_4_1()), ("a=1e-19, b=1e-10", cex.example_4_2())):
    print(f"{name}: f'(1) = {cex.gt_cex_derivative(inst): .6e}")

# Replacing the zero eigenvalue of Y by d > 0 and shrinking d approaches the
# limit only logarithmically.
inst = cex.example_4_1()
for d in (1e-30, 1e-60, 1e-120, 1e-240):
    print(f"d = {d:.0e}: f'(1) = {cex.gt_cex_derivative(inst, d=d): .6e}")
