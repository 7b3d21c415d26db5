"""
The two-parameter trace functional
==================================

Tr[X^s Y^t X^(1-s) Y^(1-t)] for positive matrices X, Y, compared against
Tr[XY] from above and Tr[X^1/2 Y^1/2 X^1/2 Y^1/2] from below.
"""

import numpy as np

from traceineq import aho, sampling

rng = np.random.default_rng(2024)
X = sampling.random_psd(rng, 4, complex_=True)
Y = sampling.random_psd(rng, 4, complex_=True)

# The functional is complex in general, even for positive inputs
print("F(0.7, 0.6) =", aho.aho_trace(X, Y, 0.7, 0.6))
print("F(0.3, 0.4) =", aho.aho_trace(X, Y, 0.3, 0.4), "(same value: cyclicity)")
print("F(0.7, 0.4) =", aho.aho_trace(X, Y, 0.7, 0.4), "(complex conjugate)")

# Sweep the square [1/2, 1]^2 and tabulate the upper margin Tr[XY] - |F|,
# scaled by Tr[XY]. Entries with s + t <= 3/2 are covered by a theorem.
rows = aho.scan(X, Y, 0.1)
grid = sorted({r.s for r in rows})
print("\nscaled upper margin; * marks s + t > 3/2")
print("  s\\t " + " ".join(f"{t:>7.2f}" for t in grid))
for s in grid:
    cells = []
    for r in rows:
        if r.s == s:
            mark = "*" if r.s + r.t > 1.5 + 1e-12 else " "
            cells.append(f"{r.upper.margin / r.tr_xy:6.3f}{mark}")
    print(f"{s:5.2f} " + " ".join(cells))

# The same pair through the four-matrix bound and the Lieb-Thirring family
Z = sampling.random_psd(rng, 4)
W = sampling.random_psd(rng, 4)
rep = aho.four_matrix_bound(X, Y, Z, W, 0.6, 0.8)
print(f"\nfour-matrix bound at (0.6, 0.8): |Tr| = {rep.left:.4f} <= {rep.right:.4f}")
for r in (0.5, 1.0, 2.0):
    lt = aho.lieb_thirring_check(X, Y, r)
    print(f"Lieb-Thirring r = {r}: {lt.left:.5f} vs {lt.right:.5f} ({lt.verdict.value})")
