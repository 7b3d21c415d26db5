"""
Breaking the bounds outside s + t <= 3/2
========================================

X = R U diag(a, b, 1) U R^T and Y = diag(c, d, 1), with U the reflection
taking e_3 to (e_1 + e_2)/sqrt(2) and R a small rotation. With eigenvalues
down to 1e-19, every power comes from the factorisation, never from a
generic eigensolver.
"""

import numpy as np

from traceineq import aho, cex

inst = cex.example_4_1()
print("a, b, x, c, d =", inst.params)
txy = cex.aho_trace_structured(inst, 1, 1)
print(f"Tr[XY]                      = {txy:.10e}")
for tau in (0.5, 0.7, 0.75, 0.79, 0.85, 0.95):
    val = cex.aho_trace_structured(inst, tau, tau)
    flag = "exceeds Tr[XY]" if val > txy else ""
    print(f"Tr[X^{tau} Y^{tau} X^{1 - tau:.2f} Y^{1 - tau:.2f}] = {val:.10e} {flag}")

# The (1,3) and (2,3) entries of X^t nearly cancel, which is what lets the
# off-diagonal combination change sign.
print("\ncancellation ratio:", cex.cancellation_ratio(inst))

# Swap a and b: now the trace itself goes negative near s = t = 1
inst2 = cex.example_4_2()
for tau in (0.5, 0.7, 0.77, 0.8, 0.9, 0.98):
    print(f"tau = {tau:4.2f}: trace = {cex.aho_trace_structured(inst2, tau, tau): .6e}")
tstar = cex.zero_crossing(inst2, 0.5, 0.98)
print("sign change at tau* =", tstar)
half = aho.half_trace(inst2.x_decomposition, inst2.y_decomposition)
print(f"there |trace| ~ 0 < Tr[X^1/2 Y^1/2 X^1/2 Y^1/2] = {half:.6e}: the lower bound fails")

# A generic eigensolver on the assembled matrix loses the 1e-19 eigenvalue
X = inst.X
print("\ngeneric eigenvalues of X:", np.linalg.eigvalsh(X))
print("exact eigenvalues       :", inst.x_decomposition.eigenvalues)
