"""
How small can s + t be at a violation?
======================================

Random search over the reflection family for the smallest s + t on the
diagonal s = t where |Tr[X^s Y^t X^(1-s) Y^(1-t)]| exceeds Tr[XY]. An
exploration, not a theorem: the region s + t <= 3/2 is known to be safe.
"""

import numpy as np

from traceineq import cex

rng = np.random.default_rng(0)
taus = np.round(np.arange(0.75, 1.0, 0.005), 6)
best = (np.inf, None)
for trial in range(400):
    a, b, c = (float(v) for v in 10.0 ** rng.uniform(-20, -2, 3))
    x = float(10.0 ** rng.uniform(-7, -1))
    inst = cex.build(cex.CexParams(a, b, x, c, 0.0))
    txy = cex.aho_trace_structured(inst, 1, 1)
    for tau in taus:
        if abs(cex.aho_trace_structured(inst, tau, tau)) > txy * (1 + 1e-9):
            if 2 * tau < best[0]:
                best = (2 * tau, inst.params)
            break

print("smallest violating s + t found:", best[0])
print("parameters:", best[1])
print("reference: preset 4.1 violates at s + t = 1.58")
