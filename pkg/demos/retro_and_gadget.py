"""
Postselection with certainty
============================

A CTC coupled by CNOT to half of a Bell pair forces the other half to |0>.
The same trick turns any generalized measurement into one that only returns
outcomes from a chosen accept set.
"""

import numpy as np

from pctc import GeneralizedMeasurement, postselect, retro_demo

# %%
for coupling in ("cnot", "anti", "none"):
    print(coupling, retro_demo(coupling))

# %%
# Trine measurement on a qubit, outcome 0 ruled out.
ops = []
for k in range(3):
    t = np.array([np.cos(2 * np.pi * k / 3), np.sin(2 * np.pi * k / 3)])
    ops.append(np.sqrt(2 / 3) * np.outer(t, t))
trine = GeneralizedMeasurement(tuple(ops))

result = postselect(trine, [1, 2], np.array([1.0, 0.0]))
print(result.probabilities)
