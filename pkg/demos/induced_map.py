"""
Induced maps and the B92 circuit
================================

Tracing the CTC register out of a circuit unitary gives a linear operator C.
The P-CTC evolution applies C and renormalizes, which makes it nonlinear.
"""

import numpy as np

from pctc import CTC, PctcCircuit, RegisterLayout, apply_pure, induced_map, teleportation_oracle
from pctc.distinguish import b92_unitary
from pctc.linalg import KET0, KET1, KET_PLUS

# %%
# SWAP followed by a controlled Hadamard, with the second qubit sent back in time.
layout = RegisterLayout.of(("SYS", 1), (CTC, 1))
circuit = PctcCircuit(layout, b92_unitary())
cmap = induced_map(circuit)
print(np.round(cmap.c, 6))

# %%
# |+> and |1> are not orthogonal, yet they come out as |0> and |1>.
for name, psi in [("+", KET_PLUS), ("1", KET1)]:
    print(name, "->", apply_pure(cmap, psi).distribution())

# %%
# The same answer from postselected teleportation, which never forms C.
print(teleportation_oracle(circuit, KET_PLUS).distribution())

# %%
# Superposition is not preserved: the map of a sum differs from the sum of maps.
a = apply_pure(cmap, KET0).amplitudes
b = apply_pure(cmap, KET1).amplitudes
mixed = apply_pure(cmap, (KET0 + KET1) / np.sqrt(2)).amplitudes
naive = (a + b) / np.linalg.norm(a + b)
print("overlap", abs(np.vdot(mixed, naive)) ** 2)
