"""
Perfect discrimination of linearly independent states
=====================================================

Any linearly independent set can be mapped onto computational basis states.
Three constructions are available: the direct operator built from dual
vectors, a controlled-unitary cascade, and a one-CTC-qubit gadget.
"""

import numpy as np

from pctc import distinguish
from pctc.distinguish import dual_basis, impossibility_witness

rng = np.random.default_rng(1)
d = 4
states = []
for _ in range(d):
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    states.append(v / np.linalg.norm(v))

# %%
# Each dual vector is orthogonal to every member except its own.
duals = dual_basis(states)
print(np.round(np.abs(duals.conj().T @ np.column_stack(states)), 6))

# %%
for route in ("direct", "cascade", "gadget"):
    print(route, [round(distinguish(states, i, route).get(i, 0), 12) for i in range(d)])

# %%
# Add one more state and the set becomes dependent. The best the map can do
# leaves weight on at least two labels.
extra = states + [(states[0] + states[1]) / np.linalg.norm(states[0] + states[1])]
print(impossibility_witness(extra)["top_two"])
