"""
Three readings of a labeled mixture
===================================

Applying a nonlinear map to an ensemble depends on what the ensemble means.
Member by member keeps the weights; acting on the block-diagonal density
matrix reweights them by how much each member survives; the purified
version agrees with the density matrix reading.
"""

import numpy as np

from pctc import LabeledEnsemble, RegisterLayout, StateVector, build_c, compare_semantics

layout = RegisterLayout.of(("SYS", 2))
vecs = [
    np.array([1, 0, 0, 0]),
    np.array([1, 1, 0, 0]) / np.sqrt(2),
    np.array([1, 1, 1, 0]) / np.sqrt(3),
]
ensemble = LabeledEnsemble((1 / 3, 1 / 3, 1 / 3), tuple(StateVector(layout, v) for v in vecs))
cmap = build_c([v[:3] for v in vecs])

report = compare_semantics(cmap, ensemble)
for key in ("q_proper", "q_true_density", "q_purified"):
    print(key, np.round(report[key], 6))
print("total variation", round(report["tv_distance"], 6))
