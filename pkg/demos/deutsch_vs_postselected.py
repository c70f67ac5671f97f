"""
Deutsch CTCs versus postselected CTCs
=====================================

The same two-qubit circuit separates different pairs of states depending on
the CTC model. The Deutsch model solves a fixed-point condition for the CTC
state; the postselected model renormalizes the traced operator.
"""

from pctc.dctc import dctc_demo

report = dctc_demo()
for name, entry in report["dctc"].items():
    print("deutsch", name, entry["z_probabilities"], "iterations", entry["iterations"])
for name, entry in report["pctc"].items():
    print("postselected", name, entry["z_probabilities"])
