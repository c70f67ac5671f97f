"""
BB84 states stay hard to tell apart
===================================

The four BB84 states are linearly dependent. Running them through the P-CTC
version of the Deutsch-model discriminator leaves their pairwise overlaps
exactly as they were.
"""

import numpy as np

from pctc.distinguish import bb84_demo

report = bb84_demo()
for label, out in zip(report["inputs"], report["outputs"]):
    print(label, np.round(out, 6))

# %%
print(np.round(report["overlaps_before"], 6))
print("max change", report["max_overlap_change"])
