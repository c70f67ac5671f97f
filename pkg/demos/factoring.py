"""
Factoring with one CTC qubit
============================

The CTC qubit flips unless the candidate divides Q, so only divisors survive
and they come out with equal probability.
"""

from pctc.algorithms import as_integers, factor

for q in (15, 21, 28):
    print(q, as_integers(factor(q)))

# %%
# Drop the trivial factor 1.
print(as_integers(factor(15, exclude_trivial=True)))

# %%
# Larger inputs use the structured evaluator; the dense one would need too many qubits.
print(sorted(as_integers(factor(1001))))
