"""
SAT and promise problems
========================

With m satisfying assignments, the SAT circuit answers NO with probability
1/(m+1)^k after k rounds. Promise problems with YES and NO verifiers return
the correct answer bit with certainty.
"""

from pctc.algorithms import CnfFormula, WitnessProblem, np_conp_solve, parse_dimacs, sat_solve

formula = parse_dimacs("p cnf 3 2\n1 -2 0\n2 3 0\n")
print("models", formula.models())
for k in (1, 2, 3):
    print(k, sat_solve(formula, k).p_no)

# %%
print(sat_solve(CnfFormula(1, ((1,), (-1,)))).answer)

# %%
problem = WitnessProblem.from_sets(3, ["101", "110"], [])
result = np_conp_solve(problem, seed=3)
print(result.answer, result.witness, result.distribution)
