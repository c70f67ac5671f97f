"""P-CTC-assisted factoring, NP-and-coNP decisions and SAT."""

from .dimacs import CnfFormula, parse_dimacs, read_dimacs
from .factoring import FactorInstance, as_integers, factor, factor_circuit, is_prime
from .npconp import NpConpResult, WitnessProblem, np_conp_solve, npconp_circuit
from .oracles import build_oracle_unitary, permutation_from_function
from .sat import SatResult, sat_circuit, sat_layout, sat_solve

__all__ = [
    "CnfFormula",
    "parse_dimacs",
    "read_dimacs",
    "FactorInstance",
    "factor",
    "factor_circuit",
    "is_prime",
    "as_integers",
    "WitnessProblem",
    "NpConpResult",
    "np_conp_solve",
    "npconp_circuit",
    "build_oracle_unitary",
    "permutation_from_function",
    "SatResult",
    "sat_circuit",
    "sat_layout",
    "sat_solve",
]
