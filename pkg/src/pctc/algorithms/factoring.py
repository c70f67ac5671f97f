"""Factoring by making non-divisors paradoxical.

Registers: REMAINDER (N qubits), FACTOR (N qubits), CTC (1 qubit), with
``N = Q.bit_length()``. Hadamards spread FACTOR over every ``j``; ``U_j``
writes ``Q mod j`` into REMAINDER (or 1 for excluded ``j``); any nonzero
remainder flips the CTC qubit. Only divisors survive.
"""

from dataclasses import dataclass
import math

import numpy as np

from ..engine import CTC, PctcCircuit, apply_pure, induced_map
from ..errors import CapacityError, PrimeInputError
from ..linalg import H, RegisterLayout, embed, tensor
from .oracles import dense_product, permutation_from_function

__all__ = ["DENSE_MAX_QUBITS", "FactorInstance", "is_prime", "factor_circuit", "factor", "as_integers"]

DENSE_MAX_QUBITS = 12


def is_prime(q):
    if q < 2:
        return False
    return all(q % p for p in range(2, math.isqrt(q) + 1))


@dataclass(frozen=True)
class FactorInstance:
    q: int
    exclude_trivial: bool = False

    def __post_init__(self):
        if int(self.q) != self.q or self.q < 2:
            raise ValueError(f"Q must be an integer >= 2, got {self.q}")

    @property
    def n_bits(self):
        return int(self.q).bit_length()

    @property
    def layout(self):
        n = self.n_bits
        return RegisterLayout.of(("REMAINDER", n), ("FACTOR", n), (CTC, 1))

    @property
    def excluded(self):
        return {0, 1, self.q} if self.exclude_trivial else {0, self.q}

    def remainder(self, j):
        """Value ``U_j`` writes into a zeroed REMAINDER register."""
        return 1 if j in self.excluded else self.q % j


def factor_circuit(inst):
    """Dense ``U3 U2 U1`` for a factoring instance."""
    layout = inst.layout
    n = inst.n_bits
    if layout.total > DENSE_MAX_QUBITS:
        raise CapacityError(f"dense factoring needs {layout.total} qubits; limit is {DENSE_MAX_QUBITS}")
    u1 = embed(tensor(*[H] * n), layout, ["FACTOR"])

    def u2(v):
        # U_j swaps |0> and |Q mod j> on REMAINDER
        r = inst.remainder(v["FACTOR"])
        if v["REMAINDER"] == 0:
            return {"REMAINDER": r}
        if v["REMAINDER"] == r:
            return {"REMAINDER": 0}
        return {}

    def u3(v):
        return {CTC: v[CTC] ^ (v["REMAINDER"] != 0)}

    p2 = permutation_from_function(layout, u2)
    p3 = permutation_from_function(layout, u3)
    # permutation factors are unitary by construction and U1 is a Hadamard layer
    return PctcCircuit(layout, dense_product(p3, p2, u1), validate=False)


def _dense(inst):
    circuit = factor_circuit(inst)
    start = np.zeros(circuit.system_layout.dim, dtype=complex)
    start[0] = 1
    return apply_pure(induced_map(circuit), start).distribution(["FACTOR"])


def _structured(inst):
    # C is diagonal on FACTOR: branch j keeps weight 1 iff its remainder is 0
    n = inst.n_bits
    survivors = [j for j in range(2**n) if inst.remainder(j) == 0]
    return {format(j, f"0{n}b"): 1 / len(survivors) for j in survivors}


def factor(q, exclude_trivial=False, method="auto"):
    """Distribution over FACTOR bitstrings after the P-CTC factoring circuit.

    Without ``exclude_trivial`` the support is every divisor ``1 <= j < Q``;
    with it, ``j = 1`` is removed as well. Prime ``Q`` is rejected up front.
    """
    inst = FactorInstance(int(q), exclude_trivial)
    if is_prime(inst.q):
        raise PrimeInputError(f"{inst.q} is prime; the circuit would be paradoxical")
    if method == "auto":
        method = "dense" if inst.layout.total <= DENSE_MAX_QUBITS else "structured"
    if method == "dense":
        return _dense(inst)
    if method == "structured":
        return _structured(inst)
    raise ValueError(f"unknown method {method!r}")


def as_integers(distribution):
    return {int(k, 2): p for k, p in distribution.items()}
