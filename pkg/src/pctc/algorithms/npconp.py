"""Deciding promise problems with witnesses for both answers.

Registers: FLAG, VALID, WITNESS (N qubits), CTC. FLAG=1 claims YES and FLAG=0
claims NO; the matching verifier writes 0 into VALID for a valid witness and
VALID is copied onto the CTC qubit, so invalid claims become paradoxical.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..engine import CTC, PctcCircuit, apply_pure, induced_map
from ..errors import CapacityError, ParadoxError
from ..linalg import H, RegisterLayout, embed, tensor
from .factoring import DENSE_MAX_QUBITS
from .oracles import build_oracle_unitary, dense_product, permutation_from_function

__all__ = ["WitnessProblem", "NpConpResult", "npconp_circuit", "np_conp_solve", "PROMISE_CHECK_MAX_BITS"]

PROMISE_CHECK_MAX_BITS = 12

_P0 = np.diag([1, 0])
_P1 = np.diag([0, 1])


@dataclass(frozen=True)
class WitnessProblem:
    n_bits: int
    yes_verifier: Callable
    no_verifier: Callable

    @classmethod
    def from_sets(cls, n_bits, yes, no):
        """Verifiers that accept exactly the listed witnesses (ints or bitstrings)."""

        def parse(w):
            return int(w, 2) if isinstance(w, str) else int(w)

        yes, no = frozenset(map(parse, yes)), frozenset(map(parse, no))
        return cls(n_bits, yes.__contains__, no.__contains__)

    @property
    def layout(self):
        return RegisterLayout.of(("FLAG", 1), ("VALID", 1), ("WITNESS", self.n_bits), (CTC, 1))

    def accepted(self):
        """Brute-force lists of YES and NO witnesses."""
        words = range(2**self.n_bits)
        return [w for w in words if self.yes_verifier(w)], [w for w in words if self.no_verifier(w)]


@dataclass(frozen=True)
class NpConpResult:
    answer: str | None
    witness: str | None
    distribution: dict
    promise_violation: str | None = None


def npconp_circuit(prob):
    layout = prob.layout
    n = prob.n_bits
    if layout.total > DENSE_MAX_QUBITS:
        raise CapacityError(f"dense circuit needs {layout.total} qubits; limit is {DENSE_MAX_QUBITS}")
    u1 = embed(tensor(H, *[H] * n), layout, ["FLAG", "WITNESS"])
    verify = tensor(_P1, build_oracle_unitary(prob.yes_verifier, n)) + tensor(
        _P0, build_oracle_unitary(prob.no_verifier, n)
    )
    u2 = embed(verify, layout, ["FLAG", "WITNESS", "VALID"])
    u3 = permutation_from_function(layout, lambda v: {CTC: v[CTC] ^ v["VALID"]})
    return PctcCircuit(layout, dense_product(u3, u2, u1), validate=False)


def _dense(prob):
    circuit = npconp_circuit(prob)
    start = np.zeros(circuit.system_layout.dim, dtype=complex)
    start[0] = 1
    return apply_pure(induced_map(circuit), start).distribution(["FLAG", "VALID", "WITNESS"])


def _structured(prob):
    n = prob.n_bits
    survivors = [
        f"{flag}0{w:0{n}b}"
        for flag, verifier in ((0, prob.no_verifier), (1, prob.yes_verifier))
        for w in range(2**n)
        if verifier(w)
    ]
    if not survivors:
        raise ParadoxError("no valid witness for either answer; every branch is paradoxical")
    return {key: 1 / len(survivors) for key in survivors}


def np_conp_solve(prob, method="auto", seed=0):
    """Run the circuit; returns the answer, a sampled witness and the distribution.

    Instances small enough for brute force are checked against the promise
    that exactly one answer has witnesses. With both answers witnessed the
    distribution is still returned, ``answer`` is None and
    ``promise_violation`` is ``"both"``.
    """
    violation = None
    if prob.n_bits <= PROMISE_CHECK_MAX_BITS:
        yes, no = prob.accepted()
        if not yes and not no:
            raise ParadoxError("promise violated: neither verifier accepts any witness")
        if yes and no:
            violation = "both"
    if method == "auto":
        method = "dense" if prob.layout.total <= DENSE_MAX_QUBITS else "structured"
    if method == "dense":
        dist = _dense(prob)
    elif method == "structured":
        dist = _structured(prob)
    else:
        raise ValueError(f"unknown method {method!r}")
    flags = {key[0] for key in dist}
    if len(flags) > 1:
        violation = violation or "both"
    answer = None if violation else ("YES" if flags == {"1"} else "NO")
    keys = sorted(dist)
    rng = np.random.default_rng(seed)
    sample = keys[rng.choice(len(keys), p=np.array([dist[k] for k in keys]) / sum(dist.values()))]
    return NpConpResult(answer, sample[2:], dist, violation)
