"""Probabilistic SAT with one P-CTC qubit, with k-fold amplification.

Per copy: FLAG, VALID, WITNESS (N qubits). FLAG=1 branches check the formula;
FLAG=0 branches must carry the all-zeros witness. A single CTC qubit is
flipped unless every VALID qubit is 0. With ``m`` models each copy keeps
``m + 1`` equally likely branches, so all ``k`` copies answer NO with
probability ``1 / (m + 1)**k``.
"""

from dataclasses import dataclass
import itertools

import numpy as np

from ..engine import CTC, PctcCircuit, apply_pure, induced_map
from ..errors import CapacityError
from ..linalg import H, X, I2, RegisterLayout, embed, tensor
from .factoring import DENSE_MAX_QUBITS
from .oracles import build_oracle_unitary, dense_product, permutation_from_function

__all__ = ["SatResult", "sat_layout", "sat_circuit", "sat_solve", "STRUCTURED_MAX_OUTCOMES"]

STRUCTURED_MAX_OUTCOMES = 2**20

_P0 = np.diag([1, 0])
_P1 = np.diag([0, 1])


@dataclass(frozen=True)
class SatResult:
    answer: str
    witness: str | None
    distribution: dict
    p_no: float


def _names(k):
    if k == 1:
        return [("FLAG", "VALID", "WITNESS")]
    return [(f"FLAG_{i}", f"VALID_{i}", f"WITNESS_{i}") for i in range(1, k + 1)]


def sat_layout(n_vars, k=1):
    regs = []
    for flag, valid, witness in _names(k):
        regs += [(flag, 1), (valid, 1), (witness, n_vars)]
    return RegisterLayout(tuple(regs) + ((CTC, 1),))


def sat_circuit(formula, k=1):
    """Dense circuit for ``k`` copies; only feasible for tiny instances."""
    n = formula.n_vars
    layout = sat_layout(n, k)
    if layout.total > DENSE_MAX_QUBITS:
        raise CapacityError(f"dense SAT circuit needs {layout.total} qubits; limit is {DENSE_MAX_QUBITS}")
    zero_w = np.zeros((2**n, 2**n))
    zero_w[0, 0] = 1
    not_zero_w = np.eye(2**n) - zero_w
    check = tensor(_P1, build_oracle_unitary(formula, n)) + tensor(_P0, np.eye(2 ** (n + 1)))
    force_zero = tensor(I2, zero_w, I2) + tensor(_P1, not_zero_w, I2) + tensor(_P0, not_zero_w, X)
    perms, spread = [], []
    for flag, valid, witness in _names(k):
        spread += [flag, witness]
        perms.append(embed(check, layout, [flag, witness, valid]))
        perms.append(embed(force_zero, layout, [flag, witness, valid]))
    # copies act on disjoint registers, so every Hadamard layer can go first
    u_h = embed(tensor(*[H] * ((n + 1) * k)), layout, spread)
    valids = [valid for _, valid, _ in _names(k)]
    couple = permutation_from_function(layout, lambda v: {CTC: v[CTC] ^ any(v[x] for x in valids)})
    return PctcCircuit(layout, dense_product(couple, *reversed(perms), u_h), validate=False)


def _outcome_registers(k):
    return [name for triple in _names(k) for name in triple]


def _dense(formula, k):
    circuit = sat_circuit(formula, k)
    start = np.zeros(circuit.system_layout.dim, dtype=complex)
    start[0] = 1
    return apply_pure(induced_map(circuit), start).distribution(_outcome_registers(k))


def _structured(formula, k):
    n = formula.n_vars
    branches = [f"10{w:0{n}b}" for w in formula.models()] + ["00" + "0" * n]
    if len(branches) ** k > STRUCTURED_MAX_OUTCOMES:
        raise CapacityError(f"{len(branches)}^{k} joint outcomes exceed {STRUCTURED_MAX_OUTCOMES}")
    p = 1 / len(branches) ** k
    return {"".join(combo): p for combo in itertools.product(branches, repeat=k)}


def sat_solve(formula, k=1, method="auto", seed=0):
    """Run ``k`` amplified copies; answer YES if any copy's FLAG reads 1.

    ``p_no`` is the exact probability of a NO answer; ``answer`` and
    ``witness`` come from one seeded sample of the outcome distribution.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if method == "auto":
        method = "dense" if k == 1 and sat_layout(formula.n_vars, k).total <= DENSE_MAX_QUBITS else "structured"
    if method == "dense":
        dist = _dense(formula, k)
    elif method == "structured":
        dist = _structured(formula, k)
    else:
        raise ValueError(f"unknown method {method!r}")
    width = formula.n_vars + 2
    p_no = sum(p for key, p in dist.items() if all(key[i * width] == "0" for i in range(k)))
    keys = sorted(dist)
    probs = np.array([dist[key] for key in keys])
    sample = keys[np.random.default_rng(seed).choice(len(keys), p=probs / probs.sum())]
    copies = [sample[i * width : (i + 1) * width] for i in range(k)]
    yes = [c for c in copies if c[0] == "1"]
    return SatResult("YES" if yes else "NO", yes[0][2:] if yes else None, dist, float(p_no))
