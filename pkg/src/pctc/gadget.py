"""Postselecting a generalized measurement with a single P-CTC qubit.

``U1`` dilates the measurement onto an ancilla, ``U2`` flips the CTC qubit
for every rejected ancilla value. Rejected branches become paradoxical, so
the engine leaves only accepted outcomes, reweighted by their Born
probabilities.
"""

from dataclasses import dataclass

import numpy as np

from .engine import CTC, PctcCircuit, apply_pure, induced_map
from .errors import MeasurementError
from .linalg import (
    I2,
    RegisterLayout,
    X,
    complete_unitary,
    qubits_for,
    tensor,
)

__all__ = [
    "GeneralizedMeasurement",
    "PostselectResult",
    "dilate",
    "couple",
    "gadget_layout",
    "build_circuit",
    "postselect",
]


@dataclass(frozen=True)
class GeneralizedMeasurement:
    """Measurement operators ``M_k`` with ``sum_k M_k^dag M_k = I``."""

    operators: tuple

    def __post_init__(self):
        ops = tuple(np.array(m, dtype=complex) for m in self.operators)
        if not ops:
            raise MeasurementError("a measurement needs at least one operator")
        d = ops[0].shape[0]
        for m in ops:
            if m.shape != (d, d):
                raise MeasurementError("measurement operators must be square and of equal size")
            m.flags.writeable = False
        total = sum(m.conj().T @ m for m in ops)
        if np.max(np.abs(total - np.eye(d))) > 1e-10:
            raise MeasurementError("measurement operators are not complete (sum M^dag M != I)")
        object.__setattr__(self, "operators", ops)

    @property
    def n(self):
        return len(self.operators)

    @property
    def dim(self):
        return self.operators[0].shape[0]


@dataclass(frozen=True)
class PostselectResult:
    probabilities: dict
    states: dict


def _padded(meas):
    """Operators on a power-of-two system, plus an extra outcome if padding was needed.

    The extra outcome projects onto the padding levels and is always rejected.
    """
    d = meas.dim
    big = 2 ** qubits_for(d) if d > 1 else 2
    ops = []
    for m in meas.operators:
        p = np.zeros((big, big), dtype=complex)
        p[:d, :d] = m
        ops.append(p)
    if big > d:
        pad = np.zeros((big, big), dtype=complex)
        pad[d:, d:] = np.eye(big - d)
        ops.append(pad)
    return ops


def _ancilla_width(n_outcomes):
    return max(1, qubits_for(n_outcomes))


def _check_accept(accept, n_outcomes):
    accept = tuple(sorted({int(k) for k in accept}))
    if not accept:
        raise MeasurementError("accept set must be nonempty")
    if accept[0] < 0 or accept[-1] >= n_outcomes:
        raise MeasurementError(f"accept set {list(accept)} is out of range for {n_outcomes} outcomes")
    return accept


def gadget_layout(meas):
    ops = _padded(meas)
    return RegisterLayout.of(
        ("SYS", qubits_for(ops[0].shape[0])),
        ("ANC", _ancilla_width(len(ops))),
        (CTC, 1),
    )


def dilate(meas):
    """Unitary ``U1`` on system (x) ancilla with ``U1(|psi>|0>) = sum_k M_k|psi>|k>``.

    Columns outside the ``|.>|0>`` subspace come from Gram-Schmidt over the
    canonical basis in index order.
    """
    ops = _padded(meas)
    d = ops[0].shape[0]
    n_anc = 2 ** _ancilla_width(len(ops))
    columns = {}
    for i in range(d):
        col = np.zeros(d * n_anc, dtype=complex)
        for k, m in enumerate(ops):
            col[k::n_anc] = m[:, i]
        columns[i * n_anc] = col
    return complete_unitary(d * n_anc, columns)


def couple(accept, n_outcomes, system_dim=1):
    """``U2`` on system (x) ancilla (x) CTC: X on the CTC qubit for rejected ancilla values.

    Ancilla values at or beyond ``n_outcomes`` (register padding) are rejected.
    """
    accept = _check_accept(accept, n_outcomes)
    n_anc = 2 ** _ancilla_width(n_outcomes)
    u = np.zeros((2 * n_anc, 2 * n_anc), dtype=complex)
    for k in range(n_anc):
        proj = np.zeros((n_anc, n_anc))
        proj[k, k] = 1
        u += tensor(proj, I2 if k in accept else X)
    return tensor(np.eye(system_dim), u) if system_dim > 1 else u


def build_circuit(meas, accept):
    """The P-CTC circuit ``U2 (U1 (x) I_CTC)`` for ``meas`` postselected on ``accept``."""
    accept = _check_accept(accept, meas.n)
    layout = gadget_layout(meas)
    d = 2 ** layout.width("SYS")
    u1 = dilate(meas)
    n_total = 2 ** layout.width("ANC")
    # padded outcome indices never appear in ``accept``, so they are rejected too
    u2 = couple(accept, n_total, system_dim=d)
    return PctcCircuit(layout, u2 @ tensor(u1, I2))


def postselect(meas, accept, psi):
    """Run the gadget on ``psi`` and read out the ancilla.

    Returns accepted-outcome probabilities and the normalized post-measurement
    system states ``M_k|psi>/||M_k|psi>||`` (for outcomes that occur).
    """
    accept = _check_accept(accept, meas.n)
    circuit = build_circuit(meas, accept)
    layout = circuit.system_layout
    d_big = 2 ** layout.width("SYS")
    n_anc = 2 ** layout.width("ANC")
    v = np.asarray(getattr(psi, "amplitudes", psi), dtype=complex).reshape(-1)
    if v.shape[0] != meas.dim:
        raise MeasurementError(f"state of dimension {v.shape[0]} does not match measurement dimension {meas.dim}")
    start = np.zeros(d_big * n_anc, dtype=complex)
    start[: meas.dim * n_anc : n_anc] = v / np.linalg.norm(v)
    out = apply_pure(induced_map(circuit), start).amplitudes.reshape(d_big, n_anc)
    probabilities, states = {}, {}
    for k in accept:
        branch = out[:, k]
        p = float(np.vdot(branch, branch).real)
        probabilities[k] = p
        if p > 1e-24:
            states[k] = branch[: meas.dim] / np.linalg.norm(branch[: meas.dim])
    return PostselectResult(probabilities, states)
