"""Perfect discrimination of linearly independent states with P-CTCs.

Three routes are provided, all sending the i-th member of a linearly
independent set to the label ``i`` with certainty:

* ``direct``: the induced operator ``C = sum_j |j><dual_j|`` applied as is;
* ``cascade``: a qudit SWAP followed by ``sum_l |l><l| (x) U_l`` whose CTC
  trace reproduces ``C``;
* ``gadget``: the unambiguous-discrimination POVM with the inconclusive
  outcome ruled out by one P-CTC qubit.

States of dimension ``d`` are zero-padded to the next power of two so that
they live on whole qubits. Dual vectors are unit norm with the phase chosen
so that ``<dual_j|phi_j>`` is real and positive.
"""

import numpy as np
import scipy.linalg

from .engine import CTC, InducedMap, PctcCircuit, apply_pure, induced_map
from .errors import DependentSetError
from .gadget import GeneralizedMeasurement, postselect
from .linalg import (
    KET0,
    KET1,
    KET_MINUS,
    KET_PLUS,
    RegisterLayout,
    SWAP,
    H,
    complete_unitary,
    qubits_for,
    singular_values,
    tensor,
)

__all__ = [
    "INDEPENDENCE_TOL",
    "ROUTES",
    "state_matrix",
    "check_independence",
    "dual_basis",
    "overlap_weights",
    "build_c",
    "build_cascade_unitary",
    "build_one_qubit_variant",
    "distinguish",
    "b92_unitary",
    "two_state_circuit",
    "bb84_map",
    "bb84_demo",
    "dependent_counterexample",
    "impossibility_witness",
]

INDEPENDENCE_TOL = 1e-9
ROUTES = ("direct", "cascade", "gadget")


def state_matrix(states):
    """Column matrix of a state set; members are normalized and must share a dimension."""
    cols = [np.asarray(getattr(s, "amplitudes", s), dtype=complex).reshape(-1) for s in states]
    if len(cols) < 2:
        raise ValueError("a state set needs at least two states")
    d = cols[0].shape[0]
    if any(c.shape[0] != d for c in cols):
        raise ValueError("all states in a set must have the same dimension")
    norms = [np.linalg.norm(c) for c in cols]
    if min(norms) == 0:
        raise ValueError("zero vector in state set")
    return np.column_stack([c / n for c, n in zip(cols, norms)])


def check_independence(states):
    phi = state_matrix(states)
    d, n = phi.shape
    if n > d:
        return False
    s = singular_values(phi)
    return bool(s[-1] / s[0] > INDEPENDENCE_TOL)


def _padded_dim(d):
    return 2 ** max(1, qubits_for(d))


def dual_basis(states):
    """Unit vectors ``dual_j`` with ``<dual_j|phi_i> = 0`` for ``i != j``.

    Returned as the columns of a ``d x N`` array. Computed in the span of the
    set: with ``Phi = QR``, the reciprocal vectors ``Phi (Phi^dag Phi)^-1``
    equal ``Q R^-dag``.
    """
    if not check_independence(states):
        raise DependentSetError("states are linearly dependent")
    phi = state_matrix(states)
    q, r = np.linalg.qr(phi)
    duals = q @ np.linalg.inv(r).conj().T
    duals /= np.linalg.norm(duals, axis=0)
    overlaps = np.einsum("ij,ij->j", duals.conj(), phi)
    return duals * (np.abs(overlaps) / overlaps)


def overlap_weights(states):
    """``|<dual_x|phi_x>|^2`` for each member, with unit-norm duals."""
    phi = state_matrix(states)
    duals = dual_basis(states)
    return np.abs(np.einsum("ij,ij->j", duals.conj(), phi)) ** 2


def _system_layout(d):
    return RegisterLayout.of(("SYS", qubits_for(_padded_dim(d))))


def build_c(states):
    """The induced operator ``sum_j |j><dual_j|`` on the padded system."""
    duals = dual_basis(states)
    d, n = duals.shape
    big = _padded_dim(d)
    c = np.zeros((big, big), dtype=complex)
    c[:n, :d] = duals.conj().T
    return InducedMap(c, _system_layout(d))


def _row_unitaries(states):
    """One unitary per label ``l`` with ``<l|U_l = <dual_l|``.

    Rows beyond the set size use an orthonormal basis of the orthogonal
    complement of the span, so ``C`` gains no support on the set itself.
    """
    phi = state_matrix(states)
    duals = dual_basis(states)
    d, n = duals.shape
    big = _padded_dim(d)
    rows = np.zeros((big, big), dtype=complex)
    rows[:n, :d] = duals.conj().T
    if big > n:
        span = np.zeros((big, n), dtype=complex)
        span[:d] = phi
        complement = scipy.linalg.null_space(span.conj().T)
        rows[n:] = complement.conj().T
    unitaries = []
    for l in range(big):
        # U_l^dag has column l equal to the conjugate-transposed row l
        w = complete_unitary(big, {l: rows[l].conj()})
        unitaries.append(w.conj().T)
    return unitaries


def build_cascade_unitary(states):
    """SWAP then ``sum_l |l><l| (x) U_l`` on SYS (x) CTC of equal width."""
    d = state_matrix(states).shape[0]
    big = _padded_dim(d)
    width = qubits_for(big)
    layout = RegisterLayout.of(("SYS", width), (CTC, width))
    swap = np.zeros((big * big, big * big), dtype=complex)
    for j in range(big):
        for k in range(big):
            swap[j * big + k, k * big + j] = 1
    controlled = np.zeros_like(swap)
    for l, u in enumerate(_row_unitaries(states)):
        proj = np.zeros((big, big))
        proj[l, l] = 1
        controlled += tensor(proj, u)
    return PctcCircuit(layout, controlled @ swap)


def build_one_qubit_variant(states):
    """Unambiguous-discrimination POVM plus the accept set that excludes "don't know".

    Outcome ``x + 1`` identifies member ``x``; outcome 0 is inconclusive.
    ``E_x = c |dual_x><dual_x|`` with the largest ``c`` keeping ``sum E_x <= I``.
    """
    duals = dual_basis(states)
    d, n = duals.shape
    big = _padded_dim(d)
    padded = np.zeros((big, n), dtype=complex)
    padded[:d] = duals
    projectors = [np.outer(padded[:, x], padded[:, x].conj()) for x in range(n)]
    c = 1 / np.linalg.eigvalsh(sum(projectors)).max()
    e0 = np.eye(big) - c * sum(projectors)
    evals, evecs = np.linalg.eigh((e0 + e0.conj().T) / 2)
    m0 = (evecs * np.sqrt(np.clip(evals, 0, None))) @ evecs.conj().T
    ops = [m0] + [np.sqrt(c) * p for p in projectors]
    return GeneralizedMeasurement(tuple(ops)), tuple(range(1, n + 1))


def _embed_input(psi, d):
    v = np.asarray(getattr(psi, "amplitudes", psi), dtype=complex).reshape(-1)
    if v.shape[0] != d:
        raise ValueError(f"input of dimension {v.shape[0]} does not match set dimension {d}")
    out = np.zeros(_padded_dim(d), dtype=complex)
    out[:d] = v / np.linalg.norm(v)
    return out


def distinguish(states, psi, route="direct"):
    """Label distribution ``{label: probability}`` for input ``psi``.

    ``psi`` may be a vector or an integer index into ``states``.
    """
    if route not in ROUTES:
        raise ValueError(f"unknown route {route!r}; choose from {ROUTES}")
    phi = state_matrix(states)
    d, n = phi.shape
    if isinstance(psi, (int, np.integer)):
        psi = phi[:, int(psi)]
    if route == "gadget":
        meas, accept = build_one_qubit_variant(states)
        padded = _embed_input(psi, d)
        result = postselect(meas, accept, padded)
        return {k - 1: p for k, p in result.probabilities.items() if p > 1e-14}
    cmap = build_c(states) if route == "direct" else induced_map(build_cascade_unitary(states))
    out = apply_pure(cmap, _embed_input(psi, d)).probabilities()
    return {j: float(out[j]) for j in range(len(out)) if out[j] > 1e-14}


def b92_unitary():
    """(C-H)(SWAP) on (SYS, CTC)."""
    ch = tensor(np.diag([1, 0]), np.eye(2)) + tensor(np.diag([0, 1]), H)
    return ch @ SWAP


def two_state_circuit(phi):
    """(C-U)(SWAP) with ``U = |0><phi| + |1><phi_perp|``.

    Its induced map ``|0><0| + |1><phi_perp|`` sends ``phi`` to ``|0>`` and
    ``|1>`` to ``|1>``; requires ``<1|phi> != 0``.
    """
    phi = np.asarray(phi, dtype=complex)
    phi = phi / np.linalg.norm(phi)
    if abs(phi[1]) < INDEPENDENCE_TOL:
        raise DependentSetError("phi must have nonzero overlap with |1>")
    phi_perp = np.array([-phi[1].conj(), phi[0].conj()])
    u = np.outer(KET0, phi.conj()) + np.outer(KET1, phi_perp.conj())
    cu = tensor(np.diag([1, 0]), np.eye(2)) + tensor(np.diag([0, 1]), u)
    layout = RegisterLayout.of(("SYS", 1), (CTC, 1))
    return PctcCircuit(layout, cu @ SWAP), phi_perp


def bb84_map():
    """``|00><00| + |01><10| + |10><+0| + |11><-0|`` on two system qubits."""
    ket = {"0": KET0, "1": KET1, "+": KET_PLUS, "-": KET_MINUS}

    def k(s):
        return np.kron(ket[s[0]], ket[s[1]])

    c = sum(np.outer(k(out), k(inp).conj()) for out, inp in [("00", "00"), ("01", "10"), ("10", "+0"), ("11", "-0")])
    return InducedMap(c, RegisterLayout.of(("Q1", 1), ("Q2", 1)))


def _overlap_magnitudes(vectors):
    m = np.column_stack(vectors)
    return np.abs(m.conj().T @ m)


def bb84_demo():
    """Run the four BB84 inputs through the P-CTC map; overlaps are unchanged."""
    cmap = bb84_map()
    ket = {"0": KET0, "1": KET1, "+": KET_PLUS, "-": KET_MINUS}
    labels = ["00", "10", "+0", "-0"]
    inputs = [np.kron(ket[s[0]], ket[s[1]]) for s in labels]
    outputs = [apply_pure(cmap, v).amplitudes for v in inputs]
    before = _overlap_magnitudes(inputs)
    after = _overlap_magnitudes(outputs)
    return {
        "inputs": labels,
        "outputs": outputs,
        "overlaps_before": before,
        "overlaps_after": after,
        "max_overlap_change": float(np.max(np.abs(before - after))),
    }


def dependent_counterexample(states, alpha, beta):
    """Output of the pair's distinguisher on ``alpha phi_0 + beta phi_1``.

    Returns the renormalized output and its squared overlaps with ``|0>`` and
    ``|1>``; the input is perfectly identified only when one of them is 1.
    """
    phi = state_matrix(states)
    if phi.shape[1] != 2:
        raise ValueError("dependent_counterexample takes exactly two states")
    psi = alpha * phi[:, 0] + beta * phi[:, 1]
    out = apply_pure(build_c(states), _embed_input(psi, phi.shape[0])).amplitudes
    overlaps = (float(abs(out[0]) ** 2), float(abs(out[1]) ** 2))
    return {
        "input": psi / np.linalg.norm(psi),
        "output": out,
        "overlaps": overlaps,
        "distinguishable": bool(max(overlaps) > 1 - 1e-12),
    }


def impossibility_witness(states):
    """Certify that a linearly dependent set cannot be perfectly distinguished.

    Picks a maximal independent subset by pivoted QR, builds its
    distinguisher, and feeds it a remaining member, which is a superposition
    of subset members. Returns the squared overlaps of the output with each
    subset label together with the two largest.
    """
    phi = state_matrix(states)
    s = singular_values(phi)
    rank = int(np.sum(s > INDEPENDENCE_TOL * s[0]))
    if rank == phi.shape[1]:
        raise ValueError("states are linearly independent; no impossibility witness exists")
    _, _, piv = scipy.linalg.qr(phi, pivoting=True, mode="economic")
    basis = sorted(piv[:rank])
    extra = sorted(piv[rank:])
    cmap = build_c([phi[:, i] for i in basis])
    best = None
    for m in extra:
        out = apply_pure(cmap, _embed_input(phi[:, m], phi.shape[0])).probabilities()[:rank]
        top = np.sort(out)[::-1][:2]
        if best is None or top[1] > best["top_two"][1]:
            best = {"member": int(m), "basis": [int(i) for i in basis], "overlaps": out, "top_two": top}
    return best
