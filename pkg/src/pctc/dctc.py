"""A minimal Deutsch-CTC solver, used only to contrast with the P-CTC engine.

The CTC state must be a fixed point of
``tau -> Tr_SYS[U (rho_sys (x) tau) U^dag]``. We iterate that channel from the
maximally mixed state. When several fixed points exist the limit of this
iteration is returned; no maximum-entropy selection is attempted.
"""

from dataclasses import dataclass

import numpy as np

from .engine import apply_pure, induced_map, PctcCircuit, CTC
from .errors import LayoutError, NonConvergence
from .linalg import (
    KET0,
    KET1,
    KET_MINUS,
    KET_PLUS,
    DensityMatrix,
    RegisterLayout,
    partial_trace_operator,
    qubits_for,
    trace_distance,
)

__all__ = ["DctcSolution", "solve_fixed_point", "dctc_output", "residual", "dctc_demo"]

RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class DctcSolution:
    rho_ctc: DensityMatrix
    residual: float
    iterations: int
    method: str


def _split(u, rho_sys):
    u = np.asarray(u, dtype=complex)
    rho = np.asarray(getattr(rho_sys, "entries", rho_sys), dtype=complex)
    d_sys = rho.shape[0]
    if u.shape[0] % d_sys or u.shape[0] != u.shape[1]:
        raise LayoutError(f"unitary of shape {u.shape} does not act on a system of dimension {d_sys}")
    d_ctc = u.shape[0] // d_sys
    layout = RegisterLayout.of(("SYS", qubits_for(d_sys)), (CTC, qubits_for(d_ctc)))
    if layout.dim != u.shape[0]:
        raise LayoutError("SYS and CTC dimensions must be powers of two")
    return u, rho, layout


def _channel(u, rho, layout, tau):
    joint = u @ np.kron(rho, tau) @ u.conj().T
    return partial_trace_operator(joint, layout, "SYS")


def residual(u, rho_sys, rho_ctc):
    """Trace distance between ``rho_ctc`` and its image under the CTC channel."""
    u, rho, layout = _split(u, rho_sys)
    tau = np.asarray(getattr(rho_ctc, "entries", rho_ctc), dtype=complex)
    return trace_distance(_channel(u, rho, layout, tau), tau)


def solve_fixed_point(u, rho_sys, tol=1e-10, max_iter=10_000):
    """Self-consistent CTC state for unitary ``u`` on SYS (x) CTC.

    Plain iteration stops once successive iterates are within ``tol`` in
    trace distance. If that never happens (periodic or slowly rotating
    orbits), the Cesaro average of the iterates is tested instead.
    """
    u, rho, layout = _split(u, rho_sys)
    d_ctc = 2 ** layout.width(CTC)
    tau = np.eye(d_ctc, dtype=complex) / d_ctc
    running = np.zeros_like(tau)
    for it in range(1, max_iter + 1):
        new = _channel(u, rho, layout, tau)
        running += new
        step = trace_distance(new, tau)
        tau = new
        if step < tol:
            res = residual(u, rho, tau)
            if res <= RESIDUAL_TOL:
                ctc_layout = RegisterLayout.of((CTC, layout.width(CTC)))
                return DctcSolution(DensityMatrix.normalized(ctc_layout, tau), res, it, "iteration")
    average = running / max_iter
    res = residual(u, rho, average)
    if res <= RESIDUAL_TOL:
        ctc_layout = RegisterLayout.of((CTC, layout.width(CTC)))
        return DctcSolution(DensityMatrix.normalized(ctc_layout, average), res, max_iter, "cesaro")
    raise NonConvergence(
        f"no fixed point within {max_iter} iterations (Cesaro residual {res:.3e})",
        residual=res,
        iterations=max_iter,
    )


def dctc_output(u, rho_sys, solution):
    """``Tr_CTC[U (rho_sys (x) rho_ctc) U^dag]``."""
    u, rho, layout = _split(u, rho_sys)
    if solution.residual > RESIDUAL_TOL:
        raise NonConvergence("solution does not satisfy the consistency condition", residual=solution.residual)
    joint = u @ np.kron(rho, solution.rho_ctc.entries) @ u.conj().T
    out = partial_trace_operator(joint, layout, CTC)
    return DensityMatrix.normalized(RegisterLayout.of(("SYS", layout.width("SYS"))), out)


def dctc_demo():
    """Feed the SWAP + controlled-Hadamard circuit to both CTC models.

    Deutsch's model separates |0> from |->; the postselected model separates
    |1> from |+>. Each entry reports Z-basis probabilities of the output.
    """
    from .distinguish import b92_unitary

    u = b92_unitary()
    inputs = {"0": KET0, "-": KET_MINUS, "1": KET1, "+": KET_PLUS}
    report = {"dctc": {}, "pctc": {}}
    for name in ("0", "-"):
        rho = np.outer(inputs[name], inputs[name].conj())
        sol = solve_fixed_point(u, rho)
        out = dctc_output(u, rho, sol)
        report["dctc"][name] = {
            "rho_ctc": sol.rho_ctc.entries,
            "residual": sol.residual,
            "iterations": sol.iterations,
            "z_probabilities": out.probabilities(),
        }
    cmap = induced_map(PctcCircuit(RegisterLayout.of(("SYS", 1), (CTC, 1)), u))
    for name in ("1", "+"):
        report["pctc"][name] = {"z_probabilities": apply_pure(cmap, inputs[name]).probabilities()}
    return report
