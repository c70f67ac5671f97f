"""Three readings of a labeled mixture under a nonlinear P-CTC map.

* proper mixture: each member is evolved and renormalized on its own;
* true density matrix: the classical-quantum state is evolved as one object;
* purification: the label is entangled with a reference ``X'`` and the pure
  joint state is evolved.

The last two agree once ``X'`` is traced out; the first generally does not.
"""

from dataclasses import dataclass

import numpy as np

from .engine import apply_pure
from .errors import ParadoxError
from .linalg import (
    DensityMatrix,
    RegisterLayout,
    StateVector,
    partial_trace_operator,
    qubits_for,
)

__all__ = [
    "LabeledEnsemble",
    "labeled_mixture",
    "purify",
    "apply_proper",
    "apply_true_density",
    "apply_purified",
    "q_distribution",
    "compare_semantics",
]

LABEL = "X"
REFERENCE = "X'"


@dataclass(frozen=True)
class LabeledEnsemble:
    """Probabilities, pure states and classical labels of an ensemble."""

    probabilities: tuple
    states: tuple
    labels: tuple = None

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probabilities)
        states = tuple(self.states)
        if len(probs) != len(states) or not probs:
            raise ValueError("need one probability per state")
        if min(probs) <= 0 or abs(sum(probs) - 1) > 1e-12:
            raise ValueError("probabilities must be positive and sum to 1")
        if any(not isinstance(s, StateVector) for s in states):
            raise TypeError("ensemble members must be StateVector instances")
        if any(s.layout != states[0].layout for s in states):
            raise ValueError("ensemble members must share a layout")
        labels = tuple(range(len(probs))) if self.labels is None else tuple(self.labels)
        if len(labels) != len(probs):
            raise ValueError("need one label per state")
        object.__setattr__(self, "probabilities", probs)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "labels", labels)

    def __len__(self):
        return len(self.probabilities)

    @property
    def layout(self):
        return self.states[0].layout

    def label_layout(self, *names):
        width = max(1, qubits_for(len(self)))
        return RegisterLayout(tuple((n, width) for n in names))


def labeled_mixture(e):
    """``sum_x p(x) |x><x|_X (x) |phi_x><phi_x|``."""
    layout = e.label_layout(LABEL).concat(e.layout)
    rho = np.zeros((layout.dim, layout.dim), dtype=complex)
    block = e.layout.dim
    for x, (p, s) in enumerate(zip(e.probabilities, e.states)):
        sl = slice(x * block, (x + 1) * block)
        rho[sl, sl] = p * np.outer(s.amplitudes, s.amplitudes.conj())
    return DensityMatrix.normalized(layout, rho)


def purify(e):
    """``sum_x sqrt(p(x)) |x>_X |x>_X' |phi_x>``."""
    layout = e.label_layout(LABEL, REFERENCE).concat(e.layout)
    dx = 2 ** layout.width(LABEL)
    amps = np.zeros(layout.dim, dtype=complex)
    block = e.layout.dim
    for x, (p, s) in enumerate(zip(e.probabilities, e.states)):
        start = (x * dx + x) * block
        amps[start : start + block] = np.sqrt(p) * s.amplitudes
    return StateVector(layout, amps)


def _lift(cmap, n_labels_dim):
    return np.kron(np.eye(n_labels_dim), cmap.c)


def apply_proper(cmap, e):
    """Evolve and renormalize each member; probabilities are left as they are.

    Every member maps to a single output state, so there is no Bayes
    reweighting to do.
    """
    outputs = []
    for label, s in zip(e.labels, e.states):
        try:
            outputs.append(apply_pure(cmap, s))
        except ParadoxError as exc:
            raise ParadoxError(f"member with label {label!r} is annihilated by the map") from exc
    return LabeledEnsemble(e.probabilities, tuple(outputs), e.labels)


def apply_true_density(cmap, mixture, tol=1e-18):
    """``(I (x) C) m (I (x) C)^dag``, renormalized."""
    rho = np.asarray(getattr(mixture, "entries", mixture), dtype=complex)
    dx = rho.shape[0] // cmap.layout.dim
    big = _lift(cmap, dx)
    out = big @ rho @ big.conj().T
    weight = np.trace(out).real
    if weight <= tol * cmap.sigma_max**2:
        raise ParadoxError("labeled mixture is annihilated by the map")
    layout = mixture.layout if isinstance(mixture, DensityMatrix) else None
    if layout is None:
        layout = RegisterLayout.of((LABEL, qubits_for(dx))).concat(cmap.layout)
    return DensityMatrix.normalized(layout, out / weight)


def apply_purified(cmap, purified, tol=1e-9):
    """Evolve only the system part of the purified ensemble and renormalize."""
    v = np.asarray(getattr(purified, "amplitudes", purified), dtype=complex)
    d_ref = v.shape[0] // cmap.layout.dim
    out = _lift(cmap, d_ref) @ v
    norm = np.linalg.norm(out)
    if norm <= tol * cmap.sigma_max * np.linalg.norm(v):
        raise ParadoxError("purified ensemble is annihilated by the map")
    layout = purified.layout if isinstance(purified, StateVector) else None
    if layout is None:
        width = qubits_for(int(round(np.sqrt(d_ref))))
        layout = RegisterLayout.of((LABEL, width), (REFERENCE, width)).concat(cmap.layout)
    return StateVector(layout, out / norm)


def q_distribution(probabilities, weights):
    """Reweight ``p(x)`` by per-member survival weights and renormalize."""
    q = np.asarray(probabilities, dtype=float) * np.asarray(weights, dtype=float)
    return q / q.sum()


def compare_semantics(cmap, e):
    """Evaluate all three readings and compare the label distributions.

    ``q_*`` are marginals on the label register after the map;
    ``tv_distance`` is the total variation between ``p`` and the true-density
    marginal; ``purification_error`` is the largest entry of the difference
    between the traced purified output and the true-density output.
    """
    n = len(e)
    proper = apply_proper(cmap, e)
    d_sys = cmap.layout.dim
    proper_joint = np.zeros((n, d_sys))
    for x, (p, s) in enumerate(zip(e.probabilities, proper.states)):
        proper_joint[x] = p * s.probabilities()

    mixture = labeled_mixture(e)
    true_out = apply_true_density(cmap, mixture)
    dx = 2 ** true_out.layout.width(LABEL)
    true_joint = true_out.probabilities().reshape(dx, d_sys)[:n]

    pure_out = apply_purified(cmap, purify(e))
    rho = np.outer(pure_out.amplitudes, pure_out.amplitudes.conj())
    traced = partial_trace_operator(rho, pure_out.layout, REFERENCE)
    purification_error = float(np.max(np.abs(traced - true_out.entries)))

    p = np.asarray(e.probabilities)
    q_true = true_joint.sum(axis=1)
    traced_probs = np.clip(np.diag(traced).real, 0, None).reshape(dx, d_sys)[:n]
    return {
        "labels": list(e.labels),
        "p": p,
        "q_proper": proper_joint.sum(axis=1),
        "q_true_density": q_true,
        "q_purified": traced_probs.sum(axis=1),
        "proper_joint": proper_joint,
        "true_density_joint": true_joint,
        "tv_distance": float(0.5 * np.abs(p - q_true).sum()),
        "purification_error": purification_error,
        "purification_consistent": purification_error <= 1e-12,
    }
