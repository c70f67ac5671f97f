"""Postselected-CTC semantics.

A circuit couples chronology-respecting registers to a register named
``CTC`` through a unitary ``U``. The induced operator is ``C = Tr_CTC U`` and
the evolution is the renormalized map ``rho -> C rho C^dag / Tr(C rho C^dag)``.
:func:`teleportation_oracle` recomputes the same output the long way, by
explicitly projecting onto a maximally entangled pair, and serves as an
independent check on :func:`induced_map`.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .config import get_settings
from .errors import LayoutError, NullEvolution, ParadoxError
from .linalg import (
    CNOT,
    I2,
    DensityMatrix,
    RegisterLayout,
    StateVector,
    X,
    embed,
    is_unitary,
    partial_trace_operator,
    permute_registers,
    spectral_norm,
    tensor,
)

__all__ = [
    "CTC",
    "PctcCircuit",
    "InducedMap",
    "induced_map",
    "apply_pure",
    "apply_mixed",
    "max_entangled",
    "teleportation_oracle",
    "retro_demo",
]

CTC = "CTC"
NULL_TOL = 1e-9


@dataclass(frozen=True)
class PctcCircuit:
    """A unitary over a layout that contains a ``CTC`` register.

    ``validate=False`` skips the O(d^3) unitarity check; builders that
    assemble ``unitary`` from factors already known to be unitary use it.
    """

    layout: RegisterLayout
    unitary: np.ndarray
    validate: bool = True

    def __post_init__(self):
        if CTC not in self.layout:
            raise LayoutError(f"circuit layout {list(self.layout.names)} has no {CTC!r} register")
        if len(self.layout.names) < 2:
            raise LayoutError("circuit needs at least one chronology-respecting register")
        u = np.asarray(self.unitary, dtype=complex)
        if u.shape != (self.layout.dim, self.layout.dim):
            raise LayoutError(f"unitary of shape {u.shape} does not match layout dimension {self.layout.dim}")
        if self.validate and not is_unitary(u, 1e-10):
            raise ValueError("circuit operator is not unitary within 1e-10")
        u.flags.writeable = False
        object.__setattr__(self, "unitary", u)

    @property
    def system_layout(self):
        return self.layout.without(CTC)


@dataclass(frozen=True)
class InducedMap:
    """The (generally non-unitary) operator C acting on the system layout."""

    c: np.ndarray
    layout: RegisterLayout

    def __post_init__(self):
        c = np.array(self.c, dtype=complex)
        if c.shape != (self.layout.dim, self.layout.dim):
            raise LayoutError(f"operator of shape {c.shape} does not match layout dimension {self.layout.dim}")
        c.flags.writeable = False
        object.__setattr__(self, "c", c)

    @cached_property
    def sigma_max(self):
        return spectral_norm(self.c)

    def __mul__(self, alpha):
        return InducedMap(alpha * self.c, self.layout)

    __rmul__ = __mul__


def induced_map(circuit):
    """Trace the CTC register out of the circuit unitary.

    Raises NullEvolution when the result has spectral norm at most 1e-9,
    i.e. every input would be paradoxical.
    """
    c = partial_trace_operator(circuit.unitary, circuit.layout, CTC)
    result = InducedMap(c, circuit.system_layout)
    if result.sigma_max <= NULL_TOL:
        raise NullEvolution("the induced operator vanishes; the evolution does not happen for any input")
    return result


def _amplitudes(psi, dim):
    v = np.asarray(getattr(psi, "amplitudes", psi), dtype=complex).reshape(-1)
    if v.shape[0] != dim:
        raise LayoutError(f"state of dimension {v.shape[0]} does not match operator dimension {dim}")
    return v


def apply_pure(cmap, psi, tol=None):
    """Return ``C|psi> / ||C|psi>||`` as a StateVector on ``cmap.layout``.

    Raises ParadoxError when ``||C psi|| <= tol * sigma_max(C) * ||psi||``.
    """
    tol = get_settings().paradox_tol if tol is None else tol
    v = _amplitudes(psi, cmap.layout.dim)
    out = cmap.c @ v
    norm = np.linalg.norm(out)
    if norm <= tol * cmap.sigma_max * np.linalg.norm(v):
        raise ParadoxError("input is annihilated by the induced operator (grandfather paradox)")
    return StateVector(cmap.layout, out / norm)


def apply_mixed(cmap, rho, tol=None):
    """Return ``C rho C^dag / Tr(C rho C^dag)``."""
    tol = get_settings().paradox_tol if tol is None else tol
    r = np.asarray(getattr(rho, "entries", rho), dtype=complex)
    if r.shape != cmap.c.shape:
        raise LayoutError(f"density matrix of shape {r.shape} does not match operator {cmap.c.shape}")
    out = cmap.c @ r @ cmap.c.conj().T
    weight = np.trace(out).real
    if weight <= (tol * cmap.sigma_max) ** 2:
        raise ParadoxError("mixed input is annihilated by the induced operator")
    return DensityMatrix.normalized(cmap.layout, out / weight)


def max_entangled(d):
    """Amplitudes of (1/sqrt d) sum_i |i>|i>."""
    phi = np.zeros(d * d, dtype=complex)
    phi[np.arange(d) * (d + 1)] = 1 / np.sqrt(d)
    return phi


def teleportation_oracle(circuit, psi, tol=None):
    """Evolve ``psi`` by postselected teleportation instead of a partial trace.

    Prepares ``psi (x) |Phi>_AB`` with A as wide as the CTC register, applies
    ``U`` to the system and A, projects AB onto ``|Phi>`` and renormalizes.
    """
    tol = get_settings().paradox_tol if tol is None else tol
    sys_layout = circuit.system_layout
    d_sys = sys_layout.dim
    d = 2 ** circuit.layout.width(CTC)
    u = permute_registers(circuit.unitary, list(sys_layout.names) + [CTC], circuit.layout)
    v = _amplitudes(psi, d_sys)
    phi = max_entangled(d)
    joint = np.kron(v, phi)
    evolved = np.kron(u, np.eye(d)) @ joint
    projected = np.kron(np.eye(d_sys), phi.conj()[None, :]) @ evolved
    norm = np.linalg.norm(projected)
    # C/d is what the projection implements, so the scale of the threshold matches apply_pure's
    scale = spectral_norm(partial_trace_operator(circuit.unitary, circuit.layout, CTC)) / d
    if norm <= tol * scale * np.linalg.norm(v):
        raise ParadoxError("teleportation projection has zero amplitude")
    return StateVector(sys_layout, projected / norm)


def retro_demo(coupling="cnot"):
    """Z-measurement distribution on A when B later couples to a P-CTC qubit.

    A and B start in (|00> + |11>)/sqrt 2. ``coupling`` selects the B-to-CTC
    gate: ``"cnot"`` (control on |1>_B), ``"anti"`` (control on |0>_B), or
    ``"none"``. Probabilities follow the certain-postselection reading, where
    the future CTC rules out paradoxical measurement records on A.
    """
    layout = RegisterLayout.of(("A", 1), ("B", 1), (CTC, 1))
    gates = {
        "cnot": CNOT,
        "anti": tensor(np.diag([0, 1]), I2) + tensor(np.diag([1, 0]), X),
        "none": np.eye(4),
    }
    if coupling not in gates:
        raise ValueError(f"unknown coupling {coupling!r}; choose from {sorted(gates)}")
    u = embed(gates[coupling], layout, ["B", CTC])
    cmap = induced_map(PctcCircuit(layout, u))
    bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
    return apply_pure(cmap, bell).distribution(["A"])
