"""Dense linear algebra over named qubit registers.

Conventions used everywhere in the package:

* Operators are plain 2-D complex ``numpy`` arrays.
* A :class:`RegisterLayout` lists registers in tensor-factor order. The first
  register occupies the most significant bits of a basis index, and within a
  register earlier qubits are more significant.
* :class:`StateVector` and :class:`DensityMatrix` pair an array with a layout
  and are immutable once built.
"""

from dataclasses import dataclass
from functools import reduce
import math

import numpy as np

from .config import get_settings
from .errors import CapacityError, LayoutError

__all__ = [
    "RegisterLayout",
    "StateVector",
    "DensityMatrix",
    "tensor",
    "partial_trace_operator",
    "permute_registers",
    "embed",
    "singular_values",
    "spectral_norm",
    "is_unitary",
    "complete_unitary",
    "permutation_matrix",
    "apply_permutation",
    "trace_distance",
    "fidelity",
    "check_capacity",
    "qubits_for",
    "basis_state",
    "pad_vector",
    "KET0",
    "KET1",
    "KET_PLUS",
    "KET_MINUS",
    "I2",
    "X",
    "Y",
    "Z",
    "H",
    "CNOT",
    "SWAP",
]

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10

_SQ2 = 1 / np.sqrt(2)
KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)
KET_PLUS = np.array([_SQ2, _SQ2], dtype=complex)
KET_MINUS = np.array([_SQ2, -_SQ2], dtype=complex)
I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) * _SQ2
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)


def qubits_for(dim):
    """Smallest number of qubits whose Hilbert space holds ``dim`` levels."""
    return max(0, math.ceil(math.log2(dim))) if dim > 1 else 0


def check_capacity(n_qubits):
    limit = get_settings().max_qubits
    if n_qubits > limit:
        raise CapacityError(f"{n_qubits} qubits exceeds the dense limit of {limit}")


def _frozen(array):
    array = np.array(array, dtype=complex)
    array.flags.writeable = False
    return array


@dataclass(frozen=True)
class RegisterLayout:
    """Ordered named registers with qubit widths."""

    registers: tuple

    def __post_init__(self):
        regs = tuple((str(name), int(width)) for name, width in self.registers)
        if not regs:
            raise LayoutError("a layout needs at least one register")
        names = [name for name, _ in regs]
        if len(set(names)) != len(names):
            raise LayoutError(f"duplicate register names in {names}")
        for name, width in regs:
            if width < 1:
                raise LayoutError(f"register {name!r} has width {width}; widths must be >= 1")
        object.__setattr__(self, "registers", regs)

    @classmethod
    def of(cls, *pairs):
        return cls(tuple(pairs))

    @property
    def names(self):
        return tuple(name for name, _ in self.registers)

    @property
    def widths(self):
        return tuple(width for _, width in self.registers)

    @property
    def total(self):
        return sum(self.widths)

    @property
    def dim(self):
        return 2 ** self.total

    @property
    def dims(self):
        return tuple(2**w for w in self.widths)

    def __contains__(self, name):
        return name in self.names

    def index(self, name):
        try:
            return self.names.index(name)
        except ValueError:
            raise LayoutError(f"unknown register {name!r}; layout has {list(self.names)}") from None

    def width(self, name):
        return self.registers[self.index(name)][1]

    def without(self, *names):
        for name in names:
            self.index(name)
        return RegisterLayout(tuple(r for r in self.registers if r[0] not in names))

    def reorder(self, new_order):
        new_order = list(new_order)
        if sorted(new_order) != sorted(self.names) or len(new_order) != len(self.names):
            raise LayoutError(f"{new_order} is not a permutation of {list(self.names)}")
        return RegisterLayout(tuple((n, self.width(n)) for n in new_order))

    def concat(self, other):
        return RegisterLayout(self.registers + other.registers)

    def split_index(self, index):
        """Per-register integer values of a basis index."""
        values = {}
        for name, width in reversed(self.registers):
            values[name] = index & ((1 << width) - 1)
            index >>= width
        return {name: values[name] for name in self.names}

    def join_index(self, values):
        index = 0
        for name, width in self.registers:
            value = int(values.get(name, 0))
            if not 0 <= value < 2**width:
                raise LayoutError(f"value {value} does not fit register {name!r} of width {width}")
            index = (index << width) | value
        return index

    def bitstring(self, index, names=None):
        values = self.split_index(index)
        names = self.names if names is None else names
        return "".join(format(values[n], f"0{self.width(n)}b") for n in names)


@dataclass(frozen=True)
class StateVector:
    """Unit-norm amplitude vector over a register layout.

    The constructor accepts amplitudes whose norm is within 1e-10 of one and
    rescales them to unit norm; use :meth:`normalized` for arbitrary nonzero
    vectors.
    """

    layout: RegisterLayout
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape[0] != self.layout.dim:
            raise LayoutError(f"{amps.shape[0]} amplitudes do not match layout dimension {self.layout.dim}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        norm = np.linalg.norm(amps)
        if abs(norm - 1) > 1e-10:
            raise ValueError(f"state has norm {norm}, expected 1")
        # leave already-unit vectors untouched so reindexing stays bit-exact
        if abs(norm - 1) > 1e-14:
            amps = amps / norm
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @classmethod
    def normalized(cls, layout, amplitudes):
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise ValueError("cannot normalize the zero vector")
        return cls(layout, amps / norm)

    @property
    def dim(self):
        return self.layout.dim

    def probabilities(self):
        return np.abs(self.amplitudes) ** 2

    def projector(self):
        return DensityMatrix(self.layout, np.outer(self.amplitudes, self.amplitudes.conj()))

    def distribution(self, registers=None, cutoff=1e-14):
        """Computational-basis outcome distribution, optionally marginal.

        Keys are bitstrings of the requested registers concatenated in the
        requested order; outcomes at or below ``cutoff`` are dropped.
        """
        return _distribution(self.layout, self.probabilities(), registers, cutoff)


@dataclass(frozen=True)
class DensityMatrix:
    layout: RegisterLayout
    entries: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.entries, dtype=complex)
        if rho.shape != (self.layout.dim, self.layout.dim):
            raise LayoutError(f"density matrix of shape {rho.shape} does not match layout dimension {self.layout.dim}")
        if not np.all(np.isfinite(rho)):
            raise ValueError("density matrix must be finite")
        if np.max(np.abs(rho - rho.conj().T)) > HERMITIAN_TOL:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(rho).real - 1) > 1e-12:
            raise ValueError(f"density matrix has trace {np.trace(rho).real}, expected 1")
        if np.linalg.eigvalsh(rho).min() < -PSD_TOL:
            raise ValueError("density matrix is not positive semidefinite")
        object.__setattr__(self, "entries", _frozen(rho))

    @classmethod
    def normalized(cls, layout, entries):
        """Hermitize and rescale to unit trace before validating."""
        rho = np.asarray(entries, dtype=complex)
        rho = (rho + rho.conj().T) / 2
        return cls(layout, rho / np.trace(rho).real)

    @property
    def dim(self):
        return self.layout.dim

    def probabilities(self):
        return np.clip(np.diag(self.entries).real, 0, None)

    def distribution(self, registers=None, cutoff=1e-14):
        return _distribution(self.layout, self.probabilities(), registers, cutoff)


def _distribution(layout, probs, registers, cutoff):
    names = layout.names if registers is None else tuple(registers)
    for name in names:
        layout.index(name)
    keep = [layout.index(n) for n in names]
    tensor_probs = probs.reshape(layout.dims)
    drop = tuple(i for i in range(len(layout.names)) if i not in keep)
    marginal = tensor_probs.sum(axis=drop) if drop else tensor_probs
    # summed axes are removed in ascending order; bring kept axes to request order
    remaining = sorted(keep)
    marginal = np.transpose(marginal, [remaining.index(i) for i in keep])
    sub = RegisterLayout(tuple((n, layout.width(n)) for n in names))
    flat = marginal.reshape(-1)
    return {sub.bitstring(i): float(p) for i, p in enumerate(flat) if p > cutoff}


def basis_state(layout, values=None):
    """Computational basis state; ``values`` maps register names to integers."""
    amps = np.zeros(layout.dim, dtype=complex)
    amps[layout.join_index(values or {})] = 1
    return StateVector(layout, amps)


def pad_vector(vec, dim):
    out = np.zeros(dim, dtype=complex)
    out[: len(vec)] = vec
    return out


def tensor(*ops):
    """Kronecker product, first argument most significant."""
    if not ops:
        raise ValueError("tensor needs at least one operand")
    ops = [np.atleast_1d(np.asarray(op, dtype=complex)) for op in ops]
    out_dim = math.prod(op.shape[0] for op in ops)
    in_dim = math.prod(op.shape[1] if op.ndim == 2 else 1 for op in ops)
    check_capacity(qubits_for(max(out_dim, in_dim)))
    return reduce(np.kron, ops)


def _as_matrix(u, layout):
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape != (layout.dim, layout.dim):
        raise LayoutError(f"operator of shape {u.shape} does not match layout dimension {layout.dim}")
    return u


def permute_registers(obj, new_order, layout=None):
    """Reindex a state or operator so its layout lists ``new_order``.

    StateVector and DensityMatrix inputs carry their own layout and come back
    as the same type; bare arrays need ``layout`` and come back as arrays.
    """
    if isinstance(obj, StateVector):
        new_layout = obj.layout.reorder(new_order)
        perm = [obj.layout.index(n) for n in new_order]
        amps = obj.amplitudes.reshape(obj.layout.dims).transpose(perm).reshape(-1)
        return StateVector(new_layout, amps)
    if isinstance(obj, DensityMatrix):
        return DensityMatrix(obj.layout.reorder(new_order), permute_registers(obj.entries, new_order, obj.layout))
    if layout is None:
        raise LayoutError("a layout is required to permute a bare array")
    new_layout = layout.reorder(new_order)
    perm = [layout.index(n) for n in new_order]
    arr = np.asarray(obj, dtype=complex)
    if arr.ndim == 1:
        if arr.shape[0] != layout.dim:
            raise LayoutError("vector length does not match layout")
        return arr.reshape(layout.dims).transpose(perm).reshape(-1)
    arr = _as_matrix(arr, layout)
    n = len(perm)
    axes = perm + [p + n for p in perm]
    return arr.reshape(layout.dims * 2).transpose(axes).reshape(layout.dim, layout.dim)


def partial_trace_operator(u, layout, traced):
    """Trace one or more registers out of a square operator.

    Works for any operator, unitary or not, and for density matrices. The
    traced registers are moved to the least significant slots and summed
    over their diagonal blocks.
    """
    traced = [traced] if isinstance(traced, str) else list(traced)
    for name in traced:
        layout.index(name)
    u = _as_matrix(u, layout)
    kept = [n for n in layout.names if n not in traced]
    if not kept:
        return np.array([[np.trace(u)]])
    moved = permute_registers(u, kept + traced, layout)
    d_keep = math.prod(2 ** layout.width(n) for n in kept)
    d_tr = layout.dim // d_keep
    return np.einsum("ajbj->ab", moved.reshape(d_keep, d_tr, d_keep, d_tr))


def embed(op, layout, targets):
    """Lift ``op`` acting on ``targets`` (in that order) to the full layout."""
    targets = list(targets)
    rest = [n for n in layout.names if n not in targets]
    d_t = math.prod(2 ** layout.width(n) for n in targets)
    op = np.asarray(op, dtype=complex)
    if op.shape != (d_t, d_t):
        raise LayoutError(f"operator of shape {op.shape} does not act on registers {targets}")
    d_rest = layout.dim // d_t
    full = tensor(op, np.eye(d_rest)) if rest else op
    staged = layout.reorder(targets + rest)
    return permute_registers(full, layout.names, staged)


def singular_values(m):
    """Singular values in descending order (LAPACK)."""
    return np.linalg.svd(np.atleast_2d(np.asarray(m, dtype=complex)), compute_uv=False)


def spectral_norm(m):
    """Largest singular value.

    Exact for dimensions up to 512. Beyond that a deterministic power
    iteration gives a lower bound accurate to well under a percent, which is
    all the relative paradox threshold needs.
    """
    m = np.asarray(m, dtype=complex)
    if max(m.shape) <= 512:
        return float(singular_values(m)[0]) if m.size else 0.0
    rng = np.random.default_rng(12345)
    v = rng.standard_normal(m.shape[1]) + 1j * rng.standard_normal(m.shape[1])
    v /= np.linalg.norm(v)
    sigma = 0.0
    for _ in range(200):
        w = m.conj().T @ (m @ v)
        norm = np.linalg.norm(w)
        if norm == 0:
            return 0.0
        new_sigma = math.sqrt(norm)
        v = w / norm
        if abs(new_sigma - sigma) <= 1e-6 * new_sigma:
            sigma = new_sigma
            break
        sigma = new_sigma
    return float(np.linalg.norm(m @ v))


def is_unitary(u, tol=1e-10):
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) <= tol)


def complete_unitary(dim, columns, tol=1e-7):
    """Extend fixed orthonormal columns to a unitary.

    ``columns`` maps column index to vector. The remaining columns are filled,
    in increasing index order, with Gram-Schmidt residues of the canonical
    basis vectors taken in index order; canonical vectors already in the span
    are skipped.
    """
    fixed = {int(k): np.asarray(v, dtype=complex).reshape(-1) for k, v in columns.items()}
    u = np.zeros((dim, dim), dtype=complex)
    basis = []
    for k, v in sorted(fixed.items()):
        if v.shape[0] != dim:
            raise ValueError(f"column {k} has length {v.shape[0]}, expected {dim}")
        u[:, k] = v
        basis.append(v)
    if basis:
        gram = np.array(basis).conj() @ np.array(basis).T
        if np.max(np.abs(gram - np.eye(len(basis)))) > 1e-10:
            raise ValueError("fixed columns are not orthonormal")
    free = [k for k in range(dim) if k not in fixed]
    q = np.array(basis, dtype=complex).T if basis else np.zeros((dim, 0), dtype=complex)
    filled = []
    for e in range(dim):
        if len(filled) == len(free):
            break
        v = np.zeros(dim, dtype=complex)
        v[e] = 1
        for _ in range(2):
            v = v - q @ (q.conj().T @ v)
        norm = np.linalg.norm(v)
        if norm > tol:
            v = v / norm
            q = np.column_stack([q, v])
            filled.append(v)
    if len(filled) != len(free):
        raise ValueError("could not complete the unitary")
    for k, v in zip(free, filled):
        u[:, k] = v
    return u


def permutation_matrix(perm):
    """Matrix P with P|i> = |perm[i]>."""
    perm = np.asarray(perm)
    p = np.zeros((len(perm), len(perm)), dtype=complex)
    p[perm, np.arange(len(perm))] = 1
    return p


def apply_permutation(perm, op):
    """Exact product ``permutation_matrix(perm) @ op`` by row scattering."""
    op = np.asarray(op, dtype=complex)
    out = np.empty_like(op)
    out[np.asarray(perm)] = op
    return out


def _as_density(x):
    if isinstance(x, StateVector):
        x = x.amplitudes
    elif isinstance(x, DensityMatrix):
        x = x.entries
    x = np.asarray(x, dtype=complex)
    if x.ndim == 1:
        x = x / np.linalg.norm(x)
        return np.outer(x, x.conj())
    return x


def trace_distance(a, b):
    """Trace distance between two states (vectors or density matrices)."""
    if all(isinstance(s, StateVector) or np.ndim(getattr(s, "entries", s)) == 1 for s in (a, b)):
        va = np.asarray(getattr(a, "amplitudes", a), dtype=complex)
        vb = np.asarray(getattr(b, "amplitudes", b), dtype=complex)
        va, vb = va / np.linalg.norm(va), vb / np.linalg.norm(vb)
        inner = np.vdot(va, vb)
        c = abs(inner)
        # 1 - c**2 = (1 - c)(1 + c) with 1 - c = ||a - e^{-i arg} b||^2 / 2, which
        # avoids the cancellation floor of sqrt(1 - c**2) near identical states
        aligned = vb * (np.conj(inner) / c if c > 0 else 1)
        one_minus_c = min(1.0, np.linalg.norm(va - aligned) ** 2 / 2)
        return float(math.sqrt(max(0.0, one_minus_c * (1 + min(c, 1.0)))))
    diff = _as_density(a) - _as_density(b)
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh((diff + diff.conj().T) / 2))))


def fidelity(a, b):
    """Squared overlap |<a|b>|^2 between two pure states."""
    va = np.asarray(getattr(a, "amplitudes", a), dtype=complex)
    vb = np.asarray(getattr(b, "amplitudes", b), dtype=complex)
    return float(abs(np.vdot(va, vb)) ** 2 / (np.vdot(va, va).real * np.vdot(vb, vb).real))
