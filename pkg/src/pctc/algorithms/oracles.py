"""Reversible classical gates as permutation unitaries."""

import numpy as np

from ..linalg import RegisterLayout, apply_permutation, check_capacity, permutation_matrix

__all__ = [
    "permutation_from_function",
    "build_oracle_unitary",
    "oracle_layout",
    "as_permutation",
    "dense_product",
]


def permutation_from_function(layout, fn):
    """Index permutation of a classical reversible gate.

    ``fn`` receives a dict of register values and returns the (possibly
    partial) dict of updated values. Raises ValueError if the map is not a
    bijection.
    """
    perm = np.empty(layout.dim, dtype=np.intp)
    for index in range(layout.dim):
        values = layout.split_index(index)
        values.update(fn(dict(values)))
        perm[index] = layout.join_index(values)
    if len(np.unique(perm)) != layout.dim:
        raise ValueError("gate function is not reversible")
    return perm


def oracle_layout(n_bits):
    return RegisterLayout.of(("WITNESS", n_bits), ("VALID", 1))


def build_oracle_unitary(pred, n_bits):
    """``|w>|b> -> |w>|b XOR not pred(w)>`` on WITNESS (x) VALID.

    VALID ends up 0 for accepted witnesses when it starts at 0.
    """
    check_capacity(n_bits + 1)
    layout = oracle_layout(n_bits)
    perm = permutation_from_function(layout, lambda v: {"VALID": v["VALID"] ^ (not pred(v["WITNESS"]))})
    return permutation_matrix(perm)


def as_permutation(m):
    """Index form of a 0/1 permutation matrix, or None for anything else."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return None
    if np.count_nonzero(m) != m.shape[0] or not np.all(np.count_nonzero(m, axis=0) == 1):
        return None
    rows = np.argmax(m != 0, axis=0)
    if not np.all(m[rows, np.arange(m.shape[1])] == 1) or len(np.unique(rows)) != m.shape[0]:
        return None
    return rows


def dense_product(*factors):
    """Explicit product ``factors[0] @ factors[1] @ ... @ factors[-1]``.

    Factors may be matrices or index permutations. Permutation factors are
    applied by row scattering, which yields the same matrix as a full matmul.
    """
    factors = list(factors)
    result = np.asarray(factors.pop(), dtype=complex)
    if result.ndim == 1:
        result = permutation_matrix(result)
    for f in reversed(factors):
        f = np.asarray(f)
        perm = f if f.ndim == 1 else as_permutation(f)
        result = apply_permutation(perm, result) if perm is not None else f @ result
    return result
