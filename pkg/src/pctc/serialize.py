"""JSON wire formats.

Operators: ``{"dims": [out, in], "entries": [[re, im], ...]}`` row-major.
States: ``{"registers": [["name", width], ...], "amplitudes": [[re, im], ...]}``.
Density matrices add ``"entries"`` (row-major) in place of ``"amplitudes"``.
Measurements and state sets are JSON lists of operators and states; an
ensemble is a list of ``{"p": ..., "state": {...}, "label": ...}``.
"""

import json
import math

import numpy as np

from .linalg import DensityMatrix, RegisterLayout, StateVector

__all__ = [
    "operator_to_json",
    "operator_from_json",
    "layout_to_json",
    "layout_from_json",
    "state_to_json",
    "state_from_json",
    "density_to_json",
    "density_from_json",
    "load_json",
    "to_jsonable",
    "dumps",
]


def _pairs(values):
    return [[float(z.real), float(z.imag)] for z in np.asarray(values, dtype=complex).reshape(-1)]


def _complex(pairs):
    arr = np.asarray(pairs, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("complex entries must be [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def operator_to_json(op):
    op = np.asarray(op, dtype=complex)
    return {"dims": [int(op.shape[0]), int(op.shape[1])], "entries": _pairs(op)}


def operator_from_json(obj):
    out, inp = (int(d) for d in obj["dims"])
    entries = _complex(obj["entries"])
    if entries.size != out * inp:
        raise ValueError(f"operator declares dims {out}x{inp} but has {entries.size} entries")
    return entries.reshape(out, inp)


def layout_to_json(layout):
    return [[name, width] for name, width in layout.registers]


def layout_from_json(obj):
    return RegisterLayout(tuple((str(name), int(width)) for name, width in obj))


def state_to_json(state):
    return {"registers": layout_to_json(state.layout), "amplitudes": _pairs(state.amplitudes)}


def state_from_json(obj):
    return StateVector(layout_from_json(obj["registers"]), _complex(obj["amplitudes"]))


def density_to_json(rho):
    return {"registers": layout_to_json(rho.layout), "entries": _pairs(rho.entries)}


def density_from_json(obj):
    layout = layout_from_json(obj["registers"])
    return DensityMatrix(layout, _complex(obj["entries"]).reshape(layout.dim, layout.dim))


def load_json(path):
    with open(path) as fh:
        return json.load(fh)


def _round(x, digits):
    if not math.isfinite(x) or x == 0:
        return float(x)
    return float(f"{x:.{digits}g}")


def to_jsonable(obj, digits=12):
    """Convert reports to plain JSON types, rounding floats to ``digits`` significant digits.

    Complex values become ``[re, im]`` pairs; numpy arrays become nested lists.
    """
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v, digits) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist(), digits)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_round(obj.real, digits), _round(obj.imag, digits)]
    if isinstance(obj, (float, np.floating)):
        return _round(float(obj), digits)
    if isinstance(obj, StateVector):
        return state_to_json(obj)
    if isinstance(obj, DensityMatrix):
        return density_to_json(obj)
    return obj


def dumps(obj):
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True) + "\n"
