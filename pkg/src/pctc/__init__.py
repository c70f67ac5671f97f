"""Simulator for quantum circuits with postselected closed timelike curves."""

from .config import configure, get_settings, override
from .dctc import dctc_demo, dctc_output, solve_fixed_point
from .distinguish import (
    bb84_demo,
    build_c,
    build_cascade_unitary,
    build_one_qubit_variant,
    distinguish,
    dual_basis,
    impossibility_witness,
)
from .engine import CTC, InducedMap, PctcCircuit, apply_mixed, apply_pure, induced_map, retro_demo, teleportation_oracle
from .ensembles import LabeledEnsemble, apply_proper, apply_purified, apply_true_density, compare_semantics
from .errors import (
    CapacityError,
    DependentSetError,
    DimacsSyntaxError,
    HeaderMismatch,
    LayoutError,
    MeasurementError,
    NonConvergence,
    NullEvolution,
    ParadoxError,
    PctcError,
    PrimeInputError,
)
from .gadget import GeneralizedMeasurement, build_circuit, postselect
from .linalg import DensityMatrix, RegisterLayout, StateVector, partial_trace_operator, permute_registers, tensor

__version__ = "0.1.0"
