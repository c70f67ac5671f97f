"""Exception hierarchy.

Every domain error carries a short machine-readable ``code`` so the CLI can
report it as structured output instead of a traceback.
"""


class PctcError(Exception):
    code = "pctc-error"


class LayoutError(PctcError, ValueError):
    code = "layout"


class CapacityError(PctcError):
    code = "capacity"


class ParadoxError(PctcError):
    """The input is annihilated by the induced operator."""

    code = "paradox"


class NullEvolution(ParadoxError):
    """The induced operator vanishes, so every input is paradoxical."""

    code = "null-evolution"


class MeasurementError(PctcError, ValueError):
    code = "measurement"


class DependentSetError(PctcError, ValueError):
    code = "dependent-set"


class NonConvergence(PctcError):
    code = "non-convergence"

    def __init__(self, message, *, residual=None, iterations=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class PrimeInputError(PctcError, ValueError):
    code = "prime-input"


class DimacsSyntaxError(PctcError, ValueError):
    code = "dimacs-syntax"

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class HeaderMismatch(DimacsSyntaxError):
    code = "dimacs-header-mismatch"
