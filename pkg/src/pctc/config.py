"""Process-wide numerical settings.

Only two knobs are global: the dense capacity limit and the relative paradox
threshold. Both are read at call time, so the CLI can override them once at
startup and library callers can use :func:`override` in a ``with`` block.
"""

import contextlib
import os
from dataclasses import dataclass, replace

DEFAULT_MAX_QUBITS = 24
DEFAULT_PARADOX_TOL = 1e-9


@dataclass(frozen=True)
class Settings:
    max_qubits: int = DEFAULT_MAX_QUBITS
    paradox_tol: float = DEFAULT_PARADOX_TOL


def _from_env():
    raw = os.environ.get("PCTC_MAX_QUBITS")
    if raw is None:
        return Settings()
    value = int(raw)
    if value < 1:
        raise ValueError(f"PCTC_MAX_QUBITS must be positive, got {raw!r}")
    return Settings(max_qubits=value)


_settings = _from_env()


def get_settings():
    return _settings


def configure(**changes):
    """Replace global settings; returns the previous value."""
    global _settings
    for key, value in changes.items():
        if value is not None and value <= 0:
            raise ValueError(f"{key} must be positive, got {value}")
    previous = _settings
    _settings = replace(_settings, **{k: v for k, v in changes.items() if v is not None})
    return previous


@contextlib.contextmanager
def override(**changes):
    previous = configure(**changes)
    try:
        yield get_settings()
    finally:
        global _settings
        _settings = previous
