import itertools

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


def random_state(rng, d):
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def random_unitary(rng, d):
    # QR of a Ginibre matrix with the phase fix, independent of scipy's sampler
    z = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def pt_last(u, d_keep, d_traced):
    """sum_j (I (x) <j|) u (I (x) |j>), written out with explicit basis vectors."""
    out = np.zeros((d_keep, d_keep), dtype=complex)
    for j in range(d_traced):
        e = np.zeros((d_traced, 1))
        e[j] = 1
        left = np.kron(np.eye(d_keep), e.T)
        right = np.kron(np.eye(d_keep), e)
        out += left @ u @ right
    return out


def same_state(a, b):
    """1 - |<a|b>|^2 for normalized vectors."""
    a = np.asarray(a) / np.linalg.norm(a)
    b = np.asarray(b) / np.linalg.norm(b)
    return 1 - abs(np.vdot(a, b)) ** 2


def count_models(n, clauses):
    """Truth table by brute force, x1 most significant, independent of CnfFormula."""
    m = 0
    for bits in itertools.product([0, 1], repeat=n):
        if all(any(bits[abs(lit) - 1] == (lit > 0) for lit in clause) for clause in clauses):
            m += 1
    return m


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    failed = report.failed or (report.when == "call" and report.skipped)
    seconds = report.duration if report.when == "call" else 0.0
    prev = _CRITERIA.get(number, (title, True, 0.0))
    _CRITERIA[number] = (title, prev[1] and not failed, prev[2] + seconds)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, ok, seconds = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}  ({seconds:.2f} s)")
