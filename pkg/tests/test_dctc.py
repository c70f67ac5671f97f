import numpy as np
import pytest

from pctc.dctc import dctc_demo, dctc_output, residual, solve_fixed_point
from pctc.distinguish import b92_unitary
from pctc.errors import NonConvergence
from pctc.linalg import KET0, KET1, KET_MINUS, KET_PLUS, SWAP, DensityMatrix, RegisterLayout

from conftest import random_state, random_unitary


def proj(v):
    return np.outer(v, np.conj(v))


def channel_by_hand(u, rho_sys, tau):
    """Tr_SYS of U (rho (x) tau) U^dag, summing over SYS basis vectors."""
    d_sys, d_ctc = rho_sys.shape[0], tau.shape[0]
    joint = u @ np.kron(rho_sys, tau) @ u.conj().T
    out = np.zeros((d_ctc, d_ctc), dtype=complex)
    for s in range(d_sys):
        e = np.kron(np.eye(d_sys)[s], np.eye(d_ctc))
        out += e @ joint @ e.T
    return out


def test_identity_keeps_maximally_mixed():
    sol = solve_fixed_point(np.eye(4), proj(KET0))
    assert np.allclose(sol.rho_ctc.entries, np.eye(2) / 2)
    assert sol.residual <= 1e-8


def test_swap_fixed_point_is_the_input(rng):
    psi = random_state(rng, 2)
    sol = solve_fixed_point(SWAP, proj(psi))
    assert np.allclose(sol.rho_ctc.entries, proj(psi), atol=1e-9)


def test_ch_swap_fixed_point_satisfies_deutsch_condition():
    u = b92_unitary()
    sol = solve_fixed_point(u, proj(KET0))
    tau = sol.rho_ctc.entries
    assert np.abs(channel_by_hand(u, proj(KET0), tau) - tau).sum() <= 1e-8
    assert sol.residual <= 1e-8
    assert residual(u, proj(KET0), tau) == pytest.approx(sol.residual, abs=1e-15)


def test_ch_swap_separates_zero_and_minus():
    u = b92_unitary()
    z = {}
    for name, v in (("0", KET0), ("-", KET_MINUS)):
        sol = solve_fixed_point(u, proj(v))
        z[name] = dctc_output(u, proj(v), sol).probabilities()
    assert z["0"][0] >= 1 - 1e-8
    assert z["-"][1] >= 1 - 1e-8


def test_outputs_identity_and_swap(rng):
    psi = random_state(rng, 2)
    for u in (np.eye(4), SWAP):
        sol = solve_fixed_point(u, proj(psi))
        assert np.allclose(dctc_output(u, proj(psi), sol).entries, proj(psi), atol=1e-9)


def test_random_circuits_give_valid_states(rng):
    for _ in range(10):
        u = random_unitary(rng, 8)
        rho = proj(random_state(rng, 2))
        sol = solve_fixed_point(u, rho)
        assert sol.residual <= 1e-8
        out = dctc_output(u, rho, sol)
        assert isinstance(out, DensityMatrix)
        assert np.linalg.eigvalsh(out.entries).min() >= -1e-10
        assert abs(np.trace(out.entries) - 1) <= 1e-12


def test_periodic_orbit_falls_back_to_average():
    # CNOT from SYS onto CTC with SYS = |1>: tau flips each step, the fixed point is I/2
    cnot = np.kron(proj(KET0), np.eye(2)) + np.kron(proj(KET1), [[0, 1], [1, 0]])
    sol = solve_fixed_point(cnot, proj(KET1))
    assert np.allclose(sol.rho_ctc.entries, np.eye(2) / 2)


def test_non_convergence_reports_diagnostics():
    with pytest.raises(NonConvergence) as info:
        solve_fixed_point(b92_unitary(), proj(KET0), max_iter=3)
    assert info.value.residual > 1e-8
    assert info.value.iterations == 3


def test_demo_contrast():
    report = dctc_demo()
    assert report["dctc"]["0"]["z_probabilities"][0] >= 1 - 1e-8
    assert report["dctc"]["-"]["z_probabilities"][1] >= 1 - 1e-8
    assert report["pctc"]["1"]["z_probabilities"][1] == pytest.approx(1, abs=1e-10)
    assert report["pctc"]["+"]["z_probabilities"][0] == pytest.approx(1, abs=1e-10)
    for name in ("0", "-"):
        assert report["dctc"][name]["residual"] <= 1e-8


def test_layout_is_plain_qubits():
    sol = solve_fixed_point(SWAP, proj(KET_PLUS))
    assert sol.rho_ctc.layout == RegisterLayout.of(("CTC", 1))
