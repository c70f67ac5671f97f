import numpy as np
import pytest
from hypothesis import given, strategies as st

from pctc.distinguish import build_c
from pctc.engine import CTC, InducedMap, PctcCircuit, induced_map
from pctc.ensembles import (
    LabeledEnsemble,
    apply_proper,
    apply_purified,
    apply_true_density,
    compare_semantics,
    labeled_mixture,
    purify,
)
from pctc.errors import ParadoxError
from pctc.linalg import KET0, KET1, KET_MINUS, KET_PLUS, RegisterLayout, StateVector, partial_trace_operator

from conftest import random_state, random_unitary, same_state

SYS = RegisterLayout.of(("SYS", 1))


def sv(v, layout=SYS):
    return StateVector(layout, v)


def ensemble(p, vectors, layout=SYS):
    return LabeledEnsemble(tuple(p), tuple(sv(v, layout) for v in vectors))


def two_by_two_q(p, phi0, phi1):
    """Oracle for two qubit states: duals by explicit perpendiculars, no QR."""
    perp = lambda v: np.array([-np.conj(v[1]), np.conj(v[0])])  # noqa: E731
    d0, d1 = perp(phi1), perp(phi0)  # d0 _|_ phi1, d1 _|_ phi0, both unit
    w = np.array([abs(np.vdot(d0, phi0)) ** 2, abs(np.vdot(d1, phi1)) ** 2])
    q = np.asarray(p) * w
    return q / q.sum()


def test_ensemble_validation():
    with pytest.raises(ValueError):
        ensemble([0.5, 0.6], [KET0, KET1])
    with pytest.raises(ValueError):
        ensemble([1.0, 0.0], [KET0, KET1])


def test_proper_example():
    e = ensemble([0.5, 0.5], [KET0, KET_PLUS])
    out = apply_proper(build_c([KET0, KET_PLUS]), e)
    assert out.probabilities == (0.5, 0.5)
    assert same_state(out.states[0].amplitudes, KET0) <= 1e-12
    assert same_state(out.states[1].amplitudes, KET1) <= 1e-12


def test_proper_identity_and_weights():
    ident = InducedMap(np.eye(2), SYS)
    e = ensemble([1 / 3, 2 / 3], [KET0, KET_PLUS])
    out = apply_proper(ident, e)
    assert out.probabilities == e.probabilities
    for a, b in zip(out.states, e.states):
        assert np.allclose(a.amplitudes, b.amplitudes)
    # deterministic map: probabilities are never reweighted
    out = apply_proper(build_c([KET0, KET_PLUS]), e)
    assert out.probabilities == (1 / 3, 2 / 3)


def test_proper_names_annihilated_label():
    e = LabeledEnsemble((0.5, 0.5), (sv(KET0), sv(KET1)), ("keep", "gone"))
    with pytest.raises(ParadoxError, match="gone"):
        apply_proper(InducedMap(np.diag([1, 0]), SYS), e)


def test_mixture_is_block_diagonal():
    e = ensemble([0.25, 0.75], [KET0, KET_PLUS])
    m = labeled_mixture(e).entries
    assert np.allclose(m[:2, 2:], 0) and np.allclose(m[2:, :2], 0)
    assert np.allclose(m[2:, 2:], 0.75 * np.outer(KET_PLUS, KET_PLUS))


def test_purification_traces_to_mixture(rng):
    vecs = [random_state(rng, 4) for _ in range(3)]
    layout = RegisterLayout.of(("SYS", 2))
    e = ensemble([0.2, 0.3, 0.5], vecs, layout)
    pe = purify(e)
    rho = np.outer(pe.amplitudes, pe.amplitudes.conj())
    assert np.max(np.abs(partial_trace_operator(rho, pe.layout, "X'") - labeled_mixture(e).entries)) <= 1e-12


def test_true_density_uniform_overlap_example():
    e = ensemble([0.5, 0.5], [KET0, KET_PLUS])
    out = apply_true_density(build_c([KET0, KET_PLUS]), labeled_mixture(e))
    # |<-|0>|^2 = |<1|+>|^2 = 1/2, so q = p
    diag = out.probabilities()
    assert np.allclose(diag, [0.5, 0, 0, 0.5], atol=1e-12)


def test_true_density_pi_over_six_example():
    theta = np.pi / 6
    phi1 = np.array([np.cos(theta), np.sin(theta)])
    p = [0.5, 0.5]
    q_oracle = two_by_two_q(p, KET0, phi1)
    e = ensemble(p, [KET0, phi1])
    out = apply_true_density(build_c([KET0, phi1]), labeled_mixture(e))
    q = out.probabilities().reshape(2, 2).sum(axis=1)
    assert np.allclose(q, q_oracle, atol=1e-10)
    # for any pair both overlaps equal 1 - |<phi0|phi1>|^2, so q = p here
    assert np.allclose(q_oracle, p, atol=1e-15)
    assert compare_semantics(build_c([KET0, phi1]), e)["tv_distance"] <= 1e-12


def test_tv_positive_for_unequal_overlaps():
    # three qubit-pair states with different dual overlaps
    layout = RegisterLayout.of(("SYS", 2))
    vecs = [
        np.array([1, 0, 0, 0]),
        np.array([1, 1, 0, 0]) / np.sqrt(2),
        np.array([1, 1, 1, 0]) / np.sqrt(3),
    ]
    p = [1 / 3, 1 / 3, 1 / 3]
    # oracle: dual_j from the inverse Gram matrix, written out per column
    phi = np.column_stack(vecs)
    recip = phi @ np.linalg.inv(phi.T @ phi)
    w = np.array([abs(recip[:, j] @ vecs[j]) ** 2 / (recip[:, j] @ recip[:, j]) for j in range(3)])
    q_oracle = np.array(p) * w / (np.array(p) @ w)
    report = compare_semantics(build_c([v[:3] for v in vecs]), ensemble(p, vecs, layout))
    assert np.allclose(report["q_true_density"], q_oracle, atol=1e-10)
    assert report["tv_distance"] == pytest.approx(0.5 * np.abs(q_oracle - p).sum(), abs=1e-12)
    assert report["tv_distance"] > 0.05


def test_true_density_identity():
    e = ensemble([0.3, 0.7], [KET0, KET_PLUS])
    out = apply_true_density(InducedMap(np.eye(2), SYS), labeled_mixture(e))
    assert np.allclose(out.entries, labeled_mixture(e).entries)


def test_true_density_paradox():
    e = ensemble([0.5, 0.5], [KET1, KET1])
    with pytest.raises(ParadoxError):
        apply_true_density(InducedMap(np.diag([1, 0]), SYS), labeled_mixture(e))


def test_purified_example():
    e = ensemble([0.5, 0.5], [KET0, KET_PLUS])
    out = apply_purified(build_c([KET0, KET_PLUS]), purify(e)).amplitudes
    # sqrt(1/2) <-|0> and sqrt(1/2) <1|+> have equal magnitude
    assert abs(out[0b000]) == pytest.approx(1 / np.sqrt(2), abs=1e-12)
    assert abs(out[0b111]) == pytest.approx(1 / np.sqrt(2), abs=1e-12)
    assert np.linalg.norm(out) == pytest.approx(1)


def test_purified_single_member():
    e = ensemble([1.0], [KET0])
    out = apply_purified(build_c([KET0, KET_PLUS]), purify(e))
    assert same_state(out.amplitudes, np.eye(8)[0]) <= 1e-12


def test_purified_paradox():
    e = ensemble([1.0], [KET1])
    with pytest.raises(ParadoxError):
        apply_purified(InducedMap(np.diag([1, 0]), SYS), purify(e))


def test_compare_identity_agrees_everywhere():
    e = ensemble([0.3, 0.7], [KET0, KET_MINUS])
    report = compare_semantics(InducedMap(np.eye(2), SYS), e)
    for key in ("q_proper", "q_true_density", "q_purified"):
        assert np.allclose(report[key], [0.3, 0.7], atol=1e-12)
    assert np.allclose(report["proper_joint"], report["true_density_joint"], atol=1e-12)
    assert report["tv_distance"] <= 1e-12


def _random_map(rng, n_sys):
    layout = RegisterLayout.of(("SYS", n_sys), (CTC, 1))
    return induced_map(PctcCircuit(layout, random_unitary(rng, layout.dim)))


@given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.sampled_from([1, 2]))
def test_purification_consistency_random(seed, n, n_sys):
    rng = np.random.default_rng(seed)
    d = 2**n_sys
    layout = RegisterLayout.of(("SYS", n_sys))
    p = rng.dirichlet(np.ones(n))
    p[-1] = 1 - p[:-1].sum()
    e = ensemble(p, [random_state(rng, d) for _ in range(n)], layout)
    cmap = _random_map(rng, n_sys)
    true_out = apply_true_density(cmap, labeled_mixture(e))
    pure_out = apply_purified(cmap, purify(e))
    rho = np.outer(pure_out.amplitudes, pure_out.amplitudes.conj())
    traced = partial_trace_operator(rho, pure_out.layout, "X'")
    assert np.max(np.abs(traced - true_out.entries)) <= 1e-12


@given(st.integers(0, 2**32 - 1), st.integers(2, 4))
def test_q_formula_for_distinguisher(seed, d):
    rng = np.random.default_rng(seed)
    vecs = [random_state(rng, d) for _ in range(d)]
    n_sys = 1 if d == 2 else 2
    padded = [np.r_[v, np.zeros(2**n_sys - d)] for v in vecs]
    p = rng.dirichlet(np.ones(d))
    p[-1] = 1 - p[:-1].sum()
    e = ensemble(p, padded, RegisterLayout.of(("SYS", n_sys)))
    report = compare_semantics(build_c(vecs), e)
    phi = np.column_stack(vecs)
    recip = phi @ np.linalg.inv(phi.conj().T @ phi)
    w = np.array([abs(np.vdot(recip[:, j], vecs[j])) ** 2 / np.vdot(recip[:, j], recip[:, j]).real for j in range(d)])
    q = p * w / (p @ w)
    assert np.max(np.abs(report["q_true_density"] - q)) <= 1e-10
    assert np.max(np.abs(report["q_proper"] - p)) <= 1e-12
    assert report["purification_consistent"]


def test_equal_overlaps_all_semantics_agree():
    # an orthonormal set rotated by a fixed unitary: every overlap is 1
    u = np.array([[1, 1j], [1j, 1]]) / np.sqrt(2)
    vecs = [u[:, 0], u[:, 1]]
    e = ensemble([0.4, 0.6], vecs)
    report = compare_semantics(build_c(vecs), e)
    for key in ("q_proper", "q_true_density", "q_purified"):
        assert np.allclose(report[key], [0.4, 0.6], atol=1e-10)
