from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pctc.algorithms import (
    CnfFormula,
    WitnessProblem,
    as_integers,
    build_oracle_unitary,
    factor,
    factor_circuit,
    np_conp_solve,
    npconp_circuit,
    parse_dimacs,
    read_dimacs,
    sat_circuit,
    sat_solve,
)
from pctc.algorithms.factoring import FactorInstance
from pctc.algorithms.oracles import dense_product, permutation_from_function
from pctc.engine import CTC
from pctc.errors import DimacsSyntaxError, HeaderMismatch, ParadoxError, PrimeInputError
from pctc.linalg import RegisterLayout, is_unitary, permutation_matrix

from conftest import count_models

CORPUS = sorted((Path(__file__).parent / "data" / "cnf").glob("*.cnf"))


def divisors_below(q):
    return [j for j in range(1, q) if q % j == 0]


# --- factoring ---


def test_factor_fifteen():
    dist = as_integers(factor(15))
    assert set(dist) == {1, 3, 5}
    assert all(abs(p - 1 / 3) <= 1e-10 for p in dist.values())


def test_factor_four():
    dist = as_integers(factor(4))
    assert set(dist) == {1, 2} and all(abs(p - 0.5) <= 1e-10 for p in dist.values())


def test_factor_exclude_trivial():
    dist = as_integers(factor(15, exclude_trivial=True))
    assert set(dist) == {3, 5} and all(abs(p - 0.5) <= 1e-10 for p in dist.values())


def test_factor_prime_rejected():
    with pytest.raises(PrimeInputError):
        factor(13)
    with pytest.raises(PrimeInputError):
        factor(7, exclude_trivial=True)


def test_factor_six_dense_vs_structured():
    dense, structured = factor(6, method="dense"), factor(6, method="structured")
    assert dense.keys() == structured.keys()
    assert max(abs(dense[k] - structured[k]) for k in dense) <= 1e-12


@pytest.mark.parametrize("q", [q for q in range(4, 32) if divisors_below(q) != [1]])
def test_factor_support_law(q):
    dist = as_integers(factor(q, method="dense"))
    assert sorted(dist) == divisors_below(q)
    p = 1 / len(dist)
    assert all(abs(v - p) <= 1e-10 for v in dist.values())


@pytest.mark.parametrize("q", [q for q in range(4, 32) if divisors_below(q) != [1]])
def test_factor_dense_matches_structured(q):
    dense, structured = factor(q, method="dense"), factor(q, method="structured")
    assert dense.keys() == structured.keys()
    assert max(abs(dense[k] - structured[k]) for k in dense) <= 1e-12


def test_factor_layout_has_one_ctc_qubit():
    inst = FactorInstance(21)
    layout = factor_circuit(inst).layout
    assert layout.names == ("REMAINDER", "FACTOR", CTC)
    assert layout.width(CTC) == 1 and layout.width("FACTOR") == 5


def test_factor_large_uses_structured():
    dist = as_integers(factor(1001))
    assert sorted(dist) == divisors_below(1001)


# --- oracles ---


def test_oracle_always_true_is_identity():
    assert np.array_equal(build_oracle_unitary(lambda w: True, 2), np.eye(8))


def test_oracle_single_witness():
    u = build_oracle_unitary(lambda w: w == 0b11, 2)
    for w in range(4):
        for b in range(2):
            col = u[:, (w << 1) | b]
            flipped = b ^ (w != 0b11)
            assert col[(w << 1) | flipped] == 1


@given(st.integers(1, 4), st.integers(0, 2**16 - 1))
def test_oracle_random_predicate(n, table):
    pred = lambda w: bool((table >> w) & 1)  # noqa: E731
    u = build_oracle_unitary(pred, n)
    assert is_unitary(u)
    for w in range(2**n):
        out = np.argmax(np.abs(u[:, w << 1]))
        assert (out & 1) == (not pred(w))
        assert out >> 1 == w


def test_non_reversible_function_rejected():
    layout = RegisterLayout.of(("A", 1), ("B", 1))
    with pytest.raises(ValueError):
        permutation_from_function(layout, lambda v: {"A": 0})


def test_dense_product_matches_matmul(rng):
    perm = rng.permutation(8)
    m = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    assert np.array_equal(dense_product(perm, m), permutation_matrix(perm) @ m)
    assert np.allclose(dense_product(m, perm, m), m @ permutation_matrix(perm) @ m)


# --- DIMACS ---


def test_dimacs_single_clause():
    f = parse_dimacs("p cnf 2 1\n1 2 0\n")
    assert f == CnfFormula(2, ((1, 2),))
    assert f.models() == [1, 2, 3]


def test_dimacs_unsat():
    assert parse_dimacs("p cnf 2 2\n1 0\n-1 0\n").models() == []


def test_dimacs_variable_out_of_range():
    with pytest.raises(DimacsSyntaxError, match="line 2"):
        parse_dimacs("p cnf 2 1\n3 0\n")


def test_dimacs_header_mismatch():
    with pytest.raises(HeaderMismatch):
        parse_dimacs("p cnf 2 3\n1 0\n2 0\n")


@pytest.mark.parametrize(
    "text",
    ["p cnf 2 1\n1 2\n", "1 0\np cnf 1 1\n", "p cnf 2 1\n1 x 0\n", "p dnf 2 1\n1 0\n", "c only\n"],
)
def test_dimacs_malformed(text):
    with pytest.raises(DimacsSyntaxError):
        parse_dimacs(text)


def test_dimacs_multiline_and_percent():
    f = parse_dimacs("c comment\np cnf 3 2\n1 -2\n 3 0 2\n0\n%\n0\n")
    assert f.clauses == ((1, -2, 3), (2,))


@given(st.integers(1, 5), st.lists(st.lists(st.integers(1, 5), min_size=1, max_size=4), max_size=6), st.data())
def test_dimacs_round_trip(n, raw, data):
    clauses = tuple(
        tuple(min(v, n) * data.draw(st.sampled_from([1, -1])) for v in clause) for clause in raw
    )
    f = CnfFormula(n, clauses)
    assert parse_dimacs(f.to_dimacs()) == f


def test_formula_bit_order():
    # x1 is the most significant bit
    f = CnfFormula(2, ((1,), (-2,)))
    assert f.models() == [0b10]


# --- SAT ---


def test_sat_and():
    r = sat_solve(CnfFormula(2, ((1,), (2,))))
    assert r.p_no == pytest.approx(0.5, abs=1e-12)
    assert r.distribution == pytest.approx({"1011": 0.5, "0000": 0.5})


def test_sat_or():
    r = sat_solve(CnfFormula(2, ((1, 2),)))
    assert r.p_no == pytest.approx(0.25, abs=1e-12)
    yes = {k[2:]: p for k, p in r.distribution.items() if k[0] == "1"}
    assert yes == pytest.approx({"01": 0.25, "10": 0.25, "11": 0.25})


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_sat_contradiction(k):
    r = sat_solve(CnfFormula(1, ((1,), (-1,))), k)
    assert r.p_no == 1.0
    assert r.answer == "NO" and r.witness is None


def test_sat_amplified():
    assert sat_solve(CnfFormula(2, ((1,), (2,))), 3).p_no == pytest.approx(1 / 8, abs=1e-12)


def test_sat_witness_satisfies(rng):
    f = CnfFormula(3, ((1, -2), (2, 3)))
    for seed in range(20):
        r = sat_solve(f, 2, seed=seed)
        if r.answer == "YES":
            assert f(int(r.witness, 2))


@pytest.mark.parametrize("path", CORPUS, ids=lambda p: p.stem)
def test_sat_corpus_dense_matches_structured(path):
    f = read_dimacs(path)
    dense = sat_solve(f, 1, method="dense").distribution
    structured = sat_solve(f, 1, method="structured").distribution
    assert dense.keys() == structured.keys()
    assert max(abs(dense[key] - structured[key]) for key in dense) <= 1e-12
    survivors = list(dense.values())
    assert max(survivors) - min(survivors) <= 1e-10


def test_sat_dense_amplified_small():
    f = CnfFormula(2, ((1, 2),))
    dense = sat_solve(f, 2, method="dense")
    structured = sat_solve(f, 2, method="structured")
    assert dense.distribution.keys() == structured.distribution.keys()
    assert dense.p_no == pytest.approx(1 / 16, abs=1e-12)
    circuit = sat_circuit(f, 2)
    assert [n for n in circuit.layout.names if n == CTC] == [CTC]


@pytest.mark.parametrize("path", CORPUS, ids=lambda p: p.stem)
def test_sat_probability_law(path):
    text = path.read_text()
    clauses = [
        [int(t) for t in line.split()[:-1]] for line in text.splitlines() if line and line[0] not in "cp%"
    ]
    n = int(next(line for line in text.splitlines() if line.startswith("p")).split()[2])
    m = count_models(n, clauses)
    f = read_dimacs(path)
    for k in (1, 2, 3):
        assert abs(sat_solve(f, k).p_no - 1 / (m + 1) ** k) <= 1e-10


# --- NP and coNP ---


def test_npconp_yes_example():
    r = np_conp_solve(WitnessProblem.from_sets(2, ["11"], []))
    assert r.answer == "YES" and r.witness == "11"
    assert r.distribution == pytest.approx({"1011": 1.0})


def test_npconp_no_example():
    r = np_conp_solve(WitnessProblem.from_sets(2, [], [0b00, 0b01]))
    assert r.answer == "NO"
    assert r.distribution == pytest.approx({"0000": 0.5, "0001": 0.5})


def test_npconp_neither_is_paradox():
    with pytest.raises(ParadoxError):
        np_conp_solve(WitnessProblem.from_sets(2, [], []))


def test_npconp_both_flagged():
    r = np_conp_solve(WitnessProblem.from_sets(2, [1], [2]))
    assert r.promise_violation == "both" and r.answer is None
    assert r.distribution == pytest.approx({"1001": 0.5, "0010": 0.5})


def test_npconp_dense_matches_structured(rng):
    for _ in range(5):
        n = int(rng.integers(1, 5))
        yes = set(rng.choice(2**n, size=int(rng.integers(1, 2**n + 1)), replace=True).tolist())
        prob = WitnessProblem.from_sets(n, yes, [])
        a = np_conp_solve(prob, method="dense").distribution
        b = np_conp_solve(prob, method="structured").distribution
        assert a.keys() == b.keys() and max(abs(a[k] - b[k]) for k in a) <= 1e-12


def test_npconp_circuit_one_ctc():
    layout = npconp_circuit(WitnessProblem.from_sets(3, [1], [])).layout
    assert layout.names == ("FLAG", "VALID", "WITNESS", CTC) and layout.width(CTC) == 1


def test_npconp_predicate_verifiers():
    # YES witnesses are multiples of 5 below 16
    prob = WitnessProblem(4, lambda w: w % 5 == 0 and w > 0, lambda w: False)
    r = np_conp_solve(prob)
    assert r.answer == "YES" and int(r.witness, 2) in (5, 10, 15)
