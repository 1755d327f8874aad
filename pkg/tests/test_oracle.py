import numpy as np
import pytest

from extcliff import oracle
from extcliff.circuit import Condition, ConditionalGate, Measure, basis_program, product_program
from extcliff.errors import CircuitError, WidthCapError
from extcliff.gates import gate
from extcliff.pauli import NAMED_STATES, BitString, PauliOperator
from extcliff.random_circuits import random_gates, random_pauli, random_product_circuit, random_state
from extcliff.reductions import CnfFormula, sharp_sat_circuit


def test_single_h():
    assert oracle.run_distribution(basis_program(1, [gate("H", 0)], [0])) == pytest.approx({"0": 0.5, "1": 0.5})


def test_ghz():
    c = basis_program(3, [gate("H", 0), gate("CX", 0, 1), gate("CX", 1, 2)], [0, 1, 2])
    assert oracle.run_distribution(c) == pytest.approx({"000": 0.5, "111": 0.5})


def test_and_of_two_random_bits():
    c = sharp_sat_circuit(CnfFormula(2, ((1,), (2,))))
    assert oracle.run_distribution(c)["1"] == pytest.approx(0.25, abs=1e-12)


def test_key_order_follows_requested_lines():
    c = basis_program(3, [gate("X", 2)], [0, 1, 2])
    assert oracle.run_distribution(c) == {"001": 1.0}
    assert oracle.run_distribution(c, lines=[2, 0]) == {"10": 1.0}


def test_product_input_convention():
    one, zero = NAMED_STATES["1"], NAMED_STATES["0"]
    v = oracle.StateVector.product([one, zero, zero])
    assert np.argmax(np.abs(v.amplitudes)) == 1


def test_measurement_branches_and_conditions():
    c = basis_program(
        2, [gate("H", 0), Measure(0, "a"), ConditionalGate(gate("X", 1), Condition(("a",)))], [0, 1]
    )
    leaves = oracle.run_branches(c)
    assert sorted(br.history for br in leaves) == [(0,), (1,)]
    assert oracle.run_distribution(c) == pytest.approx({"00": 0.5, "11": 0.5})


def test_postselect_without_lines_is_marginal(rng):
    c = random_product_circuit(3, 20, rng)
    dist = oracle.run_distribution(c, lines=[1])
    assert oracle.run_postselected(c, {}, 1) == pytest.approx(dist.get("1", 0.0), abs=1e-12)


def test_postselect_impossible_event():
    c = basis_program(2, [gate("X", 0)], [0, 1])
    with pytest.raises(CircuitError):
        oracle.run_postselected(c, {0: 0}, 1)
    with pytest.raises(CircuitError):
        oracle.run_postselected(c, {1: 0}, 1)  # target line also postselected


def test_postselect_bell():
    c = basis_program(2, [gate("H", 0), gate("CX", 0, 1)], [0, 1])
    assert oracle.run_postselected(c, {0: 1}, 1) == pytest.approx(1.0)
    assert oracle.run_postselected(c, {0: 0}, 1) == pytest.approx(0.0)
    assert oracle.run_postselected(c, {0: 0}, 1, target_value=0) == pytest.approx(1.0)


def test_width_cap():
    with pytest.raises(WidthCapError):
        oracle.run_distribution(basis_program(17, [], [0]))
    with pytest.raises(WidthCapError):
        oracle.StateVector.basis(17)


def test_branch_cap():
    ops = []
    for k in range(13):
        ops += [gate("H", 0), Measure(0, f"m{k}")]
    with pytest.raises(WidthCapError):
        oracle.run_distribution(basis_program(1, ops, [0]))


def test_unitarity_over_long_circuit(rng):
    n = 10
    states = [random_state(rng) for _ in range(n)]
    c = product_program(random_gates(n, 10_000, rng, allow_s=True), states, [0])
    psi = oracle.run_branches(c)[0].state
    assert abs(psi.norm() - 1.0) <= 1e-9


def test_gate_matrices_are_unitary():
    for m in list(oracle.SINGLE_QUBIT.values()) + list(oracle.TWO_QUBIT.values()):
        assert np.allclose(m @ m.conj().T, np.eye(len(m)))


def test_two_qubit_gates_against_kron(rng):
    n = 3
    for kind in ("CZ", "CX", "SWAP"):
        for a in range(n):
            for b in range(n):
                if a == b:
                    continue
                u = oracle.circuit_unitary([gate(kind, a, b)], n)
                ref = np.zeros((8, 8), dtype=complex)
                m = oracle.TWO_QUBIT[kind]
                for k in range(8):
                    ba, bb = (k >> a) & 1, (k >> b) & 1
                    for out in range(4):
                        oa, ob = out >> 1, out & 1
                        j = k & ~(1 << a) & ~(1 << b) | (oa << a) | (ob << b)
                        ref[j, k] += m[out, 2 * ba + bb]
                np.testing.assert_allclose(u, ref, atol=1e-15)


def test_apply_pauli_dense(rng):
    v = oracle.StateVector.basis(2, 0)
    same = oracle.apply_pauli_dense(PauliOperator.identity(2), v)
    np.testing.assert_array_equal(same.amplitudes, v.amplitudes)
    x10 = PauliOperator.from_ints(2, 0, BitString.from_str("10").value, 0)
    assert np.argmax(np.abs(oracle.apply_pauli_dense(x10, v).amplitudes)) == BitString.from_str("10").value
    for _ in range(50):
        p = random_pauli(5, rng)
        amps = rng.normal(size=32) + 1j * rng.normal(size=32)
        psi = oracle.StateVector(5, amps / np.linalg.norm(amps))
        got = oracle.apply_pauli_dense(p, psi).amplitudes
        assert np.max(np.abs(got - oracle.pauli_matrix(p) @ psi.amplitudes)) <= 1e-12


def test_fidelity():
    a = oracle.StateVector.basis(1, 0)
    b = oracle.StateVector(1, np.array([1, 1]) / np.sqrt(2))
    assert oracle.fidelity(a, a) == pytest.approx(1.0)
    assert oracle.fidelity(a, b) == pytest.approx(0.5)
