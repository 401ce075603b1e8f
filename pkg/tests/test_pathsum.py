import tracemalloc

import numpy as np
import pytest
from circuitgen import random_mixed_circuit

from qvlab.engine import (Circuit, Gate, StateVector, ZeroBranch, bell_pair,
                          cnot, hadamard, pauli_x, run_circuit)
from qvlab.pathsum import amplitude_recursive, ground_amplitude

ATOL = 1e-10


def bell_circuit():
    return Circuit(2).gate(hadamard(), [0]).gate(cnot(), [0, 1])


def test_bell_amplitudes():
    circuit = bell_circuit()
    want = bell_pair().amplitudes
    got = [amplitude_recursive(circuit, x) for x in range(4)]
    assert np.allclose(got, want, atol=ATOL)


def test_ground_amplitude_callable():
    assert ground_amplitude(0) == 1.0
    assert ground_amplitude(3) == 0.0


@pytest.mark.parametrize("seed", range(20))
def test_matches_dense_run(seed):
    rng = np.random.default_rng(400 + seed)
    n = int(rng.integers(2, 6))
    circuit = random_mixed_circuit(rng, n, max_gates=8, budget=256)
    dense = run_circuit(circuit).amplitudes
    got = np.array([amplitude_recursive(circuit, x) for x in range(2 ** n)])
    assert np.allclose(got, dense, atol=ATOL)


def test_matches_dense_run_with_initial_state():
    rng = np.random.default_rng(77)
    amps = rng.normal(size=8) + 1j * rng.normal(size=8)
    initial = StateVector(amps)
    circuit = random_mixed_circuit(rng, 3, max_gates=6, budget=128)
    dense = run_circuit(circuit, initial).amplitudes
    got = np.array([amplitude_recursive(circuit, x, initial=initial)
                    for x in range(8)])
    assert np.allclose(got, dense, atol=ATOL)


def test_initial_as_callable():
    def warm(idx):
        return complex(idx + 1, -idx)

    circuit = bell_circuit()
    dense_initial = StateVector(np.array([warm(i) for i in range(4)]))
    dense = run_circuit(circuit, dense_initial).amplitudes
    got = [amplitude_recursive(circuit, x, initial=warm) for x in range(4)]
    assert np.allclose(got, dense, atol=ATOL)


def test_step_prefix():
    rng = np.random.default_rng(9)
    circuit = random_mixed_circuit(rng, 3, max_gates=7, budget=128)
    for t in range(len(circuit.steps) + 1):
        prefix = Circuit(3)
        prefix.steps.extend(circuit.steps[:t])
        dense = run_circuit(prefix).amplitudes
        got = [amplitude_recursive(circuit, x, t=t) for x in range(8)]
        assert np.allclose(got, dense, atol=ATOL), f"diverges at t={t}"


def test_basis_label_string():
    circuit = bell_circuit()
    assert amplitude_recursive(circuit, "11") == pytest.approx(
        amplitude_recursive(circuit, 3))


def test_rejects_postselection():
    circuit = bell_circuit().postselect(0, 1)
    with pytest.raises(ValueError, match="postselect"):
        amplitude_recursive(circuit, 0)
    # ... unless the prefix stops before the postselect step
    assert amplitude_recursive(circuit, 0, t=2) == pytest.approx(1 / np.sqrt(2))


def test_local_mode_zero_branch_raises():
    initial = StateVector(np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2))
    annihilate = Gate(np.array([[0.0, 1.0], [0.0, 0.0]]), condition_override=True)
    circuit = Circuit(2).gate(annihilate, [1], "local")
    with pytest.raises(ZeroBranch):
        amplitude_recursive(circuit, 0, initial=initial)


def test_wide_register_memory_stays_flat():
    """24 qubits would need a 256 MB dense vector; recursion must not build one."""
    n = 24
    circuit = Circuit(n)
    circuit.gate(hadamard(), [0])
    circuit.gate(hadamard(), [1])
    circuit.gate(cnot(), [0, 5])
    circuit.gate(pauli_x(), [23])
    circuit.gate(hadamard(), [2])

    aligned = (1 << (n - 1 - 23)) | (1 << (n - 1 - 5)) | (1 << (n - 1))
    tracemalloc.start()
    amp = amplitude_recursive(circuit, aligned)
    zero = amplitude_recursive(circuit, 0)
    _, peak = tracemalloc.get_traced_memory()
    tracemalloc.stop()

    assert abs(amp) == pytest.approx((1 / np.sqrt(2)) ** 3)
    assert zero == 0.0
    assert peak < 8 * 1024 * 1024
