"""Random mixed-mode circuits with a bounded branching budget.

The recursive amplitude evaluator costs the product of per-step fan-ins, so
the generator tracks that product and stops adding branching gates once a
budget is reached.  Permutation-like gates (X, CNOT, diagonals) are free.
"""
import numpy as np
from scipy.stats import unitary_group

from qvlab.engine import Circuit, Gate, cnot, hadamard, pauli_x, quadratic_gate, phase_twist_gate


def _dense_invertible(rng):
    m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    m += 2.0 * np.eye(2)  # keep it comfortably conditioned
    return Gate(m, kind="invertible", name="custom")


def _diagonal(rng):
    d = np.exp(1j * rng.uniform(0, 2 * np.pi, size=2)) * rng.uniform(0.5, 2.0, size=2)
    return Gate(np.diag(d), kind="invertible", name="custom")


def random_mixed_circuit(rng, num_qubits, max_gates=20, budget=4096,
                         max_nonlinear=2):
    """A circuit drawing from every normalization mode the engine supports."""
    circuit = Circuit(num_qubits)
    paths = 1
    nonlinear_used = 0
    for _ in range(max_gates):
        kind = rng.integers(0, 8)
        if kind == 0:
            circuit.gate(pauli_x(), [rng.integers(num_qubits)])
        elif kind == 1 and num_qubits >= 2:
            pair = rng.choice(num_qubits, size=2, replace=False)
            circuit.gate(cnot(), list(pair))
        elif kind == 2:
            circuit.gate(_diagonal(rng), [rng.integers(num_qubits)], "global")
        elif kind == 3 and paths * 2 <= budget:
            circuit.gate(hadamard(), [rng.integers(num_qubits)])
            paths *= 2
        elif kind == 4 and paths * 2 <= budget:
            u = unitary_group.rvs(2, random_state=int(rng.integers(2 ** 31)))
            circuit.gate(Gate(u, name="custom"), [rng.integers(num_qubits)])
            paths *= 2
        elif kind == 5 and num_qubits >= 2 and paths * 4 <= budget:
            u = unitary_group.rvs(4, random_state=int(rng.integers(2 ** 31)))
            pair = rng.choice(num_qubits, size=2, replace=False)
            circuit.gate(Gate(u, name="custom"), list(pair))
            paths *= 4
        elif kind == 6 and paths * 2 <= budget:
            mode = "global" if rng.integers(2) else "local"
            circuit.gate(_dense_invertible(rng), [rng.integers(num_qubits)], mode)
            paths *= 2
        elif kind == 7 and paths * 2 <= budget and nonlinear_used < max_nonlinear:
            gate = phase_twist_gate() if rng.integers(2) else quadratic_gate()
            circuit.gate(gate, [rng.integers(num_qubits)], "global")
            paths *= 2
            nonlinear_used += 1
    return circuit
