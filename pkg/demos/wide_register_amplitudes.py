# Single amplitudes of wide registers without a 2^n state vector.
#
# The recursive evaluator walks the circuit backwards: the amplitude of x
# after step t is a small sum over the amplitudes of the gate's preimage
# basis states after step t-1.  Memory is depth times gate arity, so a
# 40-qubit register costs kilobytes, not terabytes.

import time
import tracemalloc

from qvlab.engine import Circuit, cnot, hadamard
from qvlab.pathsum import amplitude_recursive

n = 40
circuit = Circuit(n)
circuit.gate(hadamard(), [0])
for q in range(1, 8):
    circuit.gate(cnot(), [0, q])     # spread qubit 0 into a GHZ-style block
circuit.gate(hadamard(), [n - 1])

tracemalloc.start()
t0 = time.perf_counter()

all_zero = "0" * n
block_ones = "1" * 8 + "0" * (n - 8)
mixed = "1" * 7 + "0" * (n - 7)

for label in (all_zero, block_ones, mixed):
    amp = amplitude_recursive(circuit, label)
    print(f"<{label[:10]}...|psi> = {amp:.6f}")

elapsed = time.perf_counter() - t0
_, peak = tracemalloc.get_traced_memory()
tracemalloc.stop()

dense_bytes = (2 ** n) * 16
print(f"\nelapsed: {elapsed * 1000:.1f} ms, peak allocation: {peak / 1024:.0f} KiB")
print(f"a dense state vector would need {dense_bytes / 2**40:.0f} TiB")

# Intermediate times work too: t counts completed steps.
print("\namplitude of |0...0> after each step:")
for t in range(len(circuit.steps) + 1):
    print(f"  t={t}: {amplitude_recursive(circuit, all_zero, t=t):.6f}")
