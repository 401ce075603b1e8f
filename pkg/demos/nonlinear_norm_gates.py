"""Two nonlinear one-parameter gates and the norms they respect.

The quadratic pair map sends (x, y) to (x^2 - y^2, 2xy), the components of
(x + iy)^2, so its output 2-norm is the squared input 2-norm.  The
phase twist (x, y) -> (x, e^{iy} y) preserves the 2-norm outright on real
amplitudes while acting nonlinearly.  Composed with ordinary gates they give
dynamics that is norm-consistent without being linear.
"""

import math

import numpy as np

from qvlab.engine import (StateVector, apply_nonlinear, phase_twist_map,
                          quadratic_map)

x, y = 0.6, 0.8
gx, gy = quadratic_map(x, y)
print(f"G({x}, {y}) = ({gx}, {gy})")
print(f"  output 2-norm {math.hypot(abs(gx), abs(gy))} vs"
      f" input norm squared {x * x + y * y}")

wx, wy = phase_twist_map(x, y)
print(f"\nW({x}, {y}) = ({wx}, {wy:.6f})")
print(f"  2-norm before {math.hypot(x, y)} after {math.hypot(abs(wx), abs(wy))}")

# Branch-wise application on a register: the pair map acts on the two
# branches of the chosen qubit within every context of the others.
state = StateVector(np.array([0.5, 0.5, 0.5, 0.5], dtype=complex))
twisted = apply_nonlinear(state, "W", 1)
print("\nuniform two-qubit state after a phase twist on qubit 1:")
print(" ", np.round(twisted.amplitudes, 4))
print("  2-norm still", round(float(np.linalg.norm(twisted.amplitudes)), 12))

squared = apply_nonlinear(state, "G", 0)
print("after the quadratic map on qubit 0:")
print(" ", np.round(squared.amplitudes, 4))

# Iterating the quadratic map squares the 2-norm every time, so a constant
# gap between two branches turns exponential after a few rounds.
v = (3.0, 4.0)
print()
for step in range(4):
    print(f"iterate {step}: 2-norm = {math.hypot(abs(v[0]), abs(v[1])):.1f}")
    v = quadratic_map(*v)
