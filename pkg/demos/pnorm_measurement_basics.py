# Measurement statistics under a p-norm rule, and what gate dynamics has to
# look like so that those statistics stay consistent.

import numpy as np

from qvlab.engine import (Gate, MeasurementRule, StateVector, apply_gate,
                          hadamard, measure_distribution, sample)

# A state assigns outcome x the probability |amp_x|^p / sum_y |amp_y|^p.
# At p = 2 this is the usual rule; nothing else about the state changes.
state = StateVector(np.array([2.0, 1.0]))
for p in (1.0, 2.0, 3.0, 6.0):
    dist = measure_distribution(state, MeasurementRule(p))
    print(f"p={p}: amplitudes (2, 1) measure as {np.round(dist, 6)}")

# The rule is scale invariant, so states never need normalizing up front.
print("\nscaled by 7:", measure_distribution(StateVector(np.array([14.0, 7.0])), 3.0))

# Sampling agrees with the exact distribution.
bell = apply_gate(StateVector(np.array([1.0, 0.0, 0.0, 0.0], dtype=complex)),
                  hadamard(), [0])
draws = sample(bell, rule=4.0, seed=7, size=20000)
freq = np.bincount(draws, minlength=4) / 20000
print("\nsampled vs exact at p=4:")
print("  sampled:", np.round(freq, 4))
print("  exact:  ", np.round(measure_distribution(bell, 4.0), 4))

# Dynamics: unitary mode is the familiar one.  Global mode applies any
# invertible matrix and leans on scale invariance.  Local mode applies the
# matrix branch by branch and rescales each branch back to its original
# 2-norm weight, which is what a "measure elsewhere, don't signal" rule
# demands.
shear = Gate([[1.0, 1.0], [0.0, 1.0]], name="shear")
two = StateVector(np.array([0.1, 0.7, -0.3, 0.64], dtype=complex))

glob = apply_gate(two, shear, [1], mode="global")
loc = apply_gate(two, shear, [1], mode="local")

print("\nglobal vs local application of the same invertible gate:")
print("  global:", np.round(glob.amplitudes, 4))
print("  local: ", np.round(loc.amplitudes, 4))

w_top = np.linalg.norm(two.amplitudes[:2])
w_loc = np.linalg.norm(loc.amplitudes[:2])
print(f"  local mode kept the qubit-0=0 branch weight: {w_top:.6f} -> {w_loc:.6f}")
