# Square roots inside the real orthogonal group: when they exist, how to
# compute them, and what to do when they don't.

import numpy as np

from qvlab.quaternion import Quaternion, quaternion_sqrt
from qvlab.roots import (embed_sqrt, kth_root_scan, real_orthogonal_sqrt,
                         unitary_sqrt)

np.set_printoptions(precision=4, suppress=True)

# A double reflection has determinant +1, and this integer matrix is a
# square root of it inside the rotation group:
mirror = np.diag([1.0, -1.0, -1.0])
root = np.array([[1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, -1.0, 0.0]])
print("root @ root == diag(1,-1,-1):", np.array_equal(root @ root, mirror))

res = real_orthogonal_sqrt(mirror)
print("computed root:\n", res.root, "\nresidual:", res.residual)

# A single reflection has determinant -1 and no real orthogonal square root;
# the result says so instead of returning something approximate.
flip = np.diag([1.0, -1.0])
res = real_orthogonal_sqrt(flip)
print("\nsqrt(diag(1,-1)) exists:", res.exists, "| obstruction:", res.obstruction)

# Two ways around the obstruction.  Over the complexes the principal branch
# always works:
res = unitary_sqrt(flip.astype(complex))
print("complex principal root diagonal:", np.diag(res.root))

# Or stay real and pay one extra dimension: embed into SO(n+1).
res = embed_sqrt(flip)
print("embedded real root (3x3):\n", res.root)
print("its square restricted to the corner:\n", (res.root @ res.root)[:2, :2])

# Odd-order roots never face the obstruction: x -> x^3 is onto O(n).
res = kth_root_scan(flip, 3)
print("\ncube root of diag(1,-1):\n", res.root)

# The 4d rotation group factors through unit quaternions, where halving a
# rotation is a one-liner.
q = Quaternion(-0.5, 0.5, 0.5, 0.5)
r = quaternion_sqrt(q)
print("\nquaternion sqrt of", q, "is", r)
print("multiply back:", r * r)
