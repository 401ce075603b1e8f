"""Vector norms and the orthogonal-matrix machinery used across the package.

The block decomposition here deliberately avoids general eigensolvers: it runs
a cyclic Jacobi iteration (two-sided plane rotations) on the symmetric part of
the input, then pairs rotation planes off the antisymmetric part.  That keeps
the construction deterministic and self-contained for the small dimensions
this package targets (<= 64).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Default tolerances. All of these can be overridden per call.
ORTHONORMAL_TOL = 1e-10
GRAM_SCHMIDT_SKIP_TOL = 1e-8
RECONSTRUCTION_TOL = 1e-9
MAX_DECOMPOSE_DIM = 64

_CLUSTER_TOL = 1e-8       # symmetric-part eigenvalue clustering
_SPLIT_TOL = 1e-10        # rotation-plane vs fixed-axis classification


class NonPositiveP(ValueError):
    """p-norms require p > 0 (or the explicit infinity flag)."""


class PEqualsTwo(ValueError):
    """The requested effect is degenerate exactly at p = 2."""


class NotOrthonormal(ValueError):
    """Supplied columns are not orthonormal within tolerance."""


class NotOrthogonal(ValueError):
    """Matrix is not real orthogonal within tolerance."""


class NotUnitary(ValueError):
    """Matrix is not unitary within tolerance."""


class DecompositionError(RuntimeError):
    """The block decomposition could not certify its own reconstruction."""


def p_norm(v, p: float) -> float:
    """(sum_j |v_j|^p)^(1/p) for p > 0; max_j |v_j| for p = math.inf.

    p = 0 and p < 0 are rejected: the measurement rules downstream divide by
    this quantity and need it positive and homogeneous.
    """
    v = np.asarray(v)
    if math.isinf(p) and p > 0:
        return float(np.max(np.abs(v))) if v.size else 0.0
    if not (p > 0) or math.isnan(p):
        raise NonPositiveP(f"p must be positive (got {p})")
    return float(np.sum(np.abs(v) ** p) ** (1.0 / p))


def is_unitary(m, tol: float = ORTHONORMAL_TOL) -> bool:
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    eye = np.eye(m.shape[0])
    return bool(np.max(np.abs(m.conj().T @ m - eye)) <= tol)


def is_real_orthogonal(m, tol: float = ORTHONORMAL_TOL) -> bool:
    m = np.asarray(m)
    if np.iscomplexobj(m) and np.max(np.abs(m.imag)) > tol:
        return False
    m = np.real(m).astype(np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return bool(np.max(np.abs(m.T @ m - np.eye(m.shape[0]))) <= tol)


def complete_to_unitary(columns, tol: float = ORTHONORMAL_TOL,
                        skip_tol: float = GRAM_SCHMIDT_SKIP_TOL) -> np.ndarray:
    """Extend k orthonormal columns to a full unitary, deterministically.

    Candidates are the canonical basis vectors in index order; each is
    Gram-Schmidt orthogonalized against the columns accepted so far and kept
    when its residual norm exceeds ``skip_tol``.  The supplied columns come
    first in the result, so round-tripping the leading k columns is exact.

    Raises NotOrthonormal when the input columns fail the Gram check.
    """
    cols = [np.asarray(c, dtype=np.complex128).ravel() for c in columns]
    if not cols:
        raise NotOrthonormal("need at least one column")
    d = cols[0].size
    if any(c.size != d for c in cols) or len(cols) > d:
        raise NotOrthonormal("columns must share one dimension, at most d of them")
    basis = np.column_stack(cols)
    gram = basis.conj().T @ basis
    if np.max(np.abs(gram - np.eye(len(cols)))) > tol:
        raise NotOrthonormal(
            f"columns are not orthonormal within {tol:g}")

    accepted = list(basis.T)
    for i in range(d):
        if len(accepted) == d:
            break
        cand = np.zeros(d, dtype=np.complex128)
        cand[i] = 1.0
        # two passes of projection for numerical stability
        for _ in range(2):
            for b in accepted:
                cand = cand - (b.conj() @ cand) * b
        norm = np.linalg.norm(cand)
        if norm > skip_tol:
            accepted.append(cand / norm)
    if len(accepted) != d:
        raise NotOrthonormal("could not complete basis; inputs nearly dependent")
    return np.column_stack(accepted)


@dataclass(frozen=True)
class OrthogonalBlock:
    """One diagonal block of an orthogonal matrix in rotation normal form.

    kind is "rotation" (2x2 plane rotation by ``angle``), "+1" (fixed axis) or
    "-1" (flipped axis).
    """

    kind: str
    angle: float = 0.0

    def matrix(self) -> np.ndarray:
        if self.kind == "rotation":
            c, s = math.cos(self.angle), math.sin(self.angle)
            return np.array([[c, -s], [s, c]])
        return np.array([[1.0 if self.kind == "+1" else -1.0]])

    @property
    def size(self) -> int:
        return 2 if self.kind == "rotation" else 1


def blocks_to_matrix(blocks) -> np.ndarray:
    n = sum(b.size for b in blocks)
    out = np.zeros((n, n))
    at = 0
    for b in blocks:
        out[at:at + b.size, at:at + b.size] = b.matrix()
        at += b.size
    return out


def blocks_det(blocks) -> int:
    """Determinant from the normal form: the product of the +-1 entries."""
    sign = 1
    for b in blocks:
        if b.kind == "-1":
            sign = -sign
    return sign


def _jacobi_symmetric(s: np.ndarray, tol: float = 1e-14, max_sweeps: int = 60):
    """Cyclic Jacobi diagonalization of a symmetric matrix.

    Returns (eigenvalues, q) with q orthogonal and q.T @ s @ q diagonal.
    Deterministic: pivots sweep the upper triangle in row-major order.
    """
    a = np.array(s, dtype=np.float64)
    n = a.shape[0]
    q = np.eye(n)
    scale = max(1.0, float(np.max(np.abs(a))))
    for _ in range(max_sweeps):
        off = 0.0
        for i in range(n - 1):
            row_max = np.max(np.abs(a[i, i + 1:]))
            off = max(off, row_max)
        if off <= tol * scale:
            break
        for i in range(n - 1):
            for j in range(i + 1, n):
                apq = a[i, j]
                if abs(apq) <= 0.1 * tol * scale:
                    continue
                theta = (a[j, j] - a[i, i]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(1.0, theta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                sn = t * c
                rot_i = c * a[i, :] - sn * a[j, :]
                rot_j = sn * a[i, :] + c * a[j, :]
                a[i, :], a[j, :] = rot_i, rot_j
                col_i = c * a[:, i] - sn * a[:, j]
                col_j = sn * a[:, i] + c * a[:, j]
                a[:, i], a[:, j] = col_i, col_j
                qi = c * q[:, i] - sn * q[:, j]
                qj = sn * q[:, i] + c * q[:, j]
                q[:, i], q[:, j] = qi, qj
    return np.diag(a).copy(), q


def rotation_block_decompose(u, tol: float = ORTHONORMAL_TOL,
                             recon_tol: float = RECONSTRUCTION_TOL):
    """Factor real orthogonal ``u`` as q @ B @ q.T with B in rotation normal form.

    Returns (q, blocks) where q is real orthogonal and blocks is a list of
    OrthogonalBlock describing B: 2x2 rotations (angle in (0, pi)) followed by
    +1 and -1 axes, ordered by descending symmetric-part eigenvalue.

    The routine certifies its own output and raises DecompositionError if the
    reconstruction residual exceeds ``recon_tol``.  Inputs crafted so that two
    distinct rotation angles share a cosine to ~1e-14 can trip that guard;
    random and structured matrices do not.
    """
    u = np.asarray(u)
    if np.iscomplexobj(u):
        if np.max(np.abs(u.imag)) > tol:
            raise NotOrthogonal("matrix has a complex part")
        u = u.real
    u = u.astype(np.float64)
    n = u.shape[0]
    if u.ndim != 2 or u.shape[1] != n:
        raise NotOrthogonal("matrix must be square")
    if n > MAX_DECOMPOSE_DIM:
        raise NotOrthogonal(f"dimension {n} exceeds supported maximum {MAX_DECOMPOSE_DIM}")
    if np.max(np.abs(u.T @ u - np.eye(n))) > tol:
        raise NotOrthogonal(f"matrix is not orthogonal within {tol:g}")

    sym = (u + u.T) / 2.0
    eigvals, q0 = _jacobi_symmetric(sym)
    order = np.argsort(-eigvals, kind="stable")
    eigvals = eigvals[order]
    q0 = q0[:, order]

    # group eigenvalues of the symmetric part into clusters
    clusters: list[list[int]] = [[0]] if n else []
    for idx in range(1, n):
        if eigvals[idx - 1] - eigvals[idx] <= _CLUSTER_TOL:
            clusters[-1].append(idx)
        else:
            clusters.append([idx])

    out_cols: list[np.ndarray] = []
    blocks: list[OrthogonalBlock] = []
    for cluster in clusters:
        qc = q0[:, cluster]               # n x m, orthonormal
        m = qc.T @ u @ qc
        k = (m - m.T) / 2.0
        basis = np.eye(len(cluster))       # working coords inside the cluster
        while basis.shape[1] > 0:
            kv = k @ basis
            norms = np.linalg.norm(kv, axis=0)
            pick = int(np.argmax(norms))
            v = basis[:, pick]
            if norms[pick] > _SPLIT_TOL:
                w = kv[:, pick] / norms[pick]
                w = w - (v @ w) * v
                w = w / np.linalg.norm(w)
                c = (v @ m @ v + w @ m @ w) / 2.0
                s = (w @ m @ v - v @ m @ w) / 2.0
                angle = math.atan2(s, c)
                blocks.append(OrthogonalBlock("rotation", angle))
                out_cols.append(qc @ v)
                out_cols.append(qc @ w)
                keep = np.delete(basis, pick, axis=1)
                # project out the extracted plane, then re-orthonormalize
                for vec in (v, w):
                    keep = keep - np.outer(vec, vec @ keep)
                new_cols = []
                for col in keep.T:
                    for b in new_cols:
                        col = col - (b @ col) * b
                    nb = np.linalg.norm(col)
                    if nb > 0.5:
                        new_cols.append(col / nb)
                basis = np.column_stack(new_cols) if new_cols else np.zeros((len(cluster), 0))
            else:
                sigma = v @ m @ v
                blocks.append(OrthogonalBlock("+1" if sigma > 0 else "-1"))
                out_cols.append(qc @ v)
                basis = np.delete(basis, pick, axis=1)

    q = np.column_stack(out_cols) if out_cols else np.zeros((n, 0))
    residual = float(np.max(np.abs(q @ blocks_to_matrix(blocks) @ q.T - u)))
    if residual > recon_tol:
        raise DecompositionError(
            f"reconstruction residual {residual:.3e} exceeds {recon_tol:g}")
    return q, blocks


def haar_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed sample from O(n) (QR of a Gaussian with sign fix)."""
    g = rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    return q * np.sign(np.diag(r))


def haar_special_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    q = haar_orthogonal(n, rng)
    if np.linalg.det(q) < 0:
        if n == 1:
            q = -q
        else:
            q = q.copy()
            q[:, [0, 1]] = q[:, [1, 0]]
    return q
