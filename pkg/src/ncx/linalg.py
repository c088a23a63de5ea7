"""Small dense helpers: pivoted orthonormalization, ranks, row ordering."""

from __future__ import annotations

import numpy as np


def orthonormal_basis(vectors, tol: float) -> np.ndarray:
    """Orthonormal basis of the span of ``vectors`` (rows), as a (d, k) matrix.

    Pivoted modified Gram-Schmidt: at each step the remaining vector with the
    largest residual norm is orthonormalized next, so the basis is a
    deterministic function of the input list.  Inputs are normalized first,
    which makes the rank decision (residual norm > ``tol``) scale invariant.
    """
    vs = np.atleast_2d(np.asarray(vectors, dtype=float))
    n, d = vs.shape
    residual = np.zeros_like(vs)
    norms0 = np.linalg.norm(vs, axis=1)
    nonzero = norms0 > 0
    residual[nonzero] = vs[nonzero] / norms0[nonzero, None]

    columns: list[np.ndarray] = []
    for _ in range(min(n, d)):
        norms = np.linalg.norm(residual, axis=1)
        j = int(np.argmax(norms))
        if norms[j] <= tol:
            break
        q = residual[j] / norms[j]
        # second pass guards orthogonality for nearly dependent inputs
        for b in columns:
            q = q - (b @ q) * b
        q = q / np.linalg.norm(q)
        columns.append(q)
        residual = residual - np.outer(residual @ q, q)
    if not columns:
        return np.zeros((d, 0))
    return np.stack(columns, axis=1)


def rank_of(vectors, tol: float) -> int:
    return orthonormal_basis(vectors, tol).shape[1]


def lexsorted_rows(matrix: np.ndarray) -> np.ndarray:
    """Rows sorted lexicographically (first column is the primary key)."""
    mat = np.atleast_2d(np.asarray(matrix, dtype=float))
    if mat.shape[0] <= 1:
        return mat
    order = np.lexsort(mat[:, ::-1].T)
    return mat[order]


def affine_span_contains_origin(vectors, tol: float) -> bool:
    """True when 0 is an affine combination of the rows of ``vectors``."""
    vs = np.atleast_2d(np.asarray(vectors, dtype=float))
    n = vs.shape[0]
    # parameterize coefficients summing to one: c = e_1 + B z
    c0 = np.zeros(n)
    c0[0] = 1.0
    if n == 1:
        return bool(np.linalg.norm(vs[0]) <= tol)
    basis = np.zeros((n, n - 1))
    for j in range(n - 1):
        basis[0, j] = -1.0
        basis[j + 1, j] = 1.0
    target = -vs.T @ c0
    coeffs, *_ = np.linalg.lstsq(vs.T @ basis, target, rcond=None)
    residual = vs.T @ (c0 + basis @ coeffs)
    return bool(np.linalg.norm(residual) <= tol)
