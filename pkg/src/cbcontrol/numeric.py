"""Dense linear-algebra helpers shared by analysis and design."""

from __future__ import annotations

import numpy as np

from .tolerances import DEFAULT, Tolerances


def numeric_rank(matrix, tol: Tolerances = DEFAULT):
    """Numeric rank: number of singular values above the relative cutoff.

    Accepts real or complex matrices. Returns (rank, singular_values)
    with the values in descending order.
    """
    matrix = np.atleast_2d(np.asarray(matrix))
    svals = np.linalg.svd(matrix, compute_uv=False)
    if svals.size == 0 or svals[0] == 0.0:
        return 0, svals
    cutoff = tol.rank_cutoff(matrix.shape) * svals[0]
    return int(np.count_nonzero(svals > cutoff)), svals


def min_norm_solve(matrix, rhs, tol: Tolerances = DEFAULT):
    """Minimum-norm least-squares solution of ``matrix @ x = rhs``.

    Uses a truncated SVD with the shared rank cutoff. Returns
    (x, rank, singular_values, residual); ``residual`` is the Euclidean
    distance from ``rhs`` to the numerical column space of ``matrix``.
    """
    matrix = np.asarray(matrix, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    u, s, vt = np.linalg.svd(matrix, full_matrices=False)
    if s.size and s[0] > 0.0:
        cutoff = tol.rank_cutoff(matrix.shape) * s[0]
        rank = int(np.count_nonzero(s > cutoff))
    else:
        rank = 0
    coeffs = u[:, :rank].T @ rhs
    x = vt[:rank].T @ (coeffs / s[:rank])
    residual = float(np.linalg.norm(rhs - u[:, :rank] @ coeffs))
    return x, rank, s, residual
