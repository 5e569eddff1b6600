"""Minimal dense real linear algebra used by the fitting and QP stages.

Everything here operates on plain numpy arrays (matrices are 2-d,
vectors 1-d, float64).  All functions are pure; the heavy lifting is
delegated to LAPACK through numpy, with the rank/tolerance conventions
fixed in one place so every caller agrees on what "numerically zero"
means.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DataError, NumericalError, SingularMatrixError, UsageError

_EPS = np.finfo(np.float64).eps


def as_matrix(M) -> np.ndarray:
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] < 1 or M.shape[1] < 1:
        raise UsageError(f"expected a 2-d matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise DataError("matrix contains non-finite entries")
    return M


def as_vector(v) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or v.shape[0] < 1:
        raise UsageError(f"expected a 1-d vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise DataError("vector contains non-finite entries")
    return v


@dataclass(frozen=True)
class SvdResult:
    """Thin SVD factors: M = U @ diag(s) @ Vt with s non-increasing."""

    left_basis: np.ndarray      # (rows, k)
    singular_values: np.ndarray  # (k,), k = min(rows, cols)
    right_basis_t: np.ndarray   # (k, cols)


def svd(M) -> SvdResult:
    """Thin singular value decomposition of a finite real matrix."""
    M = as_matrix(M)
    try:
        U, s, Vt = np.linalg.svd(M, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            f"SVD failed to converge for a {M.shape[0]}x{M.shape[1]} matrix"
        ) from exc
    return SvdResult(left_basis=U, singular_values=s, right_basis_t=Vt)


def default_rank_tol(shape, smax: float) -> float:
    """Effective-rank cutoff: max(rows, cols) * eps * sigma_max."""
    return max(shape) * _EPS * smax


def pinv_solve(M, b, rank_tol: float | None = None) -> np.ndarray:
    """Minimum-norm least-squares solution M+ @ b.

    Singular values at or below ``rank_tol`` are discarded.  An all-zero
    matrix yields the zero vector (the valid minimum-norm answer).
    """
    M = as_matrix(M)
    b = as_vector(b)
    if M.shape[0] != b.shape[0]:
        raise UsageError(
            f"matrix has {M.shape[0]} rows but right side has length {b.shape[0]}"
        )
    fac = svd(M)
    s = fac.singular_values
    tol = default_rank_tol(M.shape, s[0]) if rank_tol is None else rank_tol
    keep = s > tol
    if not np.any(keep):
        return np.zeros(M.shape[1])
    coeffs = (fac.left_basis[:, keep].T @ b) / s[keep]
    return fac.right_basis_t[keep].T @ coeffs


def tikhonov_solve(M, b, lam: float) -> np.ndarray:
    """Solve the ridge system (M + lam*I) w = b for symmetric PSD M."""
    M = as_matrix(M)
    b = as_vector(b)
    if M.shape[0] != M.shape[1]:
        raise UsageError("tikhonov_solve requires a square matrix")
    if M.shape[0] != b.shape[0]:
        raise UsageError("matrix and right side dimensions disagree")
    if lam < 0:
        raise UsageError("regularization parameter must be >= 0")
    if lam == 0.0:
        s = svd(M).singular_values
        if s[0] == 0.0 or s[-1] <= default_rank_tol(M.shape, s[0]):
            raise NumericalError(
                "matrix is numerically singular with lambda = 0; "
                "use pinv_solve or a positive lambda"
            )
        return np.linalg.solve(M, b)
    return np.linalg.solve(M + lam * np.eye(M.shape[0]), b)


def numerical_rank(M, rank_tol: float | None = None) -> int:
    """Number of singular values above the rank tolerance."""
    s = svd(M).singular_values
    tol = default_rank_tol(np.shape(M), s[0]) if rank_tol is None else rank_tol
    return int(np.count_nonzero(s > tol))


def condition_number(M, rank_tol: float | None = None) -> float:
    """sigma_max / sigma_min over singular values above the tolerance."""
    s = svd(M).singular_values
    tol = default_rank_tol(np.shape(M), s[0]) if rank_tol is None else rank_tol
    above = s[s > tol]
    if above.size == 0:
        raise NumericalError("no nonzero singular values")
    return float(above[0] / above[-1])


def solve_linear(M, b) -> np.ndarray:
    """Direct solve of a square system via pivoted factorization.

    Raises SingularMatrixError when the matrix is singular within the
    pivot tolerance; active-set callers catch this and skip the
    candidate.
    """
    M = as_matrix(M)
    b = as_vector(b)
    if M.shape[0] != M.shape[1]:
        raise UsageError("solve_linear requires a square matrix")
    if M.shape[0] != b.shape[0]:
        raise UsageError("matrix and right side dimensions disagree")
    s = svd(M).singular_values
    if s[0] == 0.0 or s[-1] <= 1e-12 * s[0]:
        raise SingularMatrixError(
            f"{M.shape[0]}x{M.shape[1]} system is singular within tolerance"
        )
    try:
        x = np.linalg.solve(M, b)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError(str(exc)) from exc
    resid = np.max(np.abs(M @ x - b))
    if resid > 1e-9 * max(1.0, np.max(np.abs(b))):
        raise SingularMatrixError(
            f"direct solve residual {resid:.3e} exceeds tolerance"
        )
    return x
