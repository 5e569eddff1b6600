"""Assembly and solution of the normal-equation system for the augmented
matrix W.

For observations (x_i, y_i) the fitted W minimizes
1/2 sum_i (xhat_i' W xhat_i - 2 y_i)^2 over symmetric matrices.  The
stationarity conditions form a square (m+1)^2 x (m+1)^2 linear system in
vec W under the row-major index rho(p, r) = p*(m+1) + r.  The system is
rank deficient by construction (rows rho(p, r) and rho(r, p) coincide),
which the minimum-norm pseudoinverse solve absorbs.

build_gram_oracle produces the same system by a structurally different
route (sum of feature outer products) and exists purely as a
cross-check.
"""

from dataclasses import dataclass

import numpy as np

from . import densela
from .errors import InternalError, UsageError
from .model import (AugmentedModel, Dataset, QuadraticModel, augment,
                    extract_model, phi_objective, q_objective)


def _augmented_columns(data: Dataset) -> np.ndarray:
    """(m+1) x N matrix whose columns are the augmented observation points."""
    return np.vstack([np.ones(data.n), data.points.T])


def rho(p: int, r: int, m: int) -> int:
    """Row-major index of the (p, r) entry of an (m+1) square matrix."""
    return p * (m + 1) + r


def feature_vector(xhat) -> np.ndarray:
    """vec(xhat xhat') in row-major order: v[rho(p, r)] = xhat_p * xhat_r."""
    xhat = densela.as_vector(xhat)
    return np.outer(xhat, xhat).reshape(-1)


@dataclass(frozen=True)
class SystemOfEquations:
    """Left matrix and right side of the normal-equation system."""

    left: np.ndarray   # ((m+1)^2, (m+1)^2)
    right: np.ndarray  # ((m+1)^2,)
    m: int
    n: int


@dataclass(frozen=True)
class FitResult:
    W: AugmentedModel
    model: QuadraticModel
    w00: float
    q_residual: float
    phi_residual: float
    rank: int
    cond: float
    solver_used: str


def build_left_matrix(data: Dataset) -> np.ndarray:
    """Fourth-moment coefficient matrix.

    entry(rho(p, r), rho(l, t)) = sum_i xhat_pi xhat_ri xhat_li xhat_ti
    """
    Xh = _augmented_columns(data)
    d = Xh.shape[0]
    # Pair products first: commutativity then makes the assembled matrix
    # bit-exactly symmetric and its duplicate rows bit-equal.
    P = np.einsum("pi,ri->pri", Xh, Xh, optimize=False)
    T = np.einsum("pri,lti->prlt", P, P, optimize=False)
    return T.reshape(d * d, d * d)


def build_right_vector(data: Dataset) -> np.ndarray:
    """Second-moment right side: entry(rho(p, r)) = 2 sum_i y_i xhat_pi xhat_ri."""
    Xh = _augmented_columns(data)
    P = np.einsum("pi,ri->pri", Xh, Xh, optimize=False)
    R = np.einsum("pri,i->pr", P, 2.0 * data.values, optimize=False)
    return R.reshape(-1)


def build_gram_oracle(data: Dataset) -> tuple[np.ndarray, np.ndarray]:
    """Same system accumulated as sum_i v_i v_i' and 2 sum_i y_i v_i
    with v_i = feature_vector(augment(x_i)).  Independent cross-check
    route for build_left_matrix / build_right_vector."""
    d = (data.m + 1) ** 2
    M = np.zeros((d, d))
    r = np.zeros(d)
    for i in range(data.n):
        v = feature_vector(augment(data.points[i]))
        M += np.outer(v, v)
        r += 2.0 * data.values[i] * v
    return M, r


def _validate_system(left: np.ndarray, right: np.ndarray, m: int) -> None:
    d = m + 1
    if not np.array_equal(left, left.T):
        dev = np.max(np.abs(left - left.T))
        raise InternalError(f"left matrix asymmetric (max deviation {dev:.3e})")
    for p in range(d):
        for r in range(p + 1, d):
            i, j = rho(p, r, m), rho(r, p, m)
            if not np.array_equal(left[i], left[j]):
                raise InternalError(f"rows {i} and {j} of the left matrix differ")
            if right[i] != right[j]:
                raise InternalError(f"right entries {i} and {j} differ")
    eigs = np.linalg.eigvalsh(0.5 * (left + left.T))
    if eigs[0] < -1e-10 * max(1.0, eigs[-1]):
        raise InternalError(f"left matrix is not PSD (min eigenvalue {eigs[0]:.3e})")


def build_system(data: Dataset) -> SystemOfEquations:
    """Build and validate the full normal-equation system for a dataset."""
    left = build_left_matrix(data)
    right = build_right_vector(data)
    _validate_system(left, right, data.m)
    return SystemOfEquations(left=left, right=right, m=data.m, n=data.n)


def fit(data: Dataset, solver: str = "pinv", rank_tol: float | None = None,
        ridge: float = 0.0) -> FitResult:
    """Fit the augmented matrix W to a dataset.

    solver "pinv" takes the minimum-norm least-squares solution through
    the pseudoinverse (optionally with an explicit rank tolerance);
    solver "tikhonov" solves the ridge-regularized system with parameter
    ``ridge``.  The solved vector is reshaped row-major and symmetrized;
    for the pseudoinverse route the symmetrization is a round-off-level
    no-op.
    """
    if data.m < 1:
        raise UsageError("dataset dimension must be >= 1")
    system = build_system(data)
    d = data.m + 1
    if solver == "pinv":
        w_vec = densela.pinv_solve(system.left, system.right, rank_tol=rank_tol)
        tag = "pseudoinverse"
    elif solver == "tikhonov":
        w_vec = densela.tikhonov_solve(system.left, system.right, lam=ridge)
        tag = f"tikhonov(lambda={ridge:g})"
    else:
        raise UsageError(f"unknown solver {solver!r} (expected 'pinv' or 'tikhonov')")
    W_raw = w_vec.reshape(d, d)
    W = AugmentedModel(0.5 * (W_raw + W_raw.T))
    model, w00 = extract_model(W)
    return FitResult(
        W=W,
        model=model,
        w00=w00,
        q_residual=q_objective(W, data),
        phi_residual=phi_objective(model, data),
        rank=densela.numerical_rank(system.left, rank_tol=rank_tol),
        cond=densela.condition_number(system.left, rank_tol=rank_tol),
        solver_used=tag,
    )


def stationarity_residual(aug: AugmentedModel, data: Dataset) -> np.ndarray:
    """Gradient of the augmented least-squares objective at W.

    entry (p, r) = sum_i (xhat_i' W xhat_i - 2 y_i) xhat_pi xhat_ri;
    the zero matrix characterizes stationary points.
    """
    if data.m != aug.dim:
        raise UsageError("dataset and augmented matrix dimensions disagree")
    Xh = _augmented_columns(data)
    e = np.einsum("pi,pr,ri->i", Xh, aug.W, Xh) - 2.0 * data.values
    return np.einsum("i,pi,ri->pr", e, Xh, Xh)
