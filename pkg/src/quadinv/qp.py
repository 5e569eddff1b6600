"""Direct solution of the inequality-constrained quadratic program

    min 1/2 x'Gx + c'x   subject to   A x <= b

by exhaustive enumeration of constraint active sets.  Every subset S of
constraints yields a candidate from the equality-constrained system

    [G   A_S'] [x     ]   [-c ]
    [A_S  0  ] [lambda] = [b_S]

and the returned solution is the feasible, dual-feasible candidate with
the smallest objective.  Problem sizes here are tiny (m <= 10, K <= 20),
so the 2^K sweep is exact and certifiable rather than iterative.

reconstruct() chains the inverse fit with this solver: fit W from data,
drop the constant offset w00 (it cannot move the minimizer), and solve
the rebuilt direct problem.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import densela, inverse
from .errors import NoSolutionError, SingularMatrixError, UsageError
from .model import ConstraintSet, Dataset, QuadraticModel, evaluate_objective

MAX_CONSTRAINTS = 20
DEFAULT_TOL_MULT = 1e-9


@dataclass(frozen=True)
class QpSolution:
    x_star: np.ndarray
    f_star: float
    active_set: tuple[int, ...]
    multipliers: np.ndarray  # aligned with active_set
    warnings: tuple[str, ...] = field(default=())


@dataclass(frozen=True)
class KktReport:
    max_feasibility_violation: float
    max_stationarity_residual: float
    min_multiplier: float


def _default_tol(cons: ConstraintSet, model: QuadraticModel) -> float:
    scale = max(1.0,
                float(np.max(np.abs(cons.b))) if cons.k else 1.0,
                float(np.max(np.abs(model.c))))
    return 1e-8 * scale


def _feasible_region_empty(cons: ConstraintSet) -> bool:
    from scipy.optimize import linprog
    res = linprog(c=np.zeros(cons.m), A_ub=cons.A, b_ub=cons.b,
                  bounds=[(None, None)] * cons.m, method="highs")
    return res.status == 2


def solve_qp(model: QuadraticModel, cons: ConstraintSet,
             tol_feas: float | None = None, tol_kkt: float | None = None,
             tol_mult: float = DEFAULT_TOL_MULT,
             warnings: tuple[str, ...] = ()) -> QpSolution:
    """Globally solve the QP by enumerating all constraint subsets.

    Candidates must be primal feasible within tol_feas and dual feasible
    within tol_mult.  Ties in the objective are broken by smaller active
    set, then lexicographically smaller index set.  Singular equality
    systems (degenerate active sets) are skipped.
    """
    if cons.m != model.dim:
        raise UsageError("constraint and model dimensions disagree")
    if cons.k > MAX_CONSTRAINTS:
        raise UsageError(
            f"{cons.k} constraints exceed the enumeration cap of {MAX_CONSTRAINTS}")
    m, K = model.dim, cons.k
    if tol_feas is None:
        tol_feas = _default_tol(cons, model)
    if tol_kkt is None:
        tol_kkt = _default_tol(cons, model)

    candidates = []
    n_singular = 0
    for size in range(min(K, m) + 1):
        for S in itertools.combinations(range(K), size):
            k = len(S)
            A_S = cons.A[list(S)]
            kkt = np.zeros((m + k, m + k))
            kkt[:m, :m] = model.G
            kkt[:m, m:] = A_S.T
            kkt[m:, :m] = A_S
            rhs = np.concatenate([-model.c, cons.b[list(S)]])
            try:
                sol = densela.solve_linear(kkt, rhs)
            except SingularMatrixError:
                n_singular += 1
                continue
            x, lam = sol[:m], sol[m:]
            if K and np.max(cons.A @ x - cons.b) > tol_feas:
                continue
            if k and np.min(lam) < -tol_mult:
                continue
            candidates.append((float(evaluate_objective(model, x)), S, x, lam))

    if not candidates:
        if K and _feasible_region_empty(cons):
            reason = "the feasible region appears to be empty"
        else:
            reason = (f"no feasible KKT point found "
                      f"({n_singular} singular active sets skipped)")
        raise NoSolutionError(reason)

    f_min = min(c[0] for c in candidates)
    tie = 1e-9 * max(1.0, abs(f_min))
    best = min((c for c in candidates if c[0] <= f_min + tie),
               key=lambda c: (len(c[1]), c[1]))
    f_best, S, x, lam = best
    return QpSolution(x_star=x, f_star=f_best, active_set=S,
                      multipliers=lam, warnings=warnings)


def kkt_residual(model: QuadraticModel, cons: ConstraintSet,
                 sol: QpSolution) -> KktReport:
    """Numerical check of the optimality conditions at a solution."""
    if cons.m != model.dim:
        raise UsageError("constraint and model dimensions disagree")
    x = np.asarray(sol.x_star, dtype=np.float64)
    feas = float(np.max(cons.A @ x - cons.b)) if cons.k else 0.0
    grad = model.G @ x + model.c
    if sol.active_set:
        grad = grad + cons.A[list(sol.active_set)].T @ sol.multipliers
    stat = float(np.max(np.abs(grad)))
    min_mult = float(np.min(sol.multipliers)) if sol.active_set else 0.0
    return KktReport(max_feasibility_violation=feas,
                     max_stationarity_residual=stat,
                     min_multiplier=min_mult)


def reconstruct(data: Dataset, cons: ConstraintSet, solver: str = "pinv",
                rank_tol: float | None = None, ridge: float = 0.0,
                ) -> tuple[inverse.FitResult, QpSolution]:
    """Fit (G, c) from observations, then solve the rebuilt direct QP.

    The fitted constant offset w00 is reported on the FitResult but
    excluded from the QP objective.  If the recovered quadratic form is
    not positive semidefinite the solve still proceeds; the returned
    solution carries a warning that it is a stationary KKT point rather
    than a certified minimum.
    """
    if data.m != cons.m:
        raise UsageError("dataset and constraint dimensions disagree")
    result = inverse.fit(data, solver=solver, rank_tol=rank_tol, ridge=ridge)
    warns = ()
    eigs = np.linalg.eigvalsh(result.model.G)
    if eigs[0] < -1e-8 * max(1.0, abs(eigs[-1])):
        warns = (f"recovered quadratic form is not positive semidefinite "
                 f"(min eigenvalue {eigs[0]:.3e}); KKT points are stationary, "
                 f"not certified minima",)
    sol = solve_qp(result.model, cons, warnings=warns)
    return result, sol
