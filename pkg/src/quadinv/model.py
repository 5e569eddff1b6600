"""Domain types for quadratic models, observation datasets and the
augmented symmetric matrix, plus the two least-squares objectives.

The augmented matrix W packs a constant offset w00 in the corner, the
linear coefficients c along the first row/column and the quadratic form
G in the trailing block, so that for xhat = (1, x):

    xhat' W xhat = w00 + 2 c'x + x'Gx = 2 f(x) + w00
"""

import json
from dataclasses import dataclass

import numpy as np

from .densela import as_matrix, as_vector
from .errors import DataError, UsageError

SYMMETRY_RTOL = 1e-9


def _check_symmetric(M: np.ndarray, what: str) -> np.ndarray:
    dev = np.max(np.abs(M - M.T))
    if dev > SYMMETRY_RTOL * max(1.0, np.max(np.abs(M))):
        raise DataError(f"{what} is not symmetric (max deviation {dev:.3e})")
    return 0.5 * (M + M.T)


@dataclass(frozen=True)
class QuadraticModel:
    """The pair (G, c) defining f(x) = 1/2 x'Gx + c'x."""

    G: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        G = as_matrix(self.G)
        c = as_vector(self.c)
        if G.shape[0] != G.shape[1]:
            raise UsageError("quadratic form matrix must be square")
        if G.shape[0] != c.shape[0]:
            raise UsageError("dimensions of G and c disagree")
        G = _check_symmetric(G, "quadratic form matrix")
        object.__setattr__(self, "G", G)
        object.__setattr__(self, "c", c)

    @property
    def dim(self) -> int:
        return self.c.shape[0]


@dataclass(frozen=True)
class Dataset:
    """N observation pairs (x_i, y_i) with x_i in R^m."""

    points: np.ndarray  # (N, m)
    values: np.ndarray  # (N,)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        vals = as_vector(self.values)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise UsageError(f"points must be a non-empty N x m array, got {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise DataError("dataset points contain non-finite entries")
        if pts.shape[0] != vals.shape[0]:
            raise UsageError(
                f"{pts.shape[0]} points but {vals.shape[0]} observed values"
            )
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "values", vals)

    @property
    def m(self) -> int:
        return self.points.shape[1]

    @property
    def n(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True)
class AugmentedModel:
    """Symmetric (m+1) x (m+1) matrix packing (w00, c, G)."""

    W: np.ndarray

    def __post_init__(self):
        W = as_matrix(self.W)
        if W.shape[0] != W.shape[1] or W.shape[0] < 2:
            raise UsageError("augmented matrix must be square with size >= 2")
        object.__setattr__(self, "W", _check_symmetric(W, "augmented matrix"))

    @property
    def dim(self) -> int:
        """Dimension m of the underlying model (W is (m+1) square)."""
        return self.W.shape[0] - 1


@dataclass(frozen=True)
class ConstraintSet:
    """Linear inequality constraints A x <= b (K may be zero)."""

    A: np.ndarray  # (K, m)
    b: np.ndarray  # (K,)

    def __post_init__(self):
        A = np.asarray(self.A, dtype=np.float64)
        b = np.asarray(self.b, dtype=np.float64)
        if A.ndim != 2:
            raise UsageError(f"constraint matrix must be 2-d, got shape {A.shape}")
        if b.ndim != 1 or A.shape[0] != b.shape[0]:
            raise UsageError("constraint matrix and bound vector sizes disagree")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise DataError("constraints contain non-finite entries")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def m(self) -> int:
        return self.A.shape[1]

    @property
    def k(self) -> int:
        return self.A.shape[0]


def evaluate_objective(model: QuadraticModel, x) -> float:
    """f(x) = 1/2 x'Gx + c'x."""
    x = as_vector(x)
    if x.shape[0] != model.dim:
        raise UsageError(f"point has length {x.shape[0]}, model dimension is {model.dim}")
    return float(0.5 * x @ model.G @ x + model.c @ x)


def augment(x) -> np.ndarray:
    """Prepend the constant coordinate: (x_1..x_m) -> (1, x_1..x_m)."""
    x = as_vector(x)
    return np.concatenate(([1.0], x))


def assemble_W(model: QuadraticModel, w00: float = 0.0) -> AugmentedModel:
    m = model.dim
    W = np.empty((m + 1, m + 1))
    W[0, 0] = w00
    W[0, 1:] = model.c
    W[1:, 0] = model.c
    W[1:, 1:] = model.G
    return AugmentedModel(W)


def extract_model(aug: AugmentedModel) -> tuple[QuadraticModel, float]:
    """Inverse of assemble_W: split W into ((G, c), w00)."""
    W = aug.W
    return QuadraticModel(G=W[1:, 1:], c=W[0, 1:]), float(W[0, 0])


def augmented_value(aug: AugmentedModel, x) -> float:
    """xhat' W xhat, which equals w00 + 2 c'x + x'Gx."""
    x = as_vector(x)
    if x.shape[0] != aug.dim:
        raise UsageError(f"point has length {x.shape[0]}, expected {aug.dim}")
    xhat = augment(x)
    return float(xhat @ aug.W @ xhat)


def phi_objective(model: QuadraticModel, data: Dataset) -> float:
    """Half the sum of squared residuals of f against the observed values."""
    if data.m != model.dim:
        raise UsageError("dataset and model dimensions disagree")
    pred = 0.5 * np.einsum("ij,jk,ik->i", data.points, model.G, data.points) \
        + data.points @ model.c
    r = pred - data.values
    return float(0.5 * np.sum(r * r))


def q_objective(aug: AugmentedModel, data: Dataset) -> float:
    """Half the sum of squared residuals of xhat'Wxhat against 2y."""
    if data.m != aug.dim:
        raise UsageError("dataset and augmented matrix dimensions disagree")
    Xh = np.column_stack([np.ones(data.n), data.points])
    r = np.einsum("ij,jk,ik->i", Xh, aug.W, Xh) - 2.0 * data.values
    return float(0.5 * np.sum(r * r))


def residuals(model: QuadraticModel, data: Dataset) -> np.ndarray:
    """Per-point residuals f(x_i) - y_i."""
    if data.m != model.dim:
        raise UsageError("dataset and model dimensions disagree")
    pred = 0.5 * np.einsum("ij,jk,ik->i", data.points, model.G, data.points) \
        + data.points @ model.c
    return pred - data.values


# --- JSON problem documents -------------------------------------------------

def problem_to_dict(model: QuadraticModel, w00: float = 0.0,
                    cons: ConstraintSet | None = None) -> dict:
    doc = {"G": model.G.tolist(), "c": model.c.tolist(), "w00": w00}
    if cons is not None:
        doc["A"] = cons.A.tolist()
        doc["b"] = cons.b.tolist()
    return doc


def problem_from_dict(doc: dict) -> tuple[QuadraticModel, float, ConstraintSet | None]:
    if not isinstance(doc, dict) or "G" not in doc or "c" not in doc:
        raise DataError('problem document must be an object with keys "G" and "c"')
    try:
        model = QuadraticModel(G=np.asarray(doc["G"], dtype=np.float64),
                               c=np.asarray(doc["c"], dtype=np.float64))
    except (TypeError, ValueError) as exc:
        raise DataError(f"malformed problem document: {exc}") from exc
    except UsageError as exc:
        raise DataError(str(exc)) from exc
    w00 = float(doc.get("w00", 0.0))
    cons = None
    if "A" in doc or "b" in doc:
        if not ("A" in doc and "b" in doc):
            raise DataError('constraints need both "A" and "b"')
        try:
            cons = ConstraintSet(A=np.asarray(doc["A"], dtype=np.float64),
                                 b=np.asarray(doc["b"], dtype=np.float64))
        except (TypeError, ValueError, UsageError) as exc:
            raise DataError(f"malformed constraints: {exc}") from exc
        if cons.m != model.dim:
            raise DataError("constraint and model dimensions disagree")
    return model, w00, cons


def save_problem(path, model: QuadraticModel, w00: float = 0.0,
                 cons: ConstraintSet | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(problem_to_dict(model, w00, cons), fh, indent=2)
        fh.write("\n")


def load_problem(path) -> tuple[QuadraticModel, float, ConstraintSet | None]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except FileNotFoundError as exc:
        raise DataError(f"cannot read problem file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"invalid JSON in {path}: {exc}") from exc
    return problem_from_dict(doc)
