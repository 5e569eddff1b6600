"""quadinv: recover quadratic-program parameters (G, c) from observed
(x, y) pairs, diagnose the resulting linear system, and reconstruct and
solve the original constrained problem."""

__version__ = "0.1.0"

from .model import (AugmentedModel, ConstraintSet, Dataset, QuadraticModel,
                    assemble_W, augment, augmented_value, evaluate_objective,
                    extract_model, phi_objective, q_objective)
from .inverse import (FitResult, SystemOfEquations, build_gram_oracle,
                      build_left_matrix, build_right_vector, build_system,
                      feature_vector, fit, stationarity_residual)
from .qp import KktReport, QpSolution, kkt_residual, reconstruct, solve_qp
from .datagen import (NoiseSpec, SampleSpec, StudyReport, condition_study,
                      fixture, fixture_metadata, forward_values, perturb)

__all__ = [
    "AugmentedModel", "ConstraintSet", "Dataset", "QuadraticModel",
    "assemble_W", "augment", "augmented_value", "evaluate_objective",
    "extract_model", "phi_objective", "q_objective",
    "FitResult", "SystemOfEquations", "build_gram_oracle",
    "build_left_matrix", "build_right_vector", "build_system",
    "feature_vector", "fit", "stationarity_residual",
    "KktReport", "QpSolution", "kkt_residual", "reconstruct", "solve_qp",
    "NoiseSpec", "SampleSpec", "StudyReport", "condition_study",
    "fixture", "fixture_metadata", "forward_values", "perturb",
]
