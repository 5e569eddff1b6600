import json

import numpy as np
import pytest

from quadinv.errors import DataError, UsageError
from quadinv.model import (AugmentedModel, ConstraintSet, Dataset,
                           QuadraticModel, assemble_W, augment,
                           augmented_value, evaluate_objective, extract_model,
                           phi_objective, problem_from_dict, problem_to_dict,
                           q_objective)

from conftest import random_dataset, random_model

G1 = np.array([[2.0, 1.0], [1.0, 2.0]])
C1 = np.array([1.0, 2.0])
G2 = np.array([[4.0, 1.0, 2.0], [1.0, 4.0, 3.0], [2.0, 3.0, 4.0]])
C2 = np.array([1.0, 2.0, 3.0])
W1 = np.array([[0.0, 1.0, 2.0], [1.0, 2.0, 1.0], [2.0, 1.0, 2.0]])


class TestConstruction:
    def test_asymmetric_G_rejected(self):
        with pytest.raises(DataError):
            QuadraticModel(G=np.array([[1.0, 2.0], [0.0, 1.0]]), c=np.zeros(2))

    def test_tiny_asymmetry_symmetrized(self):
        G = np.array([[1.0, 2.0], [2.0 + 1e-12, 1.0]])
        model = QuadraticModel(G=G, c=np.zeros(2))
        assert np.array_equal(model.G, model.G.T)

    def test_dimension_mismatch(self):
        with pytest.raises(UsageError):
            QuadraticModel(G=np.eye(2), c=np.zeros(3))

    def test_dataset_validation(self):
        with pytest.raises(UsageError):
            Dataset(points=np.zeros((3, 2)), values=np.zeros(2))
        with pytest.raises(DataError):
            Dataset(points=np.array([[np.inf, 0.0]]), values=np.zeros(1))

    def test_empty_constraints_allowed(self):
        cons = ConstraintSet(A=np.zeros((0, 2)), b=np.zeros(0))
        assert cons.k == 0 and cons.m == 2


class TestEvaluateObjective:
    def test_example1_optimum(self):
        model = QuadraticModel(G=G1, c=C1)
        assert evaluate_objective(model, [0.0, -1.5]) == pytest.approx(-0.75, abs=1e-14)

    def test_example1_first_point(self):
        model = QuadraticModel(G=G1, c=C1)
        assert evaluate_objective(model, [0.0, -1.8]) == pytest.approx(-0.36, abs=1e-14)

    def test_example2_optimum(self):
        model = QuadraticModel(G=G2, c=C2)
        assert evaluate_objective(model, [0.25, 0.25, -1.25]) == pytest.approx(-1.125, abs=1e-14)

    def test_zero_model(self):
        model = QuadraticModel(G=np.zeros((2, 2)), c=np.zeros(2))
        assert evaluate_objective(model, [3.0, -7.0]) == 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(UsageError):
            evaluate_objective(QuadraticModel(G=G1, c=C1), [1.0, 2.0, 3.0])


class TestAugment:
    def test_basic(self):
        assert np.array_equal(augment([3.0, 4.0]), [1.0, 3.0, 4.0])

    def test_optimum_point(self):
        assert np.array_equal(augment([0.0, -1.5]), [1.0, 0.0, -1.5])

    def test_single_coordinate(self):
        assert np.array_equal(augment([-0.2]), [1.0, -0.2])


class TestAugmentedMatrix:
    def test_assemble_example1(self):
        W = assemble_W(QuadraticModel(G=G1, c=C1), 0.0)
        assert np.array_equal(W.W, W1)

    def test_assemble_example2(self):
        W = assemble_W(QuadraticModel(G=G2, c=C2), 0.0)
        expected = np.array([[0.0, 1, 2, 3], [1, 4, 1, 2], [2, 1, 4, 3], [3, 2, 3, 4]])
        assert np.array_equal(W.W, expected)

    def test_assemble_zero(self):
        model = QuadraticModel(G=np.zeros((2, 2)), c=np.zeros(2))
        assert np.array_equal(assemble_W(model, 0.0).W, np.zeros((3, 3)))

    def test_extract_example1(self):
        model, w00 = extract_model(AugmentedModel(W1))
        assert np.array_equal(model.G, G1)
        assert np.array_equal(model.c, C1)
        assert w00 == 0.0

    def test_extract_noisy_values(self):
        Wn = np.array([[0.1843, 0.6311, 2.1355],
                       [0.6311, 1.9466, 0.7979],
                       [2.1355, 0.7979, 2.1058]])
        model, w00 = extract_model(AugmentedModel(Wn))
        assert np.array_equal(model.G, Wn[1:, 1:])
        assert np.array_equal(model.c, Wn[0, 1:])
        assert w00 == 0.1843

    def test_extract_identity(self):
        model, w00 = extract_model(AugmentedModel(np.eye(3)))
        assert np.array_equal(model.G, np.eye(2))
        assert np.array_equal(model.c, np.zeros(2))
        assert w00 == 1.0

    def test_asymmetric_rejected(self):
        W = W1.copy()
        W[0, 1] += 1e-3
        with pytest.raises(DataError):
            AugmentedModel(W)

    def test_round_trip(self, rng):
        for _ in range(30):
            model = random_model(rng, int(rng.integers(1, 5)))
            w00 = float(rng.uniform(-3, 3))
            back, w00_back = extract_model(assemble_W(model, w00))
            assert np.array_equal(back.G, model.G)
            assert np.array_equal(back.c, model.c)
            assert w00_back == w00


class TestAugmentedValue:
    def test_example1_value(self):
        # equals twice the objective at the optimum
        val = augmented_value(AugmentedModel(W1), [0.0, -1.5])
        assert val == pytest.approx(-1.5, abs=1e-12)

    def test_zero_matrix(self):
        aug = AugmentedModel(np.zeros((3, 3)))
        assert augmented_value(aug, [2.0, -9.0]) == 0.0

    def test_constant_only(self):
        W = np.zeros((3, 3))
        W[0, 0] = 1.0
        assert augmented_value(AugmentedModel(W), [5.0, 5.0]) == 1.0

    def test_expansion_identity(self, rng):
        for _ in range(30):
            m = int(rng.integers(1, 5))
            model = random_model(rng, m)
            w00 = float(rng.uniform(-2, 2))
            x = rng.uniform(-2, 2, size=m)
            val = augmented_value(assemble_W(model, w00), x)
            direct = w00 + 2 * model.c @ x + x @ model.G @ x
            assert val == pytest.approx(direct, abs=1e-12 * max(1, abs(direct)))


class TestObjectives:
    def test_phi_zero_on_exact_data(self, rng):
        data, model = random_dataset(rng, m=2, n=15)
        assert phi_objective(model, data) <= 1e-18

    def test_phi_single_pair(self):
        model = QuadraticModel(G=np.zeros((2, 2)), c=np.zeros(2))
        data = Dataset(points=np.array([[1.0, 1.0]]), values=np.array([2.0]))
        assert phi_objective(model, data) == pytest.approx(2.0)

    def test_phi_constant_residual(self, rng):
        data, model = random_dataset(rng, m=3, n=12)
        shifted = Dataset(points=data.points, values=data.values - 1.0)
        assert phi_objective(model, shifted) == pytest.approx(data.n / 2, rel=1e-12)

    def test_q_equals_four_phi(self, rng):
        for _ in range(100):
            data, model = random_dataset(rng)
            noisy = Dataset(points=data.points,
                            values=data.values + rng.uniform(-1, 1, size=data.n))
            phi = phi_objective(model, noisy)
            q = q_objective(assemble_W(model, 0.0), noisy)
            assert q == pytest.approx(4.0 * phi, rel=1e-12)

    def test_q_single_pair(self):
        aug = AugmentedModel(np.zeros((3, 3)))
        data = Dataset(points=np.array([[0.5, 0.5]]), values=np.array([1.0]))
        assert q_objective(aug, data) == pytest.approx(2.0)

    def test_q_zero_on_exact_fit(self, rng):
        data, model = random_dataset(rng, m=2, n=20)
        assert q_objective(assemble_W(model, 0.0), data) <= 1e-18


class TestProblemJson:
    def test_round_trip(self):
        model = QuadraticModel(G=G1, c=C1)
        cons = ConstraintSet(A=np.array([[1.0, 2.0]]), b=np.array([-3.0]))
        doc = json.loads(json.dumps(problem_to_dict(model, 0.5, cons)))
        back, w00, cons_back = problem_from_dict(doc)
        assert np.array_equal(back.G, model.G)
        assert np.array_equal(back.c, model.c)
        assert w00 == 0.5
        assert np.array_equal(cons_back.A, cons.A)

    def test_missing_c_rejected(self):
        with pytest.raises(DataError):
            problem_from_dict({"G": [[1.0]]})

    def test_w00_defaults_to_zero(self):
        _, w00, _ = problem_from_dict({"G": [[1.0]], "c": [0.0]})
        assert w00 == 0.0

    def test_partial_constraints_rejected(self):
        with pytest.raises(DataError):
            problem_from_dict({"G": [[1.0]], "c": [0.0], "A": [[1.0]]})
