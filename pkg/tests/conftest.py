"""Shared helpers: independent oracles and random problem generators.

The oracles here deliberately avoid the code paths they check: the
3x3 eigensolver is the closed-form trigonometric cubic, matrix rank is
hand-rolled row echelon, and the least-squares objective for
finite-difference checks is recomputed from scratch on raw arrays.
"""

import math

import numpy as np
import pytest

from quadinv.model import Dataset, QuadraticModel


def sym_eigvals_3x3(A):
    """Eigenvalues of a symmetric 3x3 matrix by the trigonometric
    solution of the characteristic cubic, descending order."""
    A = np.asarray(A, dtype=np.float64)
    q = np.trace(A) / 3.0
    p1 = A[0, 1] ** 2 + A[0, 2] ** 2 + A[1, 2] ** 2
    p2 = sum((A[i, i] - q) ** 2 for i in range(3)) + 2.0 * p1
    if p2 <= 1e-30:
        return np.sort(np.diag(A))[::-1]
    p = math.sqrt(p2 / 6.0)
    B = (A - q * np.eye(3)) / p
    det_b = (B[0, 0] * (B[1, 1] * B[2, 2] - B[1, 2] * B[2, 1])
             - B[0, 1] * (B[1, 0] * B[2, 2] - B[1, 2] * B[2, 0])
             + B[0, 2] * (B[1, 0] * B[2, 1] - B[1, 1] * B[2, 0]))
    r = min(1.0, max(-1.0, det_b / 2.0))
    phi = math.acos(r) / 3.0
    e1 = q + 2.0 * p * math.cos(phi)
    e3 = q + 2.0 * p * math.cos(phi + 2.0 * math.pi / 3.0)
    e2 = 3.0 * q - e1 - e3
    return np.array(sorted([e1, e2, e3], reverse=True))


def echelon_rank(M, tol=1e-10):
    """Matrix rank by Gaussian elimination with partial pivoting."""
    M = np.array(M, dtype=np.float64)
    scale = np.max(np.abs(M)) or 1.0
    rows, cols = M.shape
    rank = 0
    for col in range(cols):
        if rank == rows:
            break
        pivot = rank + int(np.argmax(np.abs(M[rank:, col])))
        if abs(M[pivot, col]) <= tol * scale:
            continue
        M[[rank, pivot]] = M[[pivot, rank]]
        M[rank + 1:] -= np.outer(M[rank + 1:, col] / M[rank, col], M[rank])
        rank += 1
    return rank


def raw_q_value(W_arr, data):
    """Least-squares objective 1/2 sum (xhat'Wxhat - 2y)^2 computed
    directly on a raw (possibly asymmetric) array; finite-difference
    oracle for the stationarity gradient."""
    total = 0.0
    for i in range(data.n):
        xhat = np.concatenate(([1.0], data.points[i]))
        total += 0.5 * (xhat @ W_arr @ xhat - 2.0 * data.values[i]) ** 2
    return total


def random_model(rng, m):
    G = rng.uniform(-2.0, 2.0, size=(m, m))
    return QuadraticModel(G=0.5 * (G + G.T), c=rng.uniform(-2.0, 2.0, size=m))


def random_dataset(rng, m=None, n=None, model=None):
    if m is None:
        m = int(rng.integers(1, 5))
    if n is None:
        n = int(rng.integers(1, 51))
    if model is None:
        model = random_model(rng, m)
    pts = rng.uniform(-2.0, 2.0, size=(n, m))
    y = np.array([0.5 * p @ model.G @ p + model.c @ p for p in pts])
    return Dataset(points=pts, values=y), model


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)
