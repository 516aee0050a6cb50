"""L2-regularized hinge-loss linear SVM trained by dual coordinate descent.

The binary solver works on the L1-hinge dual with box constraints
0 <= alpha_i <= C, visiting coordinates in a freshly shuffled order each
sweep and stopping when the largest projected-gradient violation drops
below the tolerance. The bias is handled by augmenting every example
with a constant-1 coordinate. Multiclass is one-vs-rest with argmax
prediction, ties resolved toward the lowest class index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import csr_decision, dual_cd
from .errors import DimensionMismatch, InvalidValue, MissingClass, SingleSign
from .tfidf import SparseVector, stack_sparse


@dataclass(frozen=True, slots=True)
class SvcParams:
    C: float = 1.0
    tolerance: float = 1e-4
    max_sweeps: int = 1000
    seed: int = 0

    def __post_init__(self) -> None:
        if self.C <= 0:
            raise InvalidValue("svc.C", "must be positive")
        if self.tolerance <= 0:
            raise InvalidValue("svc.tolerance", "must be positive")
        if self.max_sweeps < 1:
            raise InvalidValue("svc.max_sweeps", "must be positive")


@dataclass(frozen=True)
class LinearSvcModel:
    weight_matrix: np.ndarray  # (classes, features)
    bias: np.ndarray           # (classes,)
    class_names: tuple[str, ...]
    params: SvcParams

    @property
    def feature_dimension(self) -> int:
        return self.weight_matrix.shape[1]

    @property
    def class_count(self) -> int:
        return self.weight_matrix.shape[0]


@dataclass(frozen=True)
class DualSolution:
    """Full solver output; train_binary exposes just (weights, bias)."""

    weights: np.ndarray
    bias: float
    alpha: np.ndarray
    objectives: np.ndarray
    final_violation: float

    @property
    def sweeps(self) -> int:
        return len(self.objectives)


def as_csr(features) -> tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    """Normalize SparseVector sequences, dense arrays, or CSR tuples."""
    if isinstance(features, tuple) and len(features) == 4:
        return features
    if isinstance(features, np.ndarray):
        if features.ndim != 2:
            raise InvalidValue("features", "dense features must be 2-D")
        dense = np.ascontiguousarray(features, dtype=np.float64)
        n, dim = dense.shape
        mask = dense != 0.0
        counts = mask.sum(axis=1)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        cols = np.nonzero(mask)[1].astype(np.int64)
        data = dense[mask].astype(np.float64)
        return indptr, cols, data, dim
    vectors = list(features)
    if vectors and not isinstance(vectors[0], SparseVector):
        raise InvalidValue("features", "expected SparseVectors, a 2-D array, or CSR")
    return stack_sparse(vectors)


def _augment_bias(indptr, indices, data, dim):
    """Append a constant-1 coordinate at index ``dim`` to every row."""
    n = len(indptr) - 1
    nnz = len(indices)
    new_indptr = indptr + np.arange(n + 1, dtype=np.int64)
    bias_slots = new_indptr[1:] - 1
    new_indices = np.empty(nnz + n, dtype=np.int64)
    new_data = np.empty(nnz + n, dtype=np.float64)
    keep = np.ones(nnz + n, dtype=bool)
    keep[bias_slots] = False
    new_indices[keep] = indices
    new_data[keep] = data
    new_indices[bias_slots] = dim
    new_data[bias_slots] = 1.0
    return new_indptr, new_indices, new_data, dim + 1


def solve_binary_dual(features, targets, params: SvcParams) -> DualSolution:
    """Run the dual solver and return the full trace for inspection."""
    indptr, indices, data, dim = as_csr(features)
    y = np.asarray(targets, dtype=np.float64)
    if len(y) != len(indptr) - 1:
        raise InvalidValue("targets", "length must match the number of rows")
    if not (np.any(y > 0) and np.any(y < 0)):
        raise SingleSign()
    aug = _augment_bias(indptr, indices, data, dim)
    w, alpha, objectives, viol = dual_cd(
        aug[0], aug[1], aug[2], y, aug[3],
        float(params.C), float(params.tolerance), int(params.max_sweeps),
        int(params.seed),
    )
    return DualSolution(
        weights=w[:dim],
        bias=float(w[dim]),
        alpha=alpha,
        objectives=objectives,
        final_violation=float(viol),
    )


def train_binary(features, targets, params: SvcParams) -> tuple[np.ndarray, float]:
    """Train one hyperplane; returns (weights, bias)."""
    sol = solve_binary_dual(features, targets, params)
    return sol.weights, sol.bias


def train_ovr(features, label_indices, class_count: int,
              params: SvcParams, class_names=None) -> LinearSvcModel:
    """One-vs-rest: class_count binary problems over shared features."""
    if class_count < 2:
        raise InvalidValue("class_count", "need at least 2 classes")
    labels = np.asarray(label_indices, dtype=np.int64)
    if labels.size and (labels.min() < 0 or labels.max() >= class_count):
        raise InvalidValue("label_indices", f"indices outside [0, {class_count})")
    csr = as_csr(features)
    if len(labels) != len(csr[0]) - 1:
        raise InvalidValue("label_indices", "length must match feature rows")
    for c in range(class_count):
        if not np.any(labels == c):
            raise MissingClass(c)
    dim = csr[3]
    weight_matrix = np.zeros((class_count, dim))
    bias = np.zeros(class_count)
    for c in range(class_count):
        targets = np.where(labels == c, 1.0, -1.0)
        class_params = SvcParams(
            C=params.C, tolerance=params.tolerance,
            max_sweeps=params.max_sweeps, seed=params.seed + c,
        )
        w, b = train_binary(csr, targets, class_params)
        weight_matrix[c] = w
        bias[c] = b
    if class_names is None:
        class_names = tuple(str(c) for c in range(class_count))
    return LinearSvcModel(
        weight_matrix=weight_matrix, bias=bias,
        class_names=tuple(class_names), params=params,
    )


def decision_values(model: LinearSvcModel, features) -> np.ndarray:
    """(rows, classes) matrix of w_c . x + b_c."""
    indptr, indices, data, dim = as_csr(features)
    if dim != model.feature_dimension:
        raise DimensionMismatch(model.feature_dimension, dim)
    return csr_decision(indptr, indices, data, model.weight_matrix, model.bias)


def predict(model: LinearSvcModel, feature) -> int:
    """Argmax class index for one feature vector; ties pick the lowest index."""
    if isinstance(feature, SparseVector):
        features = [feature]
    else:
        features = np.asarray(feature, dtype=np.float64).reshape(1, -1)
    return int(predict_many(model, features)[0])


def predict_many(model: LinearSvcModel, features) -> np.ndarray:
    scores = decision_values(model, features)
    return np.argmax(scores, axis=1)
