import numpy as np
import pytest

from dialectid.errors import DimensionMismatch, InvalidValue, MissingClass, SingleSign
from dialectid.svc import (
    LinearSvcModel,
    SvcParams,
    decision_values,
    predict,
    predict_many,
    solve_binary_dual,
    train_binary,
    train_ovr,
)
from dialectid.tfidf import SparseVector
from oracles import oracle_qp_solve, svm_dual_objective, svm_primal_objective

TIGHT = SvcParams(C=1.0, tolerance=1e-10, max_sweeps=5000, seed=0)


def sparse_rows(dense: np.ndarray) -> list[SparseVector]:
    rows = []
    for row in dense:
        idx = np.nonzero(row)[0].astype(np.int64)
        rows.append(SparseVector(dense.shape[1], idx, row[idx].astype(np.float64)))
    return rows


def random_instance(rng, n_max=20, d_max=5):
    n = int(rng.integers(4, n_max + 1))
    d = int(rng.integers(1, d_max + 1))
    X = rng.normal(size=(n, d))
    y = np.where(rng.random(n) < 0.5, 1.0, -1.0)
    y[0], y[1] = 1.0, -1.0  # both signs present
    return X, y


class TestBinary:
    def test_symmetric_separable_pair(self):
        X = np.array([[0.0, 1.0], [0.0, -1.0]])
        y = [1, -1]
        params = SvcParams(C=100.0, tolerance=1e-10, max_sweeps=2000, seed=1)
        w, b = train_binary(sparse_rows(X), y, params)
        margins = np.asarray(y) * (X @ w + b)
        assert np.all(margins >= 1.0 - 1e-6)
        assert np.sign(X @ w + b).tolist() == [1.0, -1.0]

    def test_single_sign_rejected(self):
        X = np.array([[1.0], [2.0]])
        with pytest.raises(SingleSign):
            train_binary(sparse_rows(X), [1, 1], TIGHT)

    def test_matches_qp_oracle(self):
        rng = np.random.default_rng(42)
        for trial in range(6):
            X, y = random_instance(rng)
            C = [0.1, 1.0, 10.0][trial % 3]
            params = SvcParams(C=C, tolerance=1e-10, max_sweeps=20000, seed=trial)
            sol = solve_binary_dual(sparse_rows(X), y, params)
            X_aug = np.hstack([X, np.ones((len(y), 1))])
            w_ref, _ = oracle_qp_solve(X_aug, y, C)
            got = np.append(sol.weights, sol.bias)
            assert np.linalg.norm(got - w_ref) <= 1e-4 * max(np.linalg.norm(w_ref), 1e-9)

    def test_objectives_nondecreasing(self):
        rng = np.random.default_rng(7)
        for trial in range(10):
            X, y = random_instance(rng)
            params = SvcParams(C=1.0, tolerance=1e-8, max_sweeps=500, seed=trial)
            sol = solve_binary_dual(sparse_rows(X), y, params)
            diffs = np.diff(sol.objectives)
            assert np.all(diffs >= 0.0)

    def test_dual_feasible_and_trace_consistent(self):
        rng = np.random.default_rng(8)
        X, y = random_instance(rng)
        params = SvcParams(C=2.5, tolerance=1e-10, max_sweeps=20000, seed=0)
        sol = solve_binary_dual(sparse_rows(X), y, params)
        assert np.all(sol.alpha >= 0.0)
        assert np.all(sol.alpha <= params.C)
        X_aug = np.hstack([X, np.ones((len(y), 1))])
        recomputed = svm_dual_objective(X_aug, np.asarray(y, float), sol.alpha)
        assert sol.objectives[-1] == pytest.approx(recomputed, rel=1e-9, abs=1e-9)

    def test_primal_dual_gap_small(self):
        rng = np.random.default_rng(9)
        for trial in range(5):
            X, y = random_instance(rng)
            params = SvcParams(C=1.0, tolerance=1e-10, max_sweeps=20000, seed=trial)
            sol = solve_binary_dual(sparse_rows(X), y, params)
            X_aug = np.hstack([X, np.ones((len(y), 1))])
            w_full = np.append(sol.weights, sol.bias)
            primal = svm_primal_objective(X_aug, np.asarray(y, float), w_full, params.C)
            dual = svm_dual_objective(X_aug, np.asarray(y, float), sol.alpha)
            assert primal - dual < 1e-3 * (1.0 + abs(dual))

    def test_deterministic(self):
        rng = np.random.default_rng(10)
        X, y = random_instance(rng)
        params = SvcParams(C=1.0, tolerance=1e-6, max_sweeps=200, seed=5)
        w1, b1 = train_binary(sparse_rows(X), y, params)
        w2, b2 = train_binary(sparse_rows(X), y, params)
        np.testing.assert_array_equal(w1, w2)
        assert b1 == b2

    def test_dense_input_accepted(self):
        X = np.array([[0.0, 2.0], [0.0, -2.0], [1.0, 1.5], [1.0, -1.5]])
        y = [1, -1, 1, -1]
        w, b = train_binary(X, y, TIGHT)
        assert np.all(np.sign(X @ w + b) == np.asarray(y))


def three_clusters(rng, per_class=30):
    centers = np.array([[0.0, 0.0], [10.0, 0.0], [0.0, 10.0]])
    X = np.vstack([
        centers[c] + rng.normal(scale=0.5, size=(per_class, 2))
        for c in range(3)
    ])
    labels = np.repeat(np.arange(3), per_class)
    return X, labels


class TestOvr:
    def test_three_clusters_perfect(self):
        rng = np.random.default_rng(0)
        X, labels = three_clusters(rng)
        model = train_ovr(X, labels, 3, SvcParams(C=10.0, tolerance=1e-6,
                                                  max_sweeps=500, seed=0))
        preds = predict_many(model, X)
        assert np.mean(preds == labels) == 1.0

    def test_two_class_reduces_to_binary_sign(self):
        rng = np.random.default_rng(1)
        X = np.vstack([rng.normal(size=(20, 3)) + 2, rng.normal(size=(20, 3)) - 2])
        labels = np.array([0] * 20 + [1] * 20)
        params = SvcParams(C=1.0, tolerance=1e-8, max_sweeps=1000, seed=3)
        model = train_ovr(X, labels, 2, params)
        preds = predict_many(model, X)
        binary_params = SvcParams(C=1.0, tolerance=1e-8, max_sweeps=1000,
                                  seed=params.seed + 0)
        w, b = train_binary(X, np.where(labels == 0, 1.0, -1.0), binary_params)
        sign_preds = np.where(X @ w + b > 0, 0, 1)
        # argmax over {f0, f1} agrees with the sign test wherever f0 != f1
        scores = decision_values(model, X)
        distinct = scores[:, 0] != scores[:, 1]
        assert np.array_equal(preds[distinct], sign_preds[distinct])

    def test_missing_class(self):
        X = np.eye(4)
        with pytest.raises(MissingClass) as err:
            train_ovr(X, [0, 0, 1, 1], 3, TIGHT)
        assert err.value.class_index == 2

    def test_deterministic_given_seed(self):
        rng = np.random.default_rng(2)
        X, labels = three_clusters(rng, per_class=10)
        params = SvcParams(C=1.0, tolerance=1e-6, max_sweeps=100, seed=9)
        m1 = train_ovr(X, labels, 3, params)
        m2 = train_ovr(X, labels, 3, params)
        np.testing.assert_array_equal(m1.weight_matrix, m2.weight_matrix)
        np.testing.assert_array_equal(m1.bias, m2.bias)


class TestPredict:
    def _model(self, weights, bias):
        return LinearSvcModel(
            weight_matrix=np.asarray(weights, dtype=np.float64),
            bias=np.asarray(bias, dtype=np.float64),
            class_names=tuple(str(i) for i in range(len(bias))),
            params=SvcParams(),
        )

    def test_argmax(self):
        model = self._model([[1.0], [2.0], [-1.0]], [0.0, 0.0, 0.0])
        # decision values (0.2, 0.9, -1) at x = [0.45]... use direct bias version
        model = self._model([[0.0], [0.0], [0.0]], [0.2, 0.9, -1.0])
        assert predict(model, np.array([0.0])) == 1

    def test_tie_breaks_low_index(self):
        model = self._model([[0.0], [0.0]], [0.5, 0.5])
        assert predict(model, np.array([1.0])) == 0

    def test_zero_vector_uses_biases(self):
        model = self._model([[3.0], [-3.0]], [-1.0, 1.0])
        vec = SparseVector(1, np.empty(0, dtype=np.int64), np.empty(0))
        assert predict(model, vec) == 1

    def test_positive_scaling_invariance(self):
        rng = np.random.default_rng(3)
        X, labels = three_clusters(rng, per_class=5)
        model = train_ovr(X, labels, 3, SvcParams(C=1.0, tolerance=1e-6,
                                                  max_sweeps=200, seed=1))
        scaled = LinearSvcModel(
            weight_matrix=model.weight_matrix * 2.0,
            bias=model.bias * 2.0,
            class_names=model.class_names,
            params=model.params,
        )
        np.testing.assert_array_equal(predict_many(model, X),
                                      predict_many(scaled, X))

    def test_dimension_mismatch(self):
        model = self._model([[1.0, 2.0]], [0.0])
        with pytest.raises(DimensionMismatch):
            decision_values(model, np.zeros((1, 3)))

    def test_bad_params_rejected(self):
        with pytest.raises(InvalidValue):
            SvcParams(C=-1.0)
        with pytest.raises(InvalidValue):
            SvcParams(tolerance=0.0)
        with pytest.raises(InvalidValue):
            SvcParams(max_sweeps=0)

    def test_paper_scale_c_accepted(self):
        assert SvcParams(C=100.0).C == 100.0
