import numpy as np
import pytest

from dialectid.errors import IndexOutOfRange, LengthMismatch
from dialectid.metrics import confusion_matrix, evaluate
from oracles import oracle_evaluate


class TestConfusionMatrix:
    def test_direct_count(self):
        got = confusion_matrix([0, 0, 1], [0, 1, 1], 2)
        np.testing.assert_array_equal(got, [[1, 1], [0, 1]])

    def test_perfect_is_diagonal(self):
        got = confusion_matrix([0, 1, 2, 1], [0, 1, 2, 1], 3)
        np.testing.assert_array_equal(got, np.diag([1, 2, 1]))

    def test_empty_rejected(self):
        with pytest.raises(LengthMismatch):
            confusion_matrix([], [], 2)

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            confusion_matrix([0, 1], [0], 2)

    def test_index_out_of_range(self):
        with pytest.raises(IndexOutOfRange):
            confusion_matrix([0, 2], [0, 1], 2)

    def test_sum_equals_examples(self):
        rng = np.random.default_rng(0)
        t = rng.integers(0, 5, size=100)
        p = rng.integers(0, 5, size=100)
        assert confusion_matrix(t, p, 5).sum() == 100


class TestEvaluate:
    def test_hand_fixture_two_thirds(self):
        # true [A, A, B] / pred [A, B, B] with A=0, B=1
        report = evaluate([0, 0, 1], [0, 1, 1], 2)
        assert report.per_class[0, 2] == pytest.approx(2 / 3, abs=1e-15)
        assert report.per_class[1, 2] == pytest.approx(2 / 3, abs=1e-15)
        assert report.macro_f1 == pytest.approx(2 / 3, abs=1e-15)
        assert report.accuracy == pytest.approx(2 / 3, abs=1e-15)

    def test_perfect(self):
        report = evaluate([0, 1, 2], [0, 1, 2], 3)
        assert report.macro_f1 == 1.0
        assert report.accuracy == 1.0
        assert report.zero_division_classes == 0

    def test_absent_class_pulls_macro_down(self):
        report = evaluate([0, 0], [0, 0], 2)
        assert tuple(report.per_class[1]) == (0.0, 0.0, 0.0)
        assert report.macro_f1 == pytest.approx(0.5)
        assert report.zero_division_classes == 1

    def test_matches_oracle_fuzz(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            k = int(rng.integers(2, 19))
            n = int(rng.integers(1, 201))
            t = rng.integers(0, k, size=n)
            p = rng.integers(0, k, size=n)
            report = evaluate(t, p, k)
            per_class, macro, acc = oracle_evaluate(t.tolist(), p.tolist(), k)
            np.testing.assert_allclose(report.per_class,
                                       np.asarray(per_class), atol=1e-12)
            assert report.macro_f1 == pytest.approx(macro, abs=1e-12)
            assert report.accuracy == pytest.approx(acc, abs=1e-12)

    def test_label_permutation_equivariance(self):
        rng = np.random.default_rng(2)
        k = 6
        t = rng.integers(0, k, size=120)
        p = rng.integers(0, k, size=120)
        base = evaluate(t, p, k)
        perm = rng.permutation(k)
        permuted = evaluate(perm[t], perm[p], k)
        assert permuted.macro_f1 == pytest.approx(base.macro_f1, abs=1e-15)
        assert permuted.accuracy == pytest.approx(base.accuracy, abs=1e-15)
        np.testing.assert_allclose(permuted.per_class[perm], base.per_class,
                                   atol=1e-15)
        np.testing.assert_array_equal(
            permuted.confusion[np.ix_(perm, perm)], base.confusion
        )

    def test_accuracy_zero_iff_zero_diagonal(self):
        report = evaluate([0, 1], [1, 0], 2)
        assert report.accuracy == 0.0
        assert np.trace(report.confusion) == 0

    def test_report_formats(self):
        report = evaluate([0, 0, 1], [0, 1, 1], 2)
        table = report.format_table(["A", "B"])
        assert "macro_f1" in table and "A" in table
        kv = report.as_kv()
        assert kv["macro_f1"] == pytest.approx(2 / 3)
        tsv = report.confusion_tsv(["A", "B"])
        assert tsv.splitlines()[1] == "A\t1\t1"
