"""Multiclass evaluation: confusion matrix, per-class P/R/F1, macro-F1.

Macro-F1 is the unweighted mean of per-class F1 over all classes,
including classes that never occur; any 0/0 ratio is scored as 0 and the
number of classes hit by that convention is reported.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IndexOutOfRange, LengthMismatch


@dataclass(frozen=True)
class EvalReport:
    confusion: np.ndarray          # (classes, classes), rows true, cols predicted
    per_class: np.ndarray          # (classes, 3): precision, recall, f1
    macro_f1: float
    accuracy: float
    zero_division_classes: int     # classes where some 0/0 was scored as 0

    @property
    def class_count(self) -> int:
        return self.confusion.shape[0]

    def as_kv(self) -> dict[str, float]:
        out: dict[str, float] = {
            "macro_f1": self.macro_f1,
            "accuracy": self.accuracy,
            "zero_division_classes": float(self.zero_division_classes),
        }
        for c in range(self.class_count):
            p, r, f1 = self.per_class[c]
            out[f"class_{c}_precision"] = float(p)
            out[f"class_{c}_recall"] = float(r)
            out[f"class_{c}_f1"] = float(f1)
        return out

    def format_table(self, class_names=None) -> str:
        names = list(class_names) if class_names else [
            str(c) for c in range(self.class_count)
        ]
        width = max(5, max(len(n) for n in names))
        lines = [f"{'class':<{width}}  {'prec':>7}  {'rec':>7}  {'f1':>7}"]
        for c, name in enumerate(names):
            p, r, f1 = self.per_class[c]
            lines.append(f"{name:<{width}}  {p:7.4f}  {r:7.4f}  {f1:7.4f}")
        lines.append(f"macro_f1  {self.macro_f1:.4f}")
        lines.append(f"accuracy  {self.accuracy:.4f}")
        return "\n".join(lines)

    def confusion_tsv(self, class_names=None) -> str:
        names = list(class_names) if class_names else [
            str(c) for c in range(self.class_count)
        ]
        lines = ["true\\pred\t" + "\t".join(names)]
        for c, name in enumerate(names):
            lines.append(name + "\t" + "\t".join(str(int(v)) for v in self.confusion[c]))
        return "\n".join(lines)


def _check_labels(true_labels, predicted_labels, class_count: int):
    t = np.asarray(true_labels, dtype=np.int64)
    p = np.asarray(predicted_labels, dtype=np.int64)
    if t.ndim != 1 or p.ndim != 1 or len(t) != len(p):
        raise LengthMismatch(
            f"label sequences must be 1-D and equal length, got {len(t)} and {len(p)}"
        )
    if len(t) == 0:
        raise LengthMismatch("label sequences must be non-empty")
    for arr in (t, p):
        if arr.min() < 0 or arr.max() >= class_count:
            bad = int(arr.min()) if arr.min() < 0 else int(arr.max())
            raise IndexOutOfRange(bad, class_count)
    return t, p


def confusion_matrix(true_labels, predicted_labels, class_count: int) -> np.ndarray:
    """Entry (i, j): number of examples with true class i predicted as j."""
    t, p = _check_labels(true_labels, predicted_labels, class_count)
    confusion = np.zeros((class_count, class_count), dtype=np.int64)
    np.add.at(confusion, (t, p), 1)
    return confusion


def evaluate(true_labels, predicted_labels, class_count: int) -> EvalReport:
    """Per-class precision/recall/F1, macro-F1 and accuracy."""
    confusion = confusion_matrix(true_labels, predicted_labels, class_count)
    diag = np.diag(confusion).astype(np.float64)
    col_sums = confusion.sum(axis=0).astype(np.float64)
    row_sums = confusion.sum(axis=1).astype(np.float64)
    per_class = np.zeros((class_count, 3))
    zero_division = 0
    for c in range(class_count):
        undefined = False
        if col_sums[c] > 0:
            precision = diag[c] / col_sums[c]
        else:
            precision, undefined = 0.0, True
        if row_sums[c] > 0:
            recall = diag[c] / row_sums[c]
        else:
            recall, undefined = 0.0, True
        if precision + recall > 0:
            f1 = 2.0 * precision * recall / (precision + recall)
        else:
            f1 = 0.0
        per_class[c] = (precision, recall, f1)
        if undefined:
            zero_division += 1
    total = confusion.sum()
    return EvalReport(
        confusion=confusion,
        per_class=per_class,
        macro_f1=float(per_class[:, 2].mean()),
        accuracy=float(np.trace(confusion) / total),
        zero_division_classes=zero_division,
    )
