"""Classification metric primitives shared by both training stages."""

from __future__ import annotations

import csv
import warnings

import numpy as np

from .errors import InvalidInputError, MetricError

__all__ = [
    "ConfusionMatrix",
    "accuracy",
    "f1_binary",
    "macro_f1",
    "mean_std",
    "write_csv",
]


class ConfusionMatrix:
    """M x M count matrix; rows are true classes, columns predictions."""

    def __init__(self, counts: np.ndarray):
        counts = np.asarray(counts)
        if counts.ndim != 2 or counts.shape[0] != counts.shape[1]:
            raise InvalidInputError(f"confusion matrix must be square, got {counts.shape}")
        if (counts < 0).any():
            raise InvalidInputError("confusion matrix counts must be non-negative")
        self.counts = counts.astype(np.int64)

    @classmethod
    def from_predictions(cls, y_true, y_pred, n_classes: int) -> "ConfusionMatrix":
        y_true = np.asarray(y_true, dtype=np.int64)
        y_pred = np.asarray(y_pred, dtype=np.int64)
        if y_true.shape != y_pred.shape:
            raise InvalidInputError("y_true and y_pred must have equal length")
        counts = np.zeros((n_classes, n_classes), dtype=np.int64)
        np.add.at(counts, (y_true, y_pred), 1)
        return cls(counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def n_classes(self) -> int:
        return self.counts.shape[0]

    def support(self) -> np.ndarray:
        return self.counts.sum(axis=1)


def accuracy(cm: ConfusionMatrix) -> float:
    if cm.total == 0:
        raise MetricError("accuracy undefined for an empty confusion matrix")
    return float(np.trace(cm.counts)) / cm.total


def f1_binary(tp: int, fp: int, fn: int) -> float:
    """F1 = 2TP / (2TP + FP + FN); zero when the class never occurs."""
    denom = 2 * tp + fp + fn
    if denom == 0:
        return 0.0
    return 2.0 * tp / denom


def macro_f1(cm: ConfusionMatrix) -> float:
    """Unweighted mean of per-class F1; zero-support classes count as 0."""
    if cm.total == 0:
        raise MetricError("macro F1 undefined for an empty confusion matrix")
    scores = []
    for c in range(cm.n_classes):
        tp = int(cm.counts[c, c])
        fp = int(cm.counts[:, c].sum() - tp)
        fn = int(cm.counts[c, :].sum() - tp)
        if tp + fn == 0:
            warnings.warn(f"class {c} has zero support; its F1 counts as 0", stacklevel=2)
        scores.append(f1_binary(tp, fp, fn))
    return float(np.mean(scores))


def mean_std(values) -> tuple[float, float]:
    """Mean and population standard deviation across folds/runs."""
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise MetricError("mean_std of an empty sequence")
    return float(values.mean()), float(values.std())


def write_csv(path, header: list[str], rows) -> None:
    """Write a CSV table with a header row; values are formatted with repr
    for floats so the output is byte-stable across runs."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
