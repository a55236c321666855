"""One-vs-rest confusion counts, macro metrics and t-based confidence intervals."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import stats


@dataclass(frozen=True)
class ConfusionCounts:
    classes: np.ndarray
    tp: np.ndarray
    fp: np.ndarray
    tn: np.ndarray
    fn: np.ndarray

    @property
    def total(self) -> int:
        return int(self.tp[0] + self.fp[0] + self.tn[0] + self.fn[0]) if len(self.classes) else 0

    @property
    def absent_classes(self) -> list:
        """Classes with no true samples; they contribute recall 0."""
        return [c for c, n in zip(self.classes.tolist(), self.tp + self.fn) if n == 0]


def confusion_counts(y_true, y_pred, classes: Sequence | None = None) -> ConfusionCounts:
    """Per-class TP/FP/TN/FN.

    ``classes`` defaults to the sorted union of both vectors. Predictions
    outside ``classes`` (e.g. abstentions) count as misses for the true class
    and as false positives for nobody.
    """
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.shape != y_pred.shape:
        raise ValueError(f"label vectors differ in length: {len(y_true)} vs {len(y_pred)}")
    if classes is None:
        classes = np.unique(np.concatenate([y_true, y_pred]))
    classes = np.asarray(classes)
    n = len(y_true)
    t = y_true[None, :] == classes[:, None]
    p = y_pred[None, :] == classes[:, None]
    tp = np.sum(t & p, axis=1)
    fp = np.sum(~t & p, axis=1)
    fn = np.sum(t & ~p, axis=1)
    tn = n - tp - fp - fn
    return ConfusionCounts(classes, tp, fp, tn, fn)


def accuracy(counts_or_true, y_pred=None) -> float:
    """Overall match rate, from counts or from two label vectors."""
    if isinstance(counts_or_true, ConfusionCounts):
        c = counts_or_true
        return float(c.tp.sum() / c.total) if c.total else 0.0
    y_true = np.asarray(counts_or_true)
    y_pred = np.asarray(y_pred)
    if y_true.shape != y_pred.shape:
        raise ValueError("label vectors differ in length")
    return float(np.mean(y_true == y_pred)) if len(y_true) else 0.0


def _ratio(num, den):
    num = np.asarray(num, dtype=np.float64)
    den = np.asarray(den, dtype=np.float64)
    return np.divide(num, den, out=np.zeros_like(num), where=den > 0)


def per_class_recall(c: ConfusionCounts) -> np.ndarray:
    return _ratio(c.tp, c.tp + c.fn)


def per_class_precision(c: ConfusionCounts) -> np.ndarray:
    return _ratio(c.tp, c.tp + c.fp)


def per_class_fscore(c: ConfusionCounts) -> np.ndarray:
    p, r = per_class_precision(c), per_class_recall(c)
    return _ratio(2 * p * r, p + r)


def macro_recall(c: ConfusionCounts) -> float:
    return float(per_class_recall(c).mean()) if len(c.classes) else 0.0


def macro_precision(c: ConfusionCounts) -> float:
    return float(per_class_precision(c).mean()) if len(c.classes) else 0.0


def macro_fscore(c: ConfusionCounts) -> float:
    return float(per_class_fscore(c).mean()) if len(c.classes) else 0.0


def confidence_interval(values: Sequence[float], level: float = 0.90) -> tuple[float, float]:
    """Student-t interval mean +/- t_{(1+level)/2, n-1} * s / sqrt(n); not clipped."""
    v = np.asarray(values, dtype=np.float64)
    if v.size < 2:
        raise ValueError("a confidence interval needs at least 2 values")
    mean = float(v.mean())
    half = float(stats.t.ppf((1 + level) / 2, v.size - 1) * v.std(ddof=1) / np.sqrt(v.size))
    return mean - half, mean + half


def score_all(y_true, y_pred, classes=None) -> dict[str, float]:
    c = confusion_counts(y_true, y_pred, classes)
    return {
        "accuracy": accuracy(c),
        "recall": macro_recall(c),
        "precision": macro_precision(c),
        "fscore": macro_fscore(c),
    }
