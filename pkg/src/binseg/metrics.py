"""Overlap scores from confusion counts; +1 is the positive class."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, UndefinedMetricError
from .image_core import check_binary


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    tn: int
    fp: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn


def confusion(pred, truth) -> ConfusionCounts:
    pred = check_binary(pred, name="prediction")
    truth = check_binary(truth, name="ground truth")
    if pred.shape != truth.shape:
        raise DimensionMismatchError(f"mask shapes differ: {pred.shape} vs {truth.shape}")
    p, t = pred > 0, truth > 0
    return ConfusionCounts(
        tp=int(np.count_nonzero(p & t)),
        tn=int(np.count_nonzero(~p & ~t)),
        fp=int(np.count_nonzero(p & ~t)),
        fn=int(np.count_nonzero(~p & t)),
    )


def dice(c: ConfusionCounts) -> float:
    den = c.tp + c.fp + c.tp + c.fn
    if den == 0:
        raise UndefinedMetricError("dice undefined (no positives anywhere)")
    return 2 * c.tp / den


def js(c: ConfusionCounts) -> float:
    """tp / (tp + fp).

    This is the score reported under the name JS in the source method; note it
    equals precision, not the Jaccard index (see :func:`jaccard`).
    """
    den = c.tp + c.fp
    if den == 0:
        raise UndefinedMetricError("js undefined (no predicted positives)")
    return c.tp / den


def jaccard(c: ConfusionCounts) -> float:
    """Jaccard index tp / (tp + fp + fn), reported alongside ``js`` for comparison."""
    den = c.tp + c.fp + c.fn
    if den == 0:
        raise UndefinedMetricError("jaccard undefined (no positives anywhere)")
    return c.tp / den
