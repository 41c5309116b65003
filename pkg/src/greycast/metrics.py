"""Accuracy metrics: RMSE, MAPE (with zero-observation guard), percent improvement."""
from __future__ import annotations

import math
from typing import NamedTuple, Sequence

import numpy as np

from .errors import InvalidInputError

# Observations smaller than this are excluded from MAPE instead of dividing.
MAPE_ZERO_GUARD = 1e-9


def _paired(predicted, observed):
    p = np.asarray(predicted, dtype=float)
    o = np.asarray(observed, dtype=float)
    if p.shape != o.shape or p.ndim != 1 or p.size < 1:
        raise InvalidInputError("predicted and observed must be equal-length 1-d")
    if not (np.isfinite(p).all() and np.isfinite(o).all()):
        raise InvalidInputError("metric inputs must be finite")
    return p, o


def rmse(predicted: Sequence[float], observed: Sequence[float]) -> float:
    """Root mean squared error."""
    p, o = _paired(predicted, observed)
    err = p - o
    return float(math.sqrt(np.mean(err * err)))


class MapeResult(NamedTuple):
    value: float  # percent
    excluded: int  # pairs skipped because |observed| was below the zero guard


def mape(predicted: Sequence[float], observed: Sequence[float]) -> MapeResult:
    """Mean absolute percentage error, in percent.

    Pairs whose observed value is (numerically) zero are excluded and counted
    rather than dividing by zero. All pairs excluded yields a 0% MAPE with a
    full exclusion count.
    """
    p, o = _paired(predicted, observed)
    keep = np.abs(o) >= MAPE_ZERO_GUARD
    excluded = int(np.size(keep) - np.count_nonzero(keep))
    if not keep.any():
        return MapeResult(0.0, excluded)
    value = float(np.mean(np.abs((p[keep] - o[keep]) / o[keep])) * 100.0)
    return MapeResult(value, excluded)


def improvement(reference: float, candidate: float) -> float:
    """Percent improvement of ``candidate`` over ``reference``."""
    if not (reference > 0):
        raise InvalidInputError("reference must be positive")
    return (reference - candidate) / reference * 100.0
