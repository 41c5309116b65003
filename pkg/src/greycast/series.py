"""Core sequence types and transforms: accumulation, mean sequence, restoration.

Every grey model in this library fits on the accumulated (prefix-sum) view of
the raw sequence and forecasts by differencing the fitted accumulated response
back into original units.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientDataError, InvalidInputError


def _as_readonly_array(values) -> np.ndarray:
    arr = np.asarray(values, dtype=float).copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Series:
    """A finite, time-ordered sequence of real observations.

    ``interval`` is the sampling period in seconds. The constructor checks
    finiteness; non-negativity is a precondition of the grey fits and is
    checked there, so residual/benchmark series may carry negative values.
    """

    values: np.ndarray
    interval: float = 60.0
    label: str = ""

    def __post_init__(self):
        arr = _as_readonly_array(self.values)
        if arr.ndim != 1 or arr.size < 1:
            raise InvalidInputError("series must be a non-empty 1-d sequence")
        bad = np.flatnonzero(~np.isfinite(arr))
        if bad.size:
            raise InvalidInputError(f"non-finite value at index {bad[0]}")
        if not (self.interval > 0):
            raise InvalidInputError("sampling interval must be positive")
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return int(self.values.size)

    def head(self, n: int) -> "Series":
        return Series(self.values[:n], self.interval, self.label)


@dataclass(frozen=True)
class AccumulatedSeries:
    """Prefix sums of a source series (same length, left-to-right summation)."""

    values: np.ndarray
    origin: Series

    def __post_init__(self):
        object.__setattr__(self, "values", _as_readonly_array(self.values))

    def __len__(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class MeanSeries:
    """Adjacent-pair means of an accumulated series (length n-1, k = 2..n)."""

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _as_readonly_array(self.values))

    def __len__(self) -> int:
        return int(self.values.size)


def accumulate(series: Series) -> AccumulatedSeries:
    """Running prefix sums of ``series`` (summed left to right)."""
    return AccumulatedSeries(np.cumsum(series.values), series)


def mean_sequence(acc: AccumulatedSeries) -> MeanSeries:
    """Arithmetic means of adjacent accumulated values."""
    x1 = acc.values
    if x1.size < 2:
        raise InsufficientDataError("mean sequence needs at least 2 accumulated values")
    return MeanSeries((x1[:-1] + x1[1:]) / 2.0)


def restore(acc_forecast: float, acc_prev: float) -> float:
    """First-order difference of two accumulated forecasts."""
    if not (np.isfinite(acc_forecast) and np.isfinite(acc_prev)):
        raise InvalidInputError("restore requires finite accumulated values")
    return float(acc_forecast) - float(acc_prev)
