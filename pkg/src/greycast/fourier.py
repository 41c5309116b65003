"""Fourier-series modeling of forecast residuals.

A truncated Fourier series is least-squares fitted to the recent one-step
residuals of a base model and extrapolated one index past the buffer to
correct the next raw forecast ("EF" variants). With too few residuals the
series degrades gracefully to the residual mean.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import InvalidInputError
from .lstsq import LeastSquaresProblem, solve_least_squares


@dataclass(frozen=True)
class ResidualSeries:
    """Ordered residuals eps(k) = observed(k) - predicted(k).

    ``start_index`` is the time index of the first residual (2 when the
    residuals come from inside a fitted window, since the first in-window
    one-step forecast targets k = 2).
    """

    values: np.ndarray
    start_index: int = 2

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=float).copy()
        if arr.ndim != 1 or arr.size < 1:
            raise InvalidInputError("residual series must be non-empty and 1-d")
        if not np.isfinite(arr).all():
            raise InvalidInputError("residuals must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return int(self.values.size)

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.start_index, self.start_index + len(self), dtype=float)

    @property
    def next_index(self) -> int:
        return self.start_index + len(self)


def max_harmonics(count: int) -> int:
    """Largest harmonic count that keeps the fit (at least) exactly determined."""
    return max(0, (count - 1) // 2 - 1)


@dataclass(frozen=True)
class FourierResidualModel:
    """eps(k) ~ a0/2 + sum_i [a_i cos(2 pi i k / T) + b_i sin(2 pi i k / T)]."""

    a0: float
    harmonics: Tuple[Tuple[float, float], ...]  # (a_i, b_i), i = 1..F
    period: float  # base period T, in samples

    @property
    def harmonic_count(self) -> int:
        return len(self.harmonics)


def fit_residual_fourier(residuals: ResidualSeries,
                         harmonics: Optional[int] = None) -> FourierResidualModel:
    """Least-squares Fourier fit of a residual sequence.

    The base period is T = len - 1 (T = 1 for a single residual) and the
    harmonic count defaults to the largest value that keeps the regression
    determined; ``harmonics`` may lower (or raise, up to that cap) the count.
    With zero harmonics the model is the residual mean.
    """
    eps = residuals.values
    n = eps.size
    period = float(n - 1) if n >= 2 else 1.0
    cap = max_harmonics(n)
    count = cap if harmonics is None else int(harmonics)
    if count < 0 or count > cap:
        raise InvalidInputError(f"harmonic count {count} outside [0, {cap}]")
    if count == 0:
        return FourierResidualModel(a0=2.0 * float(eps.mean()), harmonics=(), period=period)
    k = residuals.indices
    cols = [np.full(n, 0.5)]
    for i in range(1, count + 1):
        arg = 2.0 * math.pi * i * k / period
        cols.append(np.cos(arg))
        cols.append(np.sin(arg))
    coef = solve_least_squares(LeastSquaresProblem(np.column_stack(cols), eps))
    pairs = tuple((float(coef[2 * i - 1]), float(coef[2 * i])) for i in range(1, count + 1))
    return FourierResidualModel(a0=float(coef[0]), harmonics=pairs, period=period)


def extrapolate_error(model: FourierResidualModel, k: int) -> float:
    """Evaluate the fitted residual series at time index k."""
    value = model.a0 / 2.0
    for i, (a_i, b_i) in enumerate(model.harmonics, start=1):
        arg = 2.0 * math.pi * i * k / model.period
        value += a_i * math.cos(arg) + b_i * math.sin(arg)
    return float(value)


def corrected_forecast(raw_forecast: float, model: FourierResidualModel, k: int) -> float:
    """Raw forecast plus the extrapolated expected error at index k."""
    if not math.isfinite(raw_forecast):
        raise InvalidInputError("raw forecast must be finite")
    return raw_forecast + extrapolate_error(model, k)


def fitted_errors(model: FourierResidualModel, residuals: ResidualSeries) -> np.ndarray:
    """In-sample evaluation of the fitted series at the residuals' own indices."""
    return np.array([extrapolate_error(model, k) for k in residuals.indices])
