"""Online rolling-window forecasting and one-time frequency calibration.

At every step the configured model is refit on the most recent ``window``
observations and emits a one-step forecast; error-corrected ("EF") variants
additionally extrapolate a Fourier model of recent residuals, fitted strictly
on residuals observed before the step (no lookahead). Fit failures never abort
a roll: the step falls back to persistence (last observation) and is flagged.
"""
from __future__ import annotations

import math
import time
from collections import deque
from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

import numpy as np

from . import benchmarks
from .errors import (
    CalibrationFailedError,
    GreycastError,
    InsufficientDataError,
    InvalidInputError,
)
from .fourier import ResidualSeries, corrected_forecast, fit_residual_fourier
from .models import EF_NAME, MIN_WINDOW, ModelKind, fit_model, fitted_values, forecast
from .series import Series

BENCHMARK_NAMES = ("LINEAR", "ARIMA", "SARIMA", "SETAR")

GREY_MODEL_NAMES = ("GM11", "EFGM", "GVM", "EFGVM", "GM_S", "EFGM_S",
                    "GM_C", "EFGM_C", "GM_SC", "EFGM_SC", "GM_ESC", "EFGM_ESC")

ALL_MODEL_NAMES = GREY_MODEL_NAMES + BENCHMARK_NAMES

_EF_TO_BASE = {ef: kind for kind, ef in EF_NAME.items()}


def parse_model(name: str) -> Tuple[Optional[ModelKind], bool, Optional[str]]:
    """Resolve a model identifier to (grey kind, error-corrected?, benchmark)."""
    ident = name.strip()
    upper = ident.upper()
    if upper in BENCHMARK_NAMES:
        return None, False, upper
    if ident in ("GM(1,1)", "GM(1, 1)"):
        return ModelKind.GM11, False, None
    if ident in _EF_TO_BASE:
        return _EF_TO_BASE[ident], True, None
    try:
        return ModelKind(ident), False, None
    except ValueError:
        raise InvalidInputError(f"unknown model '{name}'") from None


@dataclass(frozen=True)
class RollingConfig:
    """Knobs of one rolling pipeline."""

    model: str = "GM11"
    window: int = 4
    omega: Optional[float] = None
    ef_residual_window: int = 24
    ef_in_window: bool = False  # fit the Fourier correction on in-window residuals
    ef_harmonics: Optional[int] = None  # cap on Fourier harmonics (None = auto)
    clamp_nonnegative: bool = False
    benchmark_spec: object = None  # LinearSpec / ArimaSpec / SetarSpec override
    standard_psi: bool = False
    multi_step: int = 1  # forecast horizon, without refitting

    def __post_init__(self):
        if self.window < 4:
            raise InvalidInputError("window must be at least 4")
        if self.ef_residual_window < 3:
            raise InvalidInputError("EF residual window must be at least 3")
        if self.ef_harmonics is not None and self.ef_harmonics < 0:
            raise InvalidInputError("EF harmonic cap must be >= 0")
        if self.multi_step < 1:
            raise InvalidInputError("multi_step must be >= 1")
        parse_model(self.model)

    def effective_window(self) -> int:
        kind, _, bench = parse_model(self.model)
        if bench is not None:
            return self.window
        # GM_SC has four parameters; a 4-point window gives only 3 equations.
        return max(self.window, MIN_WINDOW[kind])


@dataclass(frozen=True)
class ForecastTrace:
    """Per-step record of one rolling run over one series."""

    model: str
    predictions: Tuple[Tuple[int, float, float], ...]  # (index, predicted, observed)
    residuals: ResidualSeries
    per_step_time: Tuple[float, ...]
    fallbacks: Tuple[bool, ...]
    errors: Tuple[Tuple[int, str], ...]

    def predicted(self) -> np.ndarray:
        return np.array([p for _, p, _ in self.predictions])

    def observed(self) -> np.ndarray:
        return np.array([o for _, _, o in self.predictions])

    @property
    def fallback_count(self) -> int:
        return sum(self.fallbacks)


def _harmonic_cap(config: RollingConfig, residual_count: int) -> Optional[int]:
    if config.ef_harmonics is None:
        return None
    from .fourier import max_harmonics

    return min(config.ef_harmonics, max_harmonics(residual_count))


def _default_benchmark_spec(name: str):
    from .config import load_config

    cfg = load_config()
    return {"LINEAR": cfg.linear, "ARIMA": cfg.arima,
            "SARIMA": cfg.sarima, "SETAR": cfg.setar}[name]


def _benchmark_forecast(name: str, spec, history: np.ndarray, standard: bool) -> float:
    if name == "LINEAR":
        return benchmarks.forecast_linear(spec, history)
    if name == "SETAR":
        return benchmarks.forecast_setar(spec, history)
    return benchmarks.forecast_arima(spec, history, standard=standard)


def roll_forecast(series: Series, config: RollingConfig) -> ForecastTrace:
    """Roll the configured model over ``series``, one-step-ahead.

    Predictions target 1-based indices w+1 .. n. The returned residuals are
    observed minus emitted prediction; EF variants internally buffer the base
    model's residuals for the Fourier correction.
    """
    values = series.values
    w = config.effective_window()
    n = values.size
    if n < w + 1:
        raise InsufficientDataError(f"series of {n} < window {w} + 1")
    kind, ef, bench = parse_model(config.model)
    spec = config.benchmark_spec
    if bench is not None and spec is None:
        spec = _default_benchmark_spec(bench)

    buffer: deque = deque(maxlen=config.ef_residual_window)  # (index, residual)
    predictions: List[Tuple[int, float, float]] = []
    residuals: List[float] = []
    step_times: List[float] = []
    fallbacks: List[bool] = []
    errors: List[Tuple[int, str]] = []

    for target in range(w + 1, n + 1):  # 1-based index being predicted
        t0 = time.perf_counter()
        flagged = False
        raw = math.nan
        try:
            if bench is not None:
                raw = _benchmark_forecast(bench, spec, values[:target - 1],
                                          config.standard_psi)
            else:
                fit = fit_model(kind, values[target - 1 - w:target - 1], config.omega)
                raw = forecast(fit, steps_ahead=config.multi_step)
            if not math.isfinite(raw):
                raise InvalidInputError("non-finite forecast")
            pred = raw
            if ef:
                if config.ef_in_window:
                    fitted = fitted_values(fit)  # targets local k = 2..w
                    res = ResidualSeries(values[target - w:target - 1] - fitted,
                                         start_index=2)
                    model = fit_residual_fourier(res, _harmonic_cap(config, len(res)))
                    pred = corrected_forecast(raw, model, res.next_index)
                elif buffer:
                    res = ResidualSeries(np.array([r for _, r in buffer]),
                                         start_index=buffer[0][0])
                    model = fit_residual_fourier(res, _harmonic_cap(config, len(res)))
                    # Correct at the next integer after the latest residual.
                    pred = corrected_forecast(raw, model, buffer[-1][0] + 1)
        except GreycastError as exc:
            pred = float(values[target - 2])  # persistence fallback
            flagged = True
            errors.append((target, str(exc)))
        if config.clamp_nonnegative and pred < 0.0:
            pred = 0.0
        observed = float(values[target - 1])
        predictions.append((target, float(pred), observed))
        residuals.append(observed - float(pred))
        fallbacks.append(flagged)
        if ef and not config.ef_in_window and not flagged:
            buffer.append((target, observed - raw))
        step_times.append(time.perf_counter() - t0)

    return ForecastTrace(
        model=config.model,
        predictions=tuple(predictions),
        residuals=ResidualSeries(np.array(residuals), start_index=w + 1),
        per_step_time=tuple(step_times),
        fallbacks=tuple(fallbacks),
        errors=tuple(errors),
    )


@dataclass(frozen=True)
class OmegaGrid:
    """Inclusive arithmetic grid of candidate angular frequencies."""

    lo: float = 0.05
    hi: float = 100.0
    step: float = 0.05

    def __post_init__(self):
        if not (self.lo > 0 and self.hi >= self.lo and self.step > 0):
            raise InvalidInputError("grid needs 0 < lo <= hi and step > 0")

    def candidates(self) -> np.ndarray:
        count = int(math.floor((self.hi - self.lo) / self.step + 1e-9)) + 1
        return self.lo + self.step * np.arange(count)


def calibrate_omega(series: Series, kind: ModelKind, grid: OmegaGrid,
                    config: Optional[RollingConfig] = None) -> float:
    """Grid-search the frequency minimizing rolling one-step RMSE.

    Calibration runs once on one series and the winner is reused elsewhere.
    Ties break toward the smallest candidate.
    """
    if kind not in (ModelKind.GM_S, ModelKind.GM_C, ModelKind.GM_SC, ModelKind.GM_ESC):
        raise InvalidInputError(f"{kind} has no frequency to calibrate")
    base = config if config is not None else RollingConfig(model=kind.value)
    best_omega, best_rmse = None, math.inf
    for omega in grid.candidates():
        cfg = replace(base, model=kind.value, omega=float(omega))
        try:
            trace = roll_forecast(series, cfg)
        except GreycastError:
            continue
        if all(trace.fallbacks):
            continue
        err = trace.predicted() - trace.observed()
        with np.errstate(over="ignore"):
            rmse = float(np.sqrt(np.mean(err * err)))
        if rmse < best_rmse:
            best_omega, best_rmse = float(omega), rmse
    if best_omega is None:
        raise CalibrationFailedError("no grid frequency produced a usable fit")
    return best_omega
