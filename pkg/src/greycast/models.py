"""The six grey forecasting models: GM(1,1), GVM and four trigonometric variants.

Each model is fit on a short rolling window (w >= 4) by least squares on the
grey "basic form" x0(k) + a*z1(k) = rhs(k), then forecast through the closed
solution of the matching whitenization ODE dx1/dt + a*x1 = rhs(t) with initial
condition x1(1) = x0(1). Forecasts in original units are first differences of
that accumulated response. The trigonometric closed forms are derived directly
from the ODEs and validated against high-order numerical integration in the
tests; differencing the accumulated solution is the normative route for every
variant (single-line difference shortcuts are easy to get wrong — they tend to
mix integration constants or drop factors of ``a`` in exponents).

Time is the within-window index: each window restarts at k = 1..w, and the
trigonometric regressors use sin(omega*k)/cos(omega*k) at those local indices.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    InsufficientDataError,
    InvalidInputError,
    NumericalDegeneracyError,
)
from .lstsq import LeastSquaresProblem, solve_least_squares
from .series import Series, accumulate, mean_sequence

# Below this magnitude the development coefficient is treated as exactly zero
# and the a->0 limit of each closed form is used (b/a pole otherwise).
DEGENERATE_A = 1e-12

# Denominator guard for the Verhulst product form.
GVM_DENOM_FLOOR = 1e-12


class ModelKind(enum.Enum):
    GM11 = "GM11"
    GVM = "GVM"
    GM_S = "GM_S"
    GM_C = "GM_C"
    GM_SC = "GM_SC"
    GM_ESC = "GM_ESC"


TRIG_KINDS = (ModelKind.GM_S, ModelKind.GM_C, ModelKind.GM_SC, ModelKind.GM_ESC)

#: Grid-searched default angular frequencies (radians per time step).
DEFAULT_OMEGA = {
    ModelKind.GM_S: 4.30,
    ModelKind.GM_C: 2.65,
    ModelKind.GM_SC: 9.30,
    ModelKind.GM_ESC: 74.10,
}

#: Display names and their error-corrected counterparts.
SHORT_NAME = {
    ModelKind.GM11: "GM(1,1)",
    ModelKind.GVM: "GVM",
    ModelKind.GM_S: "GM_S",
    ModelKind.GM_C: "GM_C",
    ModelKind.GM_SC: "GM_SC",
    ModelKind.GM_ESC: "GM_ESC",
}
EF_NAME = {
    ModelKind.GM11: "EFGM",
    ModelKind.GVM: "EFGVM",
    ModelKind.GM_S: "EFGM_S",
    ModelKind.GM_C: "EFGM_C",
    ModelKind.GM_SC: "EFGM_SC",
    ModelKind.GM_ESC: "EFGM_ESC",
}

#: Minimum window length per kind (parameter count + 1 equations needed,
#: except GM_SC whose four columns need at least four equations -> w >= 5).
MIN_WINDOW = {
    ModelKind.GM11: 4,
    ModelKind.GVM: 4,
    ModelKind.GM_S: 4,
    ModelKind.GM_C: 4,
    ModelKind.GM_SC: 5,
    ModelKind.GM_ESC: 4,
}


@dataclass(frozen=True)
class GreyFit:
    """Estimated parameters of one grey model on one window.

    Unused coefficient slots are ``None`` rather than zero so that a missing
    parameter can never silently enter a forecast.
    """

    kind: ModelKind
    a: float
    b: Optional[float] = None  # GM11 / GVM grey input
    b1: Optional[float] = None
    b2: Optional[float] = None
    b3: Optional[float] = None
    omega: Optional[float] = None
    x0_1: float = 0.0  # first window observation = initial condition x1(1)
    K: Optional[float] = None  # integration constant (GM_C / GM_SC / GM_ESC)
    window_len: int = 4


def _window_values(window) -> np.ndarray:
    values = window.values if isinstance(window, Series) else np.asarray(window, float)
    if values.size < 4:
        raise InsufficientDataError(f"window of {values.size} < 4 observations")
    if not np.isfinite(values).all():
        raise InvalidInputError("window contains non-finite values")
    if (values < 0).any():
        idx = int(np.flatnonzero(values < 0)[0])
        raise InvalidInputError(f"negative value at window index {idx}")
    return values


def _grey_design(values: np.ndarray):
    """Mean sequence z1 and targets x0(2..w) for the basic-form regression."""
    acc = accumulate(Series(values, label="window"))
    z = mean_sequence(acc).values
    return z, values[1:]


def fit_gm11(window) -> GreyFit:
    """Least-squares fit of x0(k) + a*z1(k) = b."""
    values = _window_values(window)
    z, y = _grey_design(values)
    design = np.column_stack([-z, np.ones_like(z)])
    a, b = solve_least_squares(LeastSquaresProblem(design, y))
    return GreyFit(ModelKind.GM11, a=float(a), b=float(b), x0_1=float(values[0]),
                   window_len=int(values.size))


def forecast_gm11(fit: GreyFit, k: int) -> float:
    """One-step forecast x0hat(k+1) = (1 - e^a)(x0(1) - b/a) e^(-a k)."""
    a, b = fit.a, fit.b
    if abs(a) <= DEGENERATE_A:
        return float(b)
    return float((1.0 - math.exp(a)) * (fit.x0_1 - b / a) * math.exp(-a * k))


def fit_gvm(window) -> GreyFit:
    """Verhulst fit: x0(k) + a*z1(k) = b*z1(k)^2, values strictly positive."""
    values = _window_values(window)
    if (values <= 0).any():
        idx = int(np.flatnonzero(values <= 0)[0])
        raise InvalidInputError(f"Verhulst fit needs strictly positive values "
                                f"(index {idx})")
    z, y = _grey_design(values)
    design = np.column_stack([-z, z * z])
    a, b = solve_least_squares(LeastSquaresProblem(design, y))
    return GreyFit(ModelKind.GVM, a=float(a), b=float(b), x0_1=float(values[0]),
                   window_len=int(values.size))


def forecast_gvm(fit: GreyFit, k: int) -> float:
    """Verhulst forecast in its classic product form.

    The two denominators b*x0(1) + (a - b*x0(1))*e^(a(k-1)) and the (k-2)
    sibling must stay away from zero.
    """
    a, b, x1 = fit.a, fit.b, fit.x0_1
    bx = b * x1
    d1 = bx + (a - bx) * math.exp(a * (k - 1))
    d2 = bx + (a - bx) * math.exp(a * (k - 2))
    if abs(d1) <= GVM_DENOM_FLOOR:
        raise NumericalDegeneracyError("Verhulst forecast: e^(a(k-1)) denominator vanished")
    if abs(d2) <= GVM_DENOM_FLOOR:
        raise NumericalDegeneracyError("Verhulst forecast: e^(a(k-2)) denominator vanished")
    first = a * x1 * (a - bx) / d1
    second = (1.0 - math.exp(a)) * math.exp(a * (k - 2)) / d2
    return float(first * second)


def _particular(fit: GreyFit, t: float) -> float:
    """Particular solution of the whitenization ODE at continuous time t."""
    a, w = fit.a, fit.omega
    s, c = math.sin(w * t), math.cos(w * t)
    norm = a * a + w * w
    if fit.kind is ModelKind.GM_S:
        return fit.b1 * (a * s - w * c) / norm + fit.b2 / a
    if fit.kind is ModelKind.GM_C:
        return fit.b1 * (a * c + w * s) / norm + fit.b2 / a
    if fit.kind is ModelKind.GM_SC:
        return ((a * fit.b2 - fit.b1 * w) * c + (a * fit.b1 + fit.b2 * w) * s) / norm \
            + fit.b3 / a
    if fit.kind is ModelKind.GM_ESC:
        return math.exp(-a * t) * (fit.b2 * s - fit.b1 * c) / w + fit.b3 / a
    raise InvalidInputError(f"no trigonometric particular solution for {fit.kind}")


def _accumulated_degenerate(fit: GreyFit, t: float) -> float:
    """a -> 0 limit: integrate the forcing directly from t=1."""
    w = fit.omega
    if fit.kind is ModelKind.GM11:
        return fit.x0_1 + fit.b * (t - 1.0)
    if fit.kind is ModelKind.GM_S:
        drift, b1, b2 = fit.b2, fit.b1, 0.0
    elif fit.kind is ModelKind.GM_C:
        drift, b1, b2 = fit.b2, 0.0, fit.b1
    else:  # GM_SC, and GM_ESC whose e^(-a t) factor is 1 at a = 0
        drift, b1, b2 = fit.b3, fit.b1, fit.b2
    trig = (b1 * (math.cos(w) - math.cos(w * t))
            + b2 * (math.sin(w * t) - math.sin(w))) / w
    return fit.x0_1 + drift * (t - 1.0) + trig


def accumulated_response(fit: GreyFit, t: float) -> float:
    """Closed-form accumulated response x1hat(t), with x1hat(1) = x0(1)."""
    if abs(fit.a) <= DEGENERATE_A:
        return float(_accumulated_degenerate(fit, t))
    if fit.kind is ModelKind.GM11:
        ba = fit.b / fit.a
        return float((fit.x0_1 - ba) * math.exp(-fit.a * (t - 1.0)) + ba)
    p1 = _particular(fit, 1.0)
    return float((fit.x0_1 - p1) * math.exp(-fit.a * (t - 1.0)) + _particular(fit, t))


def forecast_trig(fit: GreyFit, k: int) -> float:
    """x0hat(k+1) by differencing the accumulated closed-form response."""
    if fit.kind not in TRIG_KINDS:
        raise InvalidInputError(f"forecast_trig expects a trigonometric fit, got {fit.kind}")
    return accumulated_response(fit, k + 1.0) - accumulated_response(fit, k)


def _integration_constant(fit: GreyFit) -> Optional[float]:
    """K = e^a (x0(1) - particular(1)), i.e. x1(t) = K e^(-a t) + particular(t).

    Undefined (None) for a degenerate development coefficient, where the
    homogeneous/particular split has a b/a pole.
    """
    if abs(fit.a) <= DEGENERATE_A:
        return None
    try:
        return math.exp(fit.a) * (fit.x0_1 - _particular(fit, 1.0))
    except OverflowError:
        return None


def fit_trig(window, kind: ModelKind, omega: float) -> GreyFit:
    """Fit GM_S / GM_C / GM_SC by one joint least-squares regression."""
    if kind not in (ModelKind.GM_S, ModelKind.GM_C, ModelKind.GM_SC):
        raise InvalidInputError(f"fit_trig does not handle {kind}")
    if not (omega > 0):
        raise InvalidInputError("omega must be positive")
    values = _window_values(window)
    if values.size < MIN_WINDOW[kind]:
        raise InsufficientDataError(
            f"{kind.value} needs a window of at least {MIN_WINDOW[kind]}")
    z, y = _grey_design(values)
    k = np.arange(2, values.size + 1, dtype=float)
    ones = np.ones_like(z)
    if kind is ModelKind.GM_S:
        design = np.column_stack([-z, np.sin(omega * k), ones])
    elif kind is ModelKind.GM_C:
        design = np.column_stack([-z, np.cos(omega * k), ones])
    else:
        design = np.column_stack([-z, np.sin(omega * k), np.cos(omega * k), ones])
    params = solve_least_squares(LeastSquaresProblem(design, y))
    if kind is ModelKind.GM_SC:
        a, b1, b2, b3 = (float(v) for v in params)
        fit = GreyFit(kind, a=a, b1=b1, b2=b2, b3=b3, omega=float(omega),
                      x0_1=float(values[0]), window_len=int(values.size))
    else:
        a, b1, b2 = (float(v) for v in params)
        fit = GreyFit(kind, a=a, b1=b1, b2=b2, omega=float(omega),
                      x0_1=float(values[0]), window_len=int(values.size))
    if kind in (ModelKind.GM_C, ModelKind.GM_SC):
        fit = GreyFit(**{**fit.__dict__, "K": _integration_constant(fit)})
    return fit


def fit_esc(window, omega: float) -> GreyFit:
    """Two-stage fit of the exponentially damped sine/cosine model.

    Stage 1 estimates (a, b3) with the plain GM(1,1) design; stage 2 regresses
    the stage-1 residuals on e^(-k a) sin(omega k) and e^(-k a) cos(omega k).
    """
    if not (omega > 0):
        raise InvalidInputError("omega must be positive")
    values = _window_values(window)
    z, y = _grey_design(values)
    stage1 = np.column_stack([-z, np.ones_like(z)])
    a, b3 = (float(v) for v in solve_least_squares(LeastSquaresProblem(stage1, y)))
    residuals = y + a * z - b3
    k = np.arange(2, values.size + 1, dtype=float)
    damp = np.exp(-a * k)
    if not np.isfinite(damp).all() or float(np.abs(damp).max()) < 1e-250:
        raise NumericalDegeneracyError(
            "stage-2 design degenerate: e^(-k a) underflowed or overflowed")
    stage2 = np.column_stack([damp * np.sin(omega * k), damp * np.cos(omega * k)])
    b1, b2 = (float(v) for v in solve_least_squares(LeastSquaresProblem(stage2, residuals)))
    fit = GreyFit(ModelKind.GM_ESC, a=a, b1=b1, b2=b2, b3=b3, omega=float(omega),
                  x0_1=float(values[0]), window_len=int(values.size))
    return GreyFit(**{**fit.__dict__, "K": _integration_constant(fit)})


def fit_model(kind: ModelKind, window, omega: Optional[float] = None) -> GreyFit:
    """Dispatch fitting by model kind (omega defaults to the calibrated table)."""
    if kind is ModelKind.GM11:
        return fit_gm11(window)
    if kind is ModelKind.GVM:
        return fit_gvm(window)
    w = DEFAULT_OMEGA[kind] if omega is None else float(omega)
    if kind is ModelKind.GM_ESC:
        return fit_esc(window, w)
    return fit_trig(window, kind, w)


def forecast(fit: GreyFit, steps_ahead: int = 1) -> float:
    """Forecast ``steps_ahead`` past the fitted window, without refitting.

    The within-window clock runs k = 1..w, so the first out-of-window value
    lives at local index w + 1.
    """
    if steps_ahead < 1:
        raise InvalidInputError("steps_ahead must be >= 1")
    k = fit.window_len + steps_ahead - 1
    try:
        if fit.kind is ModelKind.GM11:
            return forecast_gm11(fit, k)
        if fit.kind is ModelKind.GVM:
            # The product form is indexed one step early relative to the other
            # models; k+1 pairs its leading denominator with the latest
            # accumulated value.
            return forecast_gvm(fit, k + 1)
        return forecast_trig(fit, k)
    except OverflowError as exc:
        raise NumericalDegeneracyError(
            f"{fit.kind.value} closed form overflowed (a={fit.a:.3g})") from exc


def fitted_values(fit: GreyFit) -> np.ndarray:
    """In-window one-step fitted values for local indices k = 2..w."""
    out = np.empty(fit.window_len - 1)
    for i, k in enumerate(range(2, fit.window_len + 1)):
        if fit.kind is ModelKind.GM11:
            out[i] = forecast_gm11(fit, k - 1)
        elif fit.kind is ModelKind.GVM:
            out[i] = forecast_gvm(fit, k)
        else:
            out[i] = forecast_trig(fit, k - 1)
    return out
