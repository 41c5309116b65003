"""End-to-end acceptance gate.

Each test covers one shipping criterion at its stated tolerance and runtime
budget and prints a single PASS line on success.
"""
import math
import time

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from greycast import Series
from greycast.config import load_config
from greycast.data import Dataset, generate_synthetic
from greycast.errors import GreycastError
from greycast.fourier import (
    ResidualSeries,
    extrapolate_error,
    fit_residual_fourier,
    fitted_errors,
    max_harmonics,
)
from greycast.metrics import improvement, rmse
from greycast.models import (
    GreyFit,
    ModelKind,
    accumulated_response,
    fit_gm11,
    fit_model,
    forecast,
    forecast_gm11,
    forecast_trig,
)
from greycast.report import compare
from greycast.rolling import (
    GREY_MODEL_NAMES,
    OmegaGrid,
    RollingConfig,
    calibrate_omega,
    roll_forecast,
)
from conftest import basic_form_series

OMEGA_TABLE = (2.65, 4.30, 9.30, 74.10)

# Per-column (reference EFGVM, candidate GM_C) metric-pair fixtures and the
# rounded percent-improvement row they produce, RMSE and MAPE interleaved
# across the nine dataset columns.
IMPROVEMENT_FIXTURE = [
    # (reference, candidate, expected rounded % improvement)
    (1.60, 0.65, 59), (2.33, 0.71, 69),
    (2.65, 1.35, 49), (5.46, 2.47, 55),
    (0.07, 0.04, 42), (5.35, 2.59, 52),
    (1.45, 0.57, 61), (2.26, 0.41, 82),
    (0.06, 0.03, 51), (2.18, 0.40, 82),
    (1.41, 0.49, 65), (2.40, 0.79, 67),
    (1.56, 0.58, 63), (2.61, 0.86, 67),
    (68.48, 33.81, 51), (4.41, 2.18, 51),
    (0.65, 0.34, 48), (5.16, 2.54, 51),
]


def test_criterion_1_improvement_row_fixture():
    start = time.perf_counter()
    for reference, candidate, expected in IMPROVEMENT_FIXTURE:
        value = improvement(reference, candidate)
        assert abs(value - expected) <= 1.0, (reference, candidate, value)
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    print(f"PASS criterion 1: 18/18 improvement cells within 1pp ({elapsed:.3f}s)")


def test_criterion_2_gm11_consistency():
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    checked = 0
    while checked < 1000:
        a = float(rng.uniform(-0.5, 0.5))
        if abs(a) < 1e-3:
            continue
        b = float(rng.uniform(0.1, 10.0))
        # keep the window strictly positive: below the ODE equilibrium b/a
        # for decaying dynamics, unconstrained for growing ones
        x1 = float(rng.uniform(0.05, 0.9) * (b / a)) if a > 0 else \
            float(rng.uniform(0.1, 10.0))
        window = basic_form_series(a, b, x1, int(rng.integers(4, 9)))
        if np.any(window <= 0):
            continue
        fit = fit_gm11(window)
        assert abs(fit.a - a) <= 1e-9 * max(1.0, abs(a))
        assert abs(fit.b - b) <= 1e-9 * max(1.0, abs(b))
        # in-window residuals of the fitted basic form
        x1_acc = np.cumsum(window)
        z = (x1_acc[:-1] + x1_acc[1:]) / 2.0
        residuals = window[1:] + fit.a * z - fit.b
        assert np.max(np.abs(residuals)) <= 1e-9 * max(1.0, float(np.max(window)))
        checked += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    print(f"PASS criterion 2: 1000/1000 windows recovered (a,b) to 1e-9 "
          f"({elapsed:.2f}s)")


def _ode_rhs(fit):
    def rhs(t, y):
        if fit.kind is ModelKind.GM_S:
            f = fit.b1 * np.sin(fit.omega * t) + fit.b2
        elif fit.kind is ModelKind.GM_C:
            f = fit.b1 * np.cos(fit.omega * t) + fit.b2
        elif fit.kind is ModelKind.GM_SC:
            f = (fit.b1 * np.sin(fit.omega * t)
                 + fit.b2 * np.cos(fit.omega * t) + fit.b3)
        else:
            f = (np.exp(-fit.a * t)
                 * (fit.b1 * np.sin(fit.omega * t) + fit.b2 * np.cos(fit.omega * t))
                 + fit.b3)
        return f - fit.a * y[0]
    return rhs


def test_criterion_3_closed_form_vs_ode_oracle():
    start = time.perf_counter()
    rng = np.random.default_rng(3)
    kinds = (ModelKind.GM_S, ModelKind.GM_C, ModelKind.GM_SC, ModelKind.GM_ESC)
    times = np.arange(1.0, 11.0)
    worst = 0.0
    cases = 200
    for trial in range(cases):
        kind = kinds[trial % 4]
        fit = GreyFit(
            kind,
            a=float(rng.uniform(1e-3, 1.0) * rng.choice([-1.0, 1.0])),
            b1=float(rng.uniform(-2.0, 2.0)),
            b2=float(rng.uniform(-2.0, 2.0)),
            b3=float(rng.uniform(0.1, 5.0)),
            omega=float(OMEGA_TABLE[trial % len(OMEGA_TABLE)]),
            x0_1=float(rng.uniform(1.0, 10.0)),
            window_len=4,
        )
        sol = solve_ivp(_ode_rhs(fit), (1.0, 10.0), [fit.x0_1], t_eval=times,
                        rtol=1e-11, atol=1e-12, method="DOP853", max_step=0.05)
        assert sol.success
        closed = np.array([accumulated_response(fit, t) for t in times])
        rel = float(np.max(np.abs(closed - sol.y[0])
                           / np.maximum(1.0, np.abs(sol.y[0]))))
        worst = max(worst, rel)
        assert rel <= 1e-6, (kind, fit.a, fit.omega, rel)
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0
    print(f"PASS criterion 3: {cases} cases, worst relative error {worst:.3e} "
          f"({elapsed:.1f}s)")


def test_criterion_4_trig_reduction():
    rng = np.random.default_rng(4)
    kinds = (ModelKind.GM_S, ModelKind.GM_C, ModelKind.GM_SC, ModelKind.GM_ESC)
    checked = 0
    while checked < 100:
        window = rng.uniform(0.5, 50.0, size=5)
        kind = kinds[checked % 4]
        try:
            fit = fit_model(kind, window, omega=float(rng.choice(OMEGA_TABLE)))
        except GreycastError:
            continue
        constant = fit.b2 if kind in (ModelKind.GM_S, ModelKind.GM_C) else fit.b3
        reduced = GreyFit(kind, a=fit.a, b1=0.0, b2=0.0 if fit.b3 is not None
                          else constant, b3=constant if fit.b3 is not None else None,
                          omega=fit.omega, x0_1=fit.x0_1, window_len=fit.window_len)
        gm = GreyFit(ModelKind.GM11, a=fit.a, b=constant, x0_1=fit.x0_1,
                     window_len=fit.window_len)
        for k in range(1, 8):
            lhs = forecast_trig(reduced, k)
            rhs = forecast_gm11(gm, k)
            assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(rhs)), (kind, k)
        checked += 1
    print("PASS criterion 4: 100/100 zeroed-trig windows match GM(1,1) to 1e-9")


def _seasonal_series(seed: int, n: int = 500) -> Series:
    return generate_synthetic("seasonal", seed=seed, mean=20.0, amp=5.0,
                              period=12, sigma=0.5, n=n)


def _rolling_rmse(series: Series, config: RollingConfig) -> float:
    trace = roll_forecast(series, config)
    return rmse(trace.predicted(), trace.observed())


def test_criterion_5_qualitative_ordering():
    start = time.perf_counter()
    # One-time calibration on an independent series (seed outside the
    # evaluation range), mirroring the train-once / apply-online protocol.
    calib = _seasonal_series(seed=1000)
    omega = calibrate_omega(calib, ModelKind.GM_C, OmegaGrid(0.05, 6.30, 0.05))
    # EF correction sized to the known season: a buffer of 13 residuals gives
    # base period 12, and one harmonic captures the fundamental.
    ef = dict(ef_residual_window=13, ef_harmonics=1)
    gm_c_wins = 0
    ef_wins = 0
    seeds = range(20)
    for seed in seeds:
        series = _seasonal_series(seed)
        rmse_gm11 = _rolling_rmse(series, RollingConfig(model="GM11"))
        rmse_gm_c = _rolling_rmse(series, RollingConfig(model="GM_C", omega=omega))
        rmse_ef = _rolling_rmse(series, RollingConfig(model="EFGM_C", omega=omega,
                                                      **ef))
        gm_c_wins += rmse_gm_c < rmse_gm11
        ef_wins += rmse_ef < rmse_gm_c
    elapsed = time.perf_counter() - start
    assert gm_c_wins >= 18, f"GM_C beat GM(1,1) in only {gm_c_wins}/20 seeds"
    assert ef_wins >= 18, f"EFGM_C beat GM_C in only {ef_wins}/20 seeds"
    assert elapsed < 60.0
    print(f"PASS criterion 5: omega={omega:g}, GM_C<GM(1,1) {gm_c_wins}/20, "
          f"EFGM_C<GM_C {ef_wins}/20 ({elapsed:.1f}s)")


def test_criterion_6_fourier_monotonicity():
    rng = np.random.default_rng(6)
    for _ in range(100):
        eps = ResidualSeries(rng.normal(scale=rng.uniform(0.1, 3.0), size=24))
        previous = math.inf
        for count in range(0, max_harmonics(24) + 1):
            model = fit_residual_fourier(eps, harmonics=count)
            in_sample = rmse(fitted_errors(model, eps), eps.values)
            assert in_sample <= previous + 1e-10
            if count == 0:
                # F=0 correction is exactly the residual mean
                assert extrapolate_error(model, eps.next_index) == eps.values.mean()
            previous = in_sample
    print("PASS criterion 6: 100/100 sequences monotone in F; F=0 = mean exactly")


def test_criterion_7_psi_and_benchmark_fixtures():
    from greycast.benchmarks import forecast_linear, forecast_setar, psi_weights

    fixtures = load_config()
    psi_arima = psi_weights(fixtures.arima, 2)
    assert psi_arima[1] == 1.0 + (-0.749) - (-0.363)
    assert psi_arima[1] == 0.614
    psi_sarima = psi_weights(fixtures.sarima, 2)
    assert psi_sarima[1] == 0.990 - 0.377
    assert psi_sarima[1] == 0.613
    setar = forecast_setar(fixtures.setar, [8.0, 9.0, 10.0])
    assert setar == 1.215 + 0.302 * 10 + 0.337 * 9 + 0.221 * 8
    assert abs(setar - 9.036) < 1e-12
    linear = forecast_linear(fixtures.linear, [10.0, 10.0, 10.0])
    assert linear == 0.346 + (0.637 + 0.146 + 0.193) * 10
    assert abs(linear - 10.106) < 1e-12
    print("PASS criterion 7: psi1=0.614/0.613, SETAR 9.036, LINEAR 10.106 exact")


def test_criterion_8_online_throughput():
    series = generate_synthetic("seasonal", seed=8, mean=50.0, amp=10.0,
                                period=60, sigma=1.0, n=1440)
    dataset = Dataset(series=(series,), source="synthetic-1440")
    start = time.perf_counter()
    report, _ = compare(dataset, models=GREY_MODEL_NAMES,
                        config=RollingConfig(), specs=load_config())
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0, f"compare took {elapsed:.2f}s"
    assert len(report.rows) == 12
    steps = len(series) - 4
    for row in report.rows:
        assert not row.failed, row.message
        assert row.compute_time >= 0.0
        assert math.isfinite(row.rmse)
    mean_times = {row.model: row.compute_time / steps for row in report.rows}
    slowest = max(mean_times.values())
    print(f"PASS criterion 8: 12 models x 1436 steps in {elapsed:.2f}s, "
          f"slowest per-step mean {slowest * 1e6:.0f}us")


def test_criterion_9_no_lookahead_audit():
    series = generate_synthetic("seasonal", seed=9, sigma=0.5, n=300)
    config = RollingConfig(model="EFGM_C", omega=2.65)
    full = roll_forecast(series, config)
    rng = np.random.default_rng(99)
    cuts = rng.integers(6, len(series), size=50)
    for cut in cuts:
        partial = roll_forecast(Series(series.values[:int(cut)]), config)
        count = len(partial.predictions)
        assert partial.predictions == full.predictions[:count]
    print("PASS criterion 9: 50/50 truncation points bit-identical")
