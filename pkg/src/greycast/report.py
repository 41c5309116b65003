"""Multi-model comparison reports: per-model RMSE/MAPE/compute-time matrices."""
from __future__ import annotations

import io
import math
import time
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .data import Dataset
from .errors import GreycastError
from .metrics import improvement, mape, rmse
from .rolling import (
    ALL_MODEL_NAMES,
    ForecastTrace,
    RollingConfig,
    parse_model,
    roll_forecast,
)

#: Reference / candidate pair of the improvement summary row.
IMPROVEMENT_REFERENCE = "EFGVM"
IMPROVEMENT_CANDIDATE = "GM_C"


@dataclass(frozen=True)
class ModelRow:
    model: str
    rmse: float
    mape: float  # percent
    excluded_pairs: int
    compute_time: float  # mean wall-clock seconds per series
    series_count: int
    failed: bool = False
    message: str = ""


@dataclass(frozen=True)
class EvalReport:
    rows: Tuple[ModelRow, ...]
    improvement_rmse: Optional[float] = None  # percent, candidate vs reference
    improvement_mape: Optional[float] = None

    def row(self, model: str) -> ModelRow:
        for row in self.rows:
            if row.model == model:
                return row
        raise KeyError(model)


def _config_for(model: str, config: RollingConfig, specs) -> RollingConfig:
    _, _, bench = parse_model(model)
    spec = None
    if bench is not None and specs is not None:
        spec = {"LINEAR": specs.linear, "ARIMA": specs.arima,
                "SARIMA": specs.sarima, "SETAR": specs.setar}[bench]
    omegas = getattr(specs, "omega", None) if specs is not None else None
    omega = config.omega
    kind, _, _ = parse_model(model)
    if omega is None and omegas is not None and kind in omegas:
        omega = omegas[kind]
    return replace(config, model=model, omega=omega, benchmark_spec=spec)


def compare(dataset: Dataset, models: Sequence[str] = ALL_MODEL_NAMES,
            config: Optional[RollingConfig] = None, specs=None,
            omegas: Optional[Dict] = None) -> Tuple[EvalReport, List[ForecastTrace]]:
    """Roll every model over every series; average metrics across series.

    Per-model failures become flagged rows instead of aborting the report.
    ``omegas`` maps a grey ModelKind to a calibrated frequency, overriding the
    config defaults. Returns the report plus all per-(series, model) traces.
    """
    base = config if config is not None else RollingConfig()
    rows: List[ModelRow] = []
    traces: List[ForecastTrace] = []
    for model in models:
        cfg = _config_for(model, base, specs)
        if omegas is not None:
            kind, _, _ = parse_model(model)
            if kind in omegas:
                cfg = replace(cfg, omega=float(omegas[kind]))
        per_rmse: List[float] = []
        per_mape: List[float] = []
        excluded = 0
        elapsed: List[float] = []
        failure = ""
        for series in dataset.series:
            try:
                t0 = time.perf_counter()
                trace = roll_forecast(series, cfg)
                elapsed.append(time.perf_counter() - t0)
            except GreycastError as exc:
                failure = str(exc)
                break
            traces.append(trace)
            predicted, observed = trace.predicted(), trace.observed()
            per_rmse.append(rmse(predicted, observed))
            result = mape(predicted, observed)
            per_mape.append(result.value)
            excluded += result.excluded
        if failure:
            rows.append(ModelRow(model, math.nan, math.nan, 0, math.nan,
                                 len(dataset.series), failed=True, message=failure))
            continue
        rows.append(ModelRow(
            model=model,
            rmse=float(np.mean(sorted(per_rmse))),
            mape=float(np.mean(sorted(per_mape))),
            excluded_pairs=excluded,
            compute_time=float(np.mean(elapsed)),
            series_count=len(dataset.series),
        ))

    report = EvalReport(rows=tuple(rows))
    names = {row.model for row in rows if not row.failed}
    if IMPROVEMENT_REFERENCE in names and IMPROVEMENT_CANDIDATE in names:
        ref, cand = None, None
        for row in rows:
            if row.model == IMPROVEMENT_REFERENCE:
                ref = row
            elif row.model == IMPROVEMENT_CANDIDATE:
                cand = row
        if ref.rmse > 0 and ref.mape > 0:
            report = EvalReport(
                rows=tuple(rows),
                improvement_rmse=improvement(ref.rmse, cand.rmse),
                improvement_mape=improvement(ref.mape, cand.mape),
            )
    return report, traces


def format_table(report: EvalReport) -> str:
    """Aligned plain-text report table."""
    out = io.StringIO()
    header = f"{'model':<10} {'RMSE':>12} {'MAPE%':>10} {'CT(s)':>9} {'series':>7} {'excl':>5}"
    out.write(header + "\n")
    out.write("-" * len(header) + "\n")
    for row in report.rows:
        if row.failed:
            out.write(f"{row.model:<10} {'--':>12} {'--':>10} {'--':>9} "
                      f"{row.series_count:>7} {'--':>5}  FAILED: {row.message}\n")
        else:
            out.write(f"{row.model:<10} {row.rmse:>12.4f} {row.mape:>10.4f} "
                      f"{row.compute_time:>9.4f} {row.series_count:>7} "
                      f"{row.excluded_pairs:>5}\n")
    if report.improvement_rmse is not None:
        out.write(f"{'% Imp':<10} {report.improvement_rmse:>11.0f}% "
                  f"{report.improvement_mape:>9.0f}%  "
                  f"({IMPROVEMENT_CANDIDATE} over {IMPROVEMENT_REFERENCE})\n")
    return out.getvalue()


def format_csv(report: EvalReport, include_timing: bool = True) -> str:
    """Machine-readable report: model,metric,value,series_count,excluded_pairs.

    ``include_timing=False`` drops the wall-clock rows, making the output
    byte-reproducible for identical inputs and seeds.
    """
    lines = ["model,metric,value,series_count,excluded_pairs"]
    for row in report.rows:
        if row.failed:
            lines.append(f"{row.model},error,,{row.series_count},")
            continue
        lines.append(f"{row.model},rmse,{row.rmse!r},{row.series_count},{row.excluded_pairs}")
        lines.append(f"{row.model},mape,{row.mape!r},{row.series_count},{row.excluded_pairs}")
        if include_timing:
            lines.append(f"{row.model},compute_time,{row.compute_time!r},"
                         f"{row.series_count},{row.excluded_pairs}")
    if report.improvement_rmse is not None:
        lines.append(f"improvement,rmse,{report.improvement_rmse!r},,")
        lines.append(f"improvement,mape,{report.improvement_mape!r},,")
    return "\n".join(lines) + "\n"


def format_trace_csv(traces: Sequence[ForecastTrace],
                     series_labels: Optional[Sequence[str]] = None) -> str:
    """Long-format per-step export for box-plot style downstream analysis."""
    lines = ["series,model,index,observed,predicted,residual,fallback_flag"]
    labels = list(series_labels) if series_labels is not None else None
    for t_i, trace in enumerate(traces):
        label = labels[t_i] if labels is not None else str(t_i)
        for (index, predicted, observed), flag in zip(trace.predictions, trace.fallbacks):
            lines.append(f"{label},{trace.model},{index},{observed!r},{predicted!r},"
                         f"{observed - predicted!r},{int(flag)}")
    return "\n".join(lines) + "\n"
