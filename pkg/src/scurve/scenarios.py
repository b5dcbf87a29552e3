"""Base, high and extreme growth scenarios and their forecast trajectories."""
from __future__ import annotations

import io
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .calibration import (
    LOGISTIC_WEIGHTING,
    LogisticFit,
    NoSaturationError,
    RateRegression,
    capacity_bound,
    discrete_growth_rates,
    fit_logistic,
    initial_population,
    rate_regression,
    regime_scan,
)
from .ingest import ElapsedSeries
from .models import LogisticParams, logistic_eval

SCENARIO_NAMES = ("base", "high", "extreme")
HIGH_LEVEL = 0.80
EXTREME_LEVEL = 0.95


class WeakIdentificationWarning(UserWarning):
    """No regime change was detected, so the ceiling is poorly pinned down."""


@dataclass(frozen=True)
class ScenarioSet:
    base: LogisticFit
    high: LogisticFit
    extreme: LogisticFit
    regression: RateRegression
    initial: LogisticParams
    k_high: float
    k_extreme: float
    label: str = ""
    last_t: float = 0.0

    def __iter__(self):
        return iter(self.items())

    def items(self):
        return [("base", self.base), ("high", self.high), ("extreme", self.extreme)]

    def __getitem__(self, name: str) -> LogisticFit:
        if name not in SCENARIO_NAMES:
            raise KeyError(name)
        return getattr(self, name)


@dataclass(frozen=True)
class Trajectory:
    t: np.ndarray
    values: np.ndarray
    params: LogisticParams

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("t,value\n")
        for ti, vi in zip(self.t, self.values):
            out.write(f"{ti:.6f},{vi:.6e}\n")
        return out.getvalue()


def build_scenarios(series: ElapsedSeries, seed: int = 0,
                    weighting: str = LOGISTIC_WEIGHTING,
                    check_regime: bool = True) -> ScenarioSet:
    """Calibrate the three logistic scenarios for ``series``.

    Growth-rate regression gives r, the central ceiling and its one-sided 80%
    and 95% bounds; the mean implied initial population completes the start
    point.  The base case is fitted freely, the high and extreme cases with the
    ceiling pinned at the 80% and 95% bounds.
    """
    if check_regime and len(series) >= 4:
        max_omit = min(10, len(series) - 2)
        scan = regime_scan(series, max_omit)
        if not scan.regime_change_detected:
            warnings.warn(
                f"{series.label}: no regime change detected (jump ratio "
                f"{scan.jump_ratio:.2f}); carrying capacity weakly identified",
                WeakIdentificationWarning, stacklevel=2)
    try:
        reg = rate_regression(discrete_growth_rates(series))
        k_high = capacity_bound(reg, HIGH_LEVEL)
        k_extreme = capacity_bound(reg, EXTREME_LEVEL)
    except NoSaturationError as exc:
        raise type(exc)(f"no saturation detected: {exc}") from None
    p0 = initial_population(series, reg.a, reg.k_point)
    init = LogisticParams(p0, reg.a, reg.k_point)

    base = fit_logistic(series, init, weighting=weighting, seed=seed)
    high = fit_logistic(series, init, fixed_k=k_high, weighting=weighting, seed=seed)
    extreme = fit_logistic(series, init, fixed_k=k_extreme, weighting=weighting, seed=seed)
    return ScenarioSet(base, high, extreme, reg, init, k_high, k_extreme,
                       series.label, float(series.t[-1]))


def forecast(fit: LogisticFit | LogisticParams, from_t: float, horizon: float,
             step: float = 1.0) -> Trajectory:
    """Sample the fitted curve at from_t + j*step for j = 1..ceil(horizon/step)."""
    if horizon <= 0 or step <= 0:
        raise ValueError("horizon and step must be positive")
    params = fit.params if isinstance(fit, LogisticFit) else fit
    n = max(1, math.ceil(horizon / step - 1e-12))
    t = from_t + step * np.arange(1, n + 1)
    return Trajectory(t, np.atleast_1d(logistic_eval(params, t)), params)
