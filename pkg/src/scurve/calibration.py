"""Turning observed counts into growth-model parameters.

The pipeline is: exponential fits and the omission scan that flags a change
of growth regime; discrete growth rates regressed on population to get a
first estimate of the logistic rate and ceiling (with one-sided t bounds on
the ceiling); the implied initial population; and finally derivative-free
least-squares fits of the logistic curve.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import optimize, stats

from .ingest import ElapsedSeries
from .models import (
    ExponentialParams,
    LogisticParams,
    fitting_error,
    logistic_eval,
)

WEIGHTINGS = ("model", "observed", "log")
EXP_WEIGHTING = "observed"
LOGISTIC_WEIGHTING = "log"
REGIME_JUMP_THRESHOLD = 2.0
MAX_ITER = 10_000
SPREAD_TOL = 1e-12
RESTARTS = 3
RESTART_SCALE = 0.3
_ERROR_FLOOR = 1e-12


class CalibrationError(ValueError):
    pass


class NoSaturationError(CalibrationError):
    """The growth rate does not fall with population; no ceiling can be estimated."""


class UnboundedCapacityError(NoSaturationError):
    """The slope's confidence interval reaches zero, so the ceiling bound is infinite."""


class ConvergenceWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class RatePoint:
    x: float  # mean population over the interval
    y: float  # discrete growth rate per year


@dataclass(frozen=True)
class RateRegression:
    a: float
    b: float
    se_a: float
    se_b: float
    n_pairs: int
    k_point: float
    residual_variance: float

    @property
    def r(self) -> float:
        return self.a


@dataclass(frozen=True)
class ExpFitResult:
    params: ExponentialParams
    error: float
    n_used: int
    converged: bool = True
    objective: float = float("nan")


@dataclass(frozen=True)
class LogisticFit:
    params: LogisticParams
    error: float
    k_fixed: bool
    converged: bool = True
    objective: float = float("nan")
    weighting: str = LOGISTIC_WEIGHTING

    def __call__(self, t):
        return logistic_eval(self.params, t)


@dataclass(frozen=True)
class RegimeScanResult:
    errors: tuple[tuple[int, float], ...]
    plateau_level: float
    jump_ratio: float
    regime_change_detected: bool

    @property
    def error_values(self) -> np.ndarray:
        return np.array([e for _, e in self.errors])


# -- objective -------------------------------------------------------------

def _residuals(observed, fitted, weighting):
    if weighting == "model":
        return (observed - fitted) / fitted
    if weighting == "observed":
        return (observed - fitted) / observed
    if weighting == "log":
        return np.log(observed / fitted)
    raise ValueError(f"weighting must be one of {WEIGHTINGS}, got {weighting!r}")


def relative_objective(observed, fitted, weighting: str = "model") -> float:
    """Mean squared relative residual under the chosen residual scale.

    ``"model"`` divides by the fitted value (the reported fitting error),
    ``"observed"`` divides by the observation and ``"log"`` uses log ratios.
    All three agree to second order for small misfits.
    """
    fitted = np.asarray(fitted, dtype=float)
    if np.any(~np.isfinite(fitted)) or np.any(fitted <= 0):
        return np.inf
    res = _residuals(np.asarray(observed, dtype=float), fitted, weighting)
    return float(np.mean(res * res))


def _simplex(x0, step=0.1):
    x0 = np.asarray(x0, dtype=float)
    return np.vstack([x0] + [x0 + step * e for e in np.eye(x0.size)])


def _nelder_mead(fun, x0, seed, restarts=RESTARTS, scale=RESTART_SCALE):
    """Best Nelder-Mead result over the start point and seeded perturbations of it.

    The winner is re-run from a fresh simplex until a restart no longer
    improves it, which guards against premature simplex collapse.
    """
    rng = np.random.default_rng(seed)
    x0 = np.asarray(x0, dtype=float)
    opts = dict(maxiter=MAX_ITER, maxfev=4 * MAX_ITER, xatol=1e-10, fatol=SPREAD_TOL)
    starts = [x0] + [x0 + rng.normal(0.0, scale, x0.size) for _ in range(restarts)]
    best = None
    for start in starts:
        res = optimize.minimize(fun, start, method="Nelder-Mead",
                                options=dict(opts, initial_simplex=_simplex(start)))
        if best is None or res.fun < best.fun:
            best = res
    for _ in range(5):
        res = optimize.minimize(fun, best.x, method="Nelder-Mead",
                                options=dict(opts, initial_simplex=_simplex(best.x, 0.02)))
        improved = res.fun < best.fun - SPREAD_TOL
        if res.fun <= best.fun:
            best = res
        if not improved:
            break
    return best


# -- exponential -------------------------------------------------------------

def log_linear_fit(t, values) -> ExponentialParams:
    """Exponential trend from ordinary least squares on log values."""
    t = np.asarray(t, dtype=float)
    values = np.asarray(values, dtype=float)
    if t.size < 2:
        raise CalibrationError("need at least 2 points")
    if np.any(values <= 0):
        raise CalibrationError("values must be positive for a log-linear fit")
    slope, intercept = np.polyfit(t, np.log(values), 1)
    return ExponentialParams(float(np.exp(intercept)), float(slope))


def fit_exponential(series: ElapsedSeries, weighting: str = EXP_WEIGHTING,
                    seed: int = 0) -> ExpFitResult:
    """Fit p0*e^{rt}, starting from log-space OLS and refining with Nelder-Mead.

    The reported ``error`` is always the fitting error (fitted-value scaled)
    at the optimum; ``weighting`` only selects the residual scale minimised.
    """
    if len(series) < 2:
        raise CalibrationError("need at least 2 points for an exponential fit")
    t, obs = series.t, series.values
    init = log_linear_fit(t, obs)

    def objective(x):
        return relative_objective(obs, np.exp(x[0] + x[1] * t), weighting)

    res = _nelder_mead(objective, [np.log(init.p0), init.r], seed, restarts=0)
    params = ExponentialParams(float(np.exp(res.x[0])), float(res.x[1]))
    if not res.success:
        warnings.warn(f"exponential fit did not converge: {res.message}", ConvergenceWarning)
    return ExpFitResult(params, fitting_error(series, params), len(series),
                        bool(res.success), float(res.fun))


def regime_scan(series: ElapsedSeries, max_omit: int = 10,
                weighting: str = EXP_WEIGHTING,
                threshold: float = REGIME_JUMP_THRESHOLD) -> RegimeScanResult:
    """Refit the exponential with the most recent 0..max_omit points dropped.

    The error level with two or more points omitted (median) is the
    reference; a full-sample error at least ``threshold`` times larger flags
    a change of regime.
    """
    if max_omit < 2:
        raise CalibrationError("max_omit must be at least 2")
    if len(series) < max_omit + 2:
        raise CalibrationError(
            f"insufficient points: {len(series)} observations cannot support "
            f"omitting {max_omit}")
    n = len(series)
    errors = tuple((k, fit_exponential(series.head(n - k), weighting).error)
                   for k in range(max_omit + 1))
    plateau = float(np.median([e for _, e in errors[2:]]))
    ratio = (errors[0][1] + _ERROR_FLOOR) / (plateau + _ERROR_FLOOR)
    return RegimeScanResult(errors, plateau, float(ratio), bool(ratio >= threshold))


# -- growth-rate regression ------------------------------------------------

def discrete_growth_rates(series: ElapsedSeries) -> list[RatePoint]:
    """ln(P_i/P_{i-1}) / (t_i - t_{i-1}) against the interval mean population."""
    if len(series) < 2:
        raise CalibrationError("need at least 2 points")
    dt = np.diff(series.t)
    if np.any(dt <= 0):
        raise CalibrationError("coincident observation times")
    p = series.values
    y = np.log(p[1:] / p[:-1]) / dt
    x = 0.5 * (p[1:] + p[:-1])
    return [RatePoint(float(xi), float(yi)) for xi, yi in zip(x, y)]


def rate_regression(points: Sequence[RatePoint]) -> RateRegression:
    """OLS of growth rate on population; ceiling is where the line hits zero."""
    n = len(points)
    if n < 3:
        raise CalibrationError("need at least 3 rate points")
    x = np.array([p.x for p in points])
    y = np.array([p.y for p in points])
    xm, ym = x.mean(), y.mean()
    sxx = np.sum((x - xm) ** 2)
    if sxx == 0:
        raise CalibrationError("rate points share a single abscissa")
    b = np.sum((x - xm) * (y - ym)) / sxx
    a = ym - b * xm
    resid = y - (a + b * x)
    s2 = float(np.sum(resid**2) / (n - 2))
    se_b = np.sqrt(s2 / sxx)
    se_a = np.sqrt(s2 * (1.0 / n + xm**2 / sxx))
    # a slope whose effect over the sampled range is at rounding level counts as flat
    flat = abs(b) * (x.max() - x.min()) <= 1e-9 * max(np.abs(y).max(), 1e-300)
    if b >= 0 or flat:
        raise NoSaturationError(
            f"carrying capacity unidentified: growth rate does not decline with population (slope {b:.3g})")
    return RateRegression(float(a), float(b), float(se_a), float(se_b), n,
                          float(-a / b), s2)


def capacity_bound(reg: RateRegression, level: float) -> float:
    """One-sided upper confidence bound on the carrying capacity.

    The slope is moved towards zero by its t-quantile times its standard error
    (intercept held at its estimate) and the ceiling recomputed.
    """
    if not 0.5 < level < 1:
        raise ValueError("level must lie in (0.5, 1)")
    if reg.b >= 0:
        raise NoSaturationError("carrying capacity unidentified")
    tq = stats.t.ppf(level, reg.n_pairs - 2)
    b_level = reg.b + tq * reg.se_b
    if b_level >= 0:
        raise UnboundedCapacityError(
            f"{level:.0%} bound on the carrying capacity is unbounded: slope interval crosses zero")
    return float(-reg.a / b_level)


def initial_population(series: ElapsedSeries, r: float, k: float) -> float:
    """Average of the initial population implied by each observation."""
    if r <= 0:
        raise ValueError("r must be positive")
    p, t = series.values, series.t
    ert = np.exp(r * t)
    denom = p * (ert - 1.0) - k * ert
    scale = np.maximum(p * ert, k * ert)
    if np.any(np.abs(denom) <= 1e-12 * scale):
        raise CalibrationError("singular initial-population inversion")
    if k <= p.max():
        raise CalibrationError("carrying capacity must exceed every observation")
    return float(np.mean(-p * k / denom))


# -- logistic least squares ------------------------------------------------

def fit_logistic(series: ElapsedSeries, init: LogisticParams,
                 fixed_k: float | None = None, weighting: str = LOGISTIC_WEIGHTING,
                 seed: int = 0) -> LogisticFit:
    """Least-squares logistic fit over (p0, r, k), or (p0, r) with ``fixed_k``.

    Parameters are searched in log space with Nelder-Mead, started at
    ``init`` and at ``RESTARTS`` seeded perturbations of it.
    """
    t, obs = series.t, series.values
    if weighting not in WEIGHTINGS:
        raise ValueError(f"weighting must be one of {WEIGHTINGS}")
    if fixed_k is not None and fixed_k <= obs.max():
        raise CalibrationError("fixed carrying capacity must exceed every observation")

    def curve(x):
        p0, r = np.exp(x[0]), np.exp(x[1])
        k = fixed_k if fixed_k is not None else np.exp(x[2])
        return p0, r, k

    def objective(x):
        p0, r, k = curve(x)
        if not p0 < k:
            return np.inf
        with np.errstate(over="ignore", invalid="ignore"):
            fitted = k / (1.0 + (k - p0) / p0 * np.exp(-r * t))
        return relative_objective(obs, fitted, weighting)

    x0 = [np.log(init.p0), np.log(init.r)]
    if fixed_k is None:
        x0.append(np.log(init.k))
    elif init.p0 >= fixed_k:
        x0[0] = np.log(0.5 * fixed_k)
    res = _nelder_mead(objective, x0, seed)
    p0, r, k = curve(res.x)
    params = LogisticParams(float(p0), float(r), float(k))
    if not res.success:
        warnings.warn(f"logistic fit did not converge: {res.message}", ConvergenceWarning)
    return LogisticFit(params, fitting_error(series, params), fixed_k is not None,
                       bool(res.success), float(res.fun), weighting)


# -- nested model test -----------------------------------------------------

def nested_f_test(s_reduced: float, s_full: float, n: int, extra: int = 1,
                  n_full: int = 3) -> tuple[float, float]:
    """F statistic and upper-tail p-value for nested least-squares models."""
    dof = n - n_full
    if dof <= 0:
        raise CalibrationError(f"need more than {n_full} points, got {n}")
    if s_full <= 0:
        return np.inf, 0.0
    f = max(s_reduced - s_full, 0.0) / extra / (s_full / dof)
    return float(f), float(stats.f.sf(f, extra, dof))


def nested_model_test(exp_fit: ExpFitResult, log_fit: LogisticFit, n: int) -> float:
    """p-value for the exponential (null) against the unconstrained logistic.

    Residual sums are n times the reported fitting errors.
    """
    if log_fit.k_fixed:
        raise CalibrationError("nested test needs the unconstrained logistic fit")
    return nested_f_test(n * exp_fit.error, n * log_fit.error, n)[1]
