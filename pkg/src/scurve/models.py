"""Exponential and logistic growth curves and the relative fitting error."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .ingest import ElapsedSeries


@dataclass(frozen=True)
class ExponentialParams:
    p0: float
    r: float

    def __post_init__(self):
        if not (self.p0 > 0 and np.isfinite(self.p0)):
            raise ValueError(f"p0 must be positive, got {self.p0}")
        if not np.isfinite(self.r):
            raise ValueError("r must be finite")

    def __call__(self, t):
        return exp_eval(self, t)


@dataclass(frozen=True)
class LogisticParams:
    """Logistic curve with initial level ``p0``, initial rate ``r`` and ceiling ``k``."""

    p0: float
    r: float
    k: float

    def __post_init__(self):
        if not (self.p0 > 0 and self.k > 0 and self.r > 0):
            raise ValueError(f"p0, r and k must be positive, got {self}")
        if not self.p0 < self.k:
            raise ValueError(f"p0 ({self.p0:g}) must lie below k ({self.k:g})")
        if not all(np.isfinite([self.p0, self.r, self.k])):
            raise ValueError("parameters must be finite")

    def __call__(self, t):
        return logistic_eval(self, t)


def exp_eval(params: ExponentialParams, t):
    return params.p0 * np.exp(params.r * np.asarray(t, dtype=float))


def logistic_eval(params: LogisticParams, t):
    """Evaluate K*P0*e^{rt} / (K + P0*(e^{rt} - 1)).

    Written as K / (1 + (K-P0)/P0 * e^{-rt}) for t >= 0 and in the
    e^{rt} form for t < 0, so neither branch can overflow.
    """
    p0, r, k = params.p0, params.r, params.k
    t = np.asarray(t, dtype=float)
    rt = r * t
    fwd = k / (1.0 + (k - p0) / p0 * np.exp(-np.maximum(rt, 0.0)))
    g = np.exp(np.minimum(rt, 0.0))
    bwd = k * p0 * g / (k + p0 * (g - 1.0))
    out = np.where(rt >= 0, fwd, bwd)
    return out[()] if out.ndim == 0 else out


def logistic_rate(params: LogisticParams, p):
    """Per-capita growth rate r(1 - p/K) at population ``p``."""
    p = np.asarray(p, dtype=float)
    if np.any(p <= 0) or np.any(p > params.k):
        raise ValueError("population must lie in (0, k]")
    out = params.r * (1.0 - p / params.k)
    return out[()] if out.ndim == 0 else out


def logistic_ode_rhs(params: LogisticParams, p):
    """dP/dt = rP(1 - P/K)."""
    p = np.asarray(p, dtype=float)
    if np.any(p < 0):
        raise ValueError("population must be nonnegative")
    out = params.r * p * (1.0 - p / params.k)
    return out[()] if out.ndim == 0 else out


def fitting_error(observed: ElapsedSeries, model: Callable) -> float:
    """Mean squared relative residual, (1/n) * sum((o - e)^2 / e^2).

    ``model`` maps an array of elapsed times to fitted counts.  The divisor is
    the number of observations, not a residual degrees-of-freedom count.
    """
    if len(observed) == 0:
        raise ValueError("empty series")
    e = np.asarray(model(observed.t), dtype=float)
    if np.any(~np.isfinite(e)) or np.any(e <= 0):
        raise ValueError("model must be positive at every observation time")
    rel = (observed.values - e) / e
    return float(np.mean(rel * rel))
