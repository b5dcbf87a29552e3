"""Discounted cash flow valuation driven by user-base forecasts.

Every scenario is first valued at one dollar of distributed profit per user
per year ("normalized"); company values then scale that by profit margin
times revenue per user.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .calibration import LogisticFit, log_linear_fit
from .ingest import ElapsedSeries
from .models import ExponentialParams, LogisticParams, exp_eval, logistic_eval
from .scenarios import SCENARIO_NAMES, ScenarioSet

DEFAULT_DISCOUNTS = tuple(d / 100 for d in range(2, 11))
DEFAULT_HORIZON = 50


@dataclass(frozen=True)
class SoftNumbers:
    discount_rate: float
    profit_margin: float
    revenue_per_user: float
    horizon_years: int = DEFAULT_HORIZON

    def __post_init__(self):
        if not self.discount_rate > 0:
            raise ValueError("discount rate must be positive")
        if not 0 <= self.profit_margin <= 1:
            raise ValueError("profit margin must lie in [0, 1]")
        if not self.revenue_per_user > 0:
            raise ValueError("revenue per user must be positive")
        if int(self.horizon_years) != self.horizon_years or self.horizon_years < 1:
            raise ValueError("horizon must be a positive whole number of years")

    @property
    def profit_per_user(self) -> float:
        return self.profit_margin * self.revenue_per_user


@dataclass(frozen=True)
class TrendPair:
    revenue_trend: ExponentialParams
    user_trend: ExponentialParams

    @property
    def rate_gap(self) -> float:
        """Growth rate of revenue per user (negative when it decays)."""
        return self.revenue_trend.r - self.user_trend.r

    @property
    def half_life(self) -> float:
        """Years for revenue per user to halve; inf when it does not decay."""
        gap = self.rate_gap
        return math.log(2) / -gap if gap < 0 else math.inf


@dataclass(frozen=True)
class ValuationResult:
    per_scenario: dict
    soft: SoftNumbers | None = None
    normalized: bool = True

    def __getitem__(self, name):
        return self.per_scenario[name]


@dataclass(frozen=True)
class ValuationTable:
    discounts: tuple[float, ...]
    scenarios: tuple[str, ...]
    values: np.ndarray = field(repr=False)

    def column(self, name: str) -> np.ndarray:
        return self.values[:, self.scenarios.index(name)]

    def to_csv(self) -> str:
        """``discount,<scenario>...`` rows, USD billions to one decimal."""
        out = io.StringIO()
        out.write(",".join(("discount",) + self.scenarios) + "\n")
        for d, row in zip(self.discounts, self.values):
            out.write(",".join([f"{d:.4f}"] + [f"{v / 1e9:.1f}" for v in row]) + "\n")
        return out.getvalue()

    def to_markdown(self) -> str:
        head = ["Discount"] + [s.capitalize() for s in self.scenarios]
        lines = ["| " + " | ".join(head) + " |",
                 "|" + "|".join(["---"] + ["---:"] * len(self.scenarios)) + "|"]
        for d, row in zip(self.discounts, self.values):
            cells = [f"{100 * d:g}%"] + [f"{v / 1e9:.1f}" for v in row]
            lines.append("| " + " | ".join(cells) + " |")
        return "\n".join(lines) + "\n"


def _params(fit) -> LogisticParams:
    return fit.params if isinstance(fit, LogisticFit) else fit


def _named(scenarios) -> list[tuple[str, object]]:
    if isinstance(scenarios, ScenarioSet):
        return scenarios.items()
    if isinstance(scenarios, Mapping):
        return list(scenarios.items())
    return list(scenarios)


def annuity_factor(discount: float, horizon: int = DEFAULT_HORIZON) -> float:
    return (1.0 - (1.0 + discount) ** -horizon) / discount


def normalized_value(fit, from_t: float, discount: float,
                     horizon: int = DEFAULT_HORIZON) -> float:
    """Present value of one dollar per forecast user, paid at each year end."""
    if not discount > 0:
        raise ValueError("discount must be positive")
    years = np.arange(1, int(horizon) + 1)
    users = logistic_eval(_params(fit), from_t + years)
    return float(np.sum(users / (1.0 + discount) ** years))


def valuation_table(scenarios, from_t: float,
                    discounts: Sequence[float] = DEFAULT_DISCOUNTS,
                    horizon: int = DEFAULT_HORIZON) -> ValuationTable:
    if not len(discounts):
        raise ValueError("need at least one discount rate")
    named = _named(scenarios)
    values = np.array([[normalized_value(fit, from_t, d, horizon) for _, fit in named]
                       for d in discounts])
    return ValuationTable(tuple(float(d) for d in discounts),
                          tuple(name for name, _ in named), values)


def value_company(scenarios, from_t: float, soft: SoftNumbers,
                  decay: TrendPair | None = None) -> ValuationResult:
    """Scenario values at the given discount rate, margin and revenue per user.

    Revenue per user is held flat unless ``decay`` is given, in which case
    year y earns ``revenue_per_user * exp(rate_gap * y)`` per user (a
    sensitivity run; off by default).
    """
    years = np.arange(1, soft.horizon_years + 1)
    disc = (1.0 + soft.discount_rate) ** -years
    if decay is not None:
        scale = np.exp(decay.rate_gap * years)
    else:
        scale = np.ones_like(years, dtype=float)
    out = {}
    for name, fit in _named(scenarios):
        users = logistic_eval(_params(fit), from_t + years)
        out[name] = float(soft.profit_per_user * np.sum(users * scale * disc))
    return ValuationResult(out, soft, normalized=False)


def fit_trend(series: ElapsedSeries) -> ExponentialParams:
    """Exponential trend by OLS on log values: level at the epoch and rate."""
    return log_linear_fit(series.t, series.values)


def revenue_per_user(trends: TrendPair, dt):
    """Ratio of the revenue and user trends ``dt`` years after the epoch."""
    dt = np.asarray(dt, dtype=float)
    out = exp_eval(trends.revenue_trend, dt) / exp_eval(trends.user_trend, dt)
    return out[()] if out.ndim == 0 else out


def avg_revenue_per_user(trends: TrendPair, age_years: float, window: int = 5) -> float:
    """Mean yearly revenue per user over the last ``window`` years of the company's life.

    Averages the trend ratio at ages age, age-1, ..., age-window+1.
    """
    if window < 1:
        raise ValueError("window must be at least 1")
    if age_years < window:
        raise ValueError(f"company age {age_years:g} is shorter than the {window}-year window")
    ages = age_years - np.arange(window)
    return float(np.mean(revenue_per_user(trends, ages)))


def linear_revenue_fit(pairs: Iterable[tuple[float, float]]) -> float:
    """Revenue per customer from a least-squares line through the origin."""
    arr = np.asarray(list(pairs), dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 1:
        raise ValueError("pairs must be (customers, revenue) tuples")
    x, y = arr[:, 0], arr[:, 1]
    sxx = float(np.dot(x, x))
    if sxx == 0:
        raise ValueError("all customer counts are zero")
    return float(np.dot(x, y) / sxx)


def steady_state_revenue(k: float, slope: float) -> float:
    """Yearly revenue once the customer ceiling ``k`` is reached."""
    if k <= 0:
        raise ValueError("k must be positive")
    if slope < 0:
        raise ValueError("slope must be nonnegative")
    return k * slope


def saturated_fit(k: float) -> LogisticFit:
    """A fit sitting on its ceiling, for plateau-only valuations."""
    params = LogisticParams(k * (1 - 1e-12), 1.0, k)
    return LogisticFit(params, 0.0, k_fixed=True)


def plateau_scenarios(ks: Sequence[float]) -> dict[str, LogisticFit]:
    if len(ks) != len(SCENARIO_NAMES):
        raise ValueError("need one plateau per scenario")
    return {name: saturated_fit(k) for name, k in zip(SCENARIO_NAMES, ks)}
