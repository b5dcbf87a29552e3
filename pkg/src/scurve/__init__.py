"""Logistic growth calibration and user-based valuation of network businesses."""
from .calibration import (
    ExpFitResult,
    LogisticFit,
    NoSaturationError,
    RateRegression,
    RatePoint,
    RegimeScanResult,
    capacity_bound,
    discrete_growth_rates,
    fit_exponential,
    fit_logistic,
    initial_population,
    nested_model_test,
    rate_regression,
    regime_scan,
)
from .ingest import (
    ElapsedSeries,
    ObservationSeries,
    builtin_dataset,
    builtin_pairs,
    parse_series,
    serialize_series,
    to_elapsed,
)
from .models import (
    ExponentialParams,
    LogisticParams,
    exp_eval,
    fitting_error,
    logistic_eval,
    logistic_ode_rhs,
    logistic_rate,
)
from .scenarios import ScenarioSet, Trajectory, build_scenarios, forecast
from .valuation import (
    SoftNumbers,
    TrendPair,
    ValuationResult,
    avg_revenue_per_user,
    fit_trend,
    linear_revenue_fit,
    normalized_value,
    revenue_per_user,
    steady_state_revenue,
    valuation_table,
    value_company,
)

__version__ = "0.1.0"

__all__ = [
    "ExpFitResult",
    "LogisticFit",
    "NoSaturationError",
    "RateRegression",
    "RatePoint",
    "RegimeScanResult",
    "capacity_bound",
    "discrete_growth_rates",
    "fit_exponential",
    "fit_logistic",
    "initial_population",
    "nested_model_test",
    "rate_regression",
    "regime_scan",
    "ElapsedSeries",
    "ObservationSeries",
    "builtin_dataset",
    "builtin_pairs",
    "parse_series",
    "serialize_series",
    "to_elapsed",
    "ExponentialParams",
    "LogisticParams",
    "exp_eval",
    "fitting_error",
    "logistic_eval",
    "logistic_ode_rhs",
    "logistic_rate",
    "ScenarioSet",
    "Trajectory",
    "build_scenarios",
    "forecast",
    "SoftNumbers",
    "TrendPair",
    "ValuationResult",
    "avg_revenue_per_user",
    "fit_trend",
    "linear_revenue_fit",
    "normalized_value",
    "revenue_per_user",
    "steady_state_revenue",
    "valuation_table",
    "value_company",
]
