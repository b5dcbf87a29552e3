import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from scurve.ingest import elapsed
from scurve.models import (
    ExponentialParams,
    LogisticParams,
    exp_eval,
    fitting_error,
    logistic_eval,
    logistic_ode_rhs,
    logistic_rate,
)

# e^6.3 to 15 significant figures
E_6_3 = 544.571910125929


def test_exp_eval():
    assert exp_eval(ExponentialParams(5, 0), 7) == 5
    assert exp_eval(ExponentialParams(1, math.log(2)), 3) == pytest.approx(8, rel=1e-14)
    assert exp_eval(ExponentialParams(7.6e6, 0.84), 7.5) == pytest.approx(7.6e6 * E_6_3, rel=1e-12)


def test_exp_eval_revenue_trend_magnitude():
    # Revenue trend 7.6e6 e^{0.84 t} at 7.5 years: a little over four billion.
    assert exp_eval(ExponentialParams(7.6e6, 0.84), 7.5) == pytest.approx(4.17e9, rel=1e-2)


def test_logistic_eval_values():
    assert logistic_eval(LogisticParams(50, 3.0, 100), 0) == 50
    p = LogisticParams(10, 1, 100)
    assert logistic_eval(p, 1) == pytest.approx(1000 * math.e / (100 + 10 * (math.e - 1)), rel=1e-14)
    assert logistic_eval(p, 1) == pytest.approx(23.196, abs=1e-3)
    assert logistic_eval(p, 1e6) == 100
    assert logistic_eval(p, np.inf) == 100


def test_logistic_eval_extreme_times_no_overflow():
    p = LogisticParams(1e-3, 50.0, 1e12)
    with np.errstate(over="raise", invalid="raise", divide="raise"):
        hi = logistic_eval(p, 1e5)
        lo = logistic_eval(p, -1e5)
    assert hi == 1e12
    assert lo == 0.0


def test_logistic_eval_array_matches_scalar():
    p = LogisticParams(2e5, 1.3, 8e8)
    t = np.linspace(-3, 20, 50)
    np.testing.assert_allclose(logistic_eval(p, t), [logistic_eval(p, x) for x in t])


def test_logistic_rate():
    p = LogisticParams(1.0, 1.40, 0.81e9)
    assert logistic_rate(p, p.k) == 0
    assert logistic_rate(p, 1e-9) == pytest.approx(1.40)
    assert logistic_rate(p, 0.405e9) == pytest.approx(0.70)
    with pytest.raises(ValueError):
        logistic_rate(p, 2 * p.k)
    with pytest.raises(ValueError):
        logistic_rate(p, 0)


def test_logistic_ode_rhs():
    p = LogisticParams(1.0, 1.0, 100.0)
    assert logistic_ode_rhs(p, 0) == 0
    assert logistic_ode_rhs(p, 100) == 0
    assert logistic_ode_rhs(p, 50) == 25


@pytest.mark.parametrize("kwargs", [
    dict(p0=0, r=1, k=10), dict(p0=1, r=0, k=10), dict(p0=10, r=1, k=10),
    dict(p0=1, r=1, k=-1), dict(p0=1, r=np.inf, k=10),
])
def test_logistic_params_invariants(kwargs):
    with pytest.raises(ValueError):
        LogisticParams(**kwargs)


def test_exponential_params_invariants():
    with pytest.raises(ValueError):
        ExponentialParams(0, 1)
    with pytest.raises(ValueError):
        ExponentialParams(1, np.nan)
    ExponentialParams(1, -0.5)


def test_fitting_error_simple():
    s = elapsed([0.0], [2.0])
    assert fitting_error(s, lambda t: np.ones_like(t)) == 1.0
    s = elapsed([0.0, 1.0, 2.0], [1.0, 2.0, 4.0])
    assert fitting_error(s, lambda t: 2.0**t) == 0.0


def test_fitting_error_rejects_nonpositive_model():
    s = elapsed([0.0, 1.0], [1.0, 2.0])
    with pytest.raises(ValueError):
        fitting_error(s, lambda t: t)


logistic_params = st.builds(
    lambda frac, r, k: LogisticParams(frac * k, r, k),
    st.floats(1e-4, 0.9), st.floats(0.05, 2.0), st.floats(1.0, 1e10))


@given(logistic_params, st.floats(0.0, 20.0))
def test_ode_consistency(p, t):
    h = 1e-6
    deriv = (logistic_eval(p, t + h) - logistic_eval(p, t - h)) / (2 * h)
    rhs = logistic_ode_rhs(p, logistic_eval(p, t))
    # absolute floor covers the flat tail where both sides underflow relative precision
    assert deriv == pytest.approx(rhs, rel=1e-4, abs=1e-7 * p.k)


@given(logistic_params)
def test_monotone_and_bounded(p):
    t = np.linspace(0, 40, 400)
    v = logistic_eval(p, t)
    assert np.all(np.diff(v) >= 0)
    assert np.all(v <= p.k) and np.all(v >= p.p0 * (1 - 1e-12))
    early = logistic_eval(p, np.linspace(0, 1, 20))
    assert np.all(np.diff(early) > 0)


@given(st.floats(1e-3, 1e9), st.floats(0.01, 2.0), st.floats(0.5, 15.0))
def test_exponential_nested_in_logistic(p0, r, t_max):
    k = 1e6 * p0 * math.exp(r * t_max)
    t = np.linspace(0, t_max, 30)
    np.testing.assert_allclose(logistic_eval(LogisticParams(p0, r, k), t),
                               exp_eval(ExponentialParams(p0, r), t), rtol=1e-3)


@given(st.lists(st.floats(0.1, 1e6), min_size=1, max_size=12), st.floats(1e-3, 1e3),
       st.floats(0.5, 2.0))
@settings(max_examples=50)
def test_fitting_error_scale_covariant(obs, c, skew):
    t = np.arange(len(obs), dtype=float)
    fitted = np.asarray(obs) * skew
    s1 = elapsed(t, obs)
    s2 = elapsed(t, np.asarray(obs) * c)
    e1 = fitting_error(s1, lambda _: fitted)
    e2 = fitting_error(s2, lambda _: fitted * c)
    assert e1 == pytest.approx(e2, rel=1e-9, abs=1e-15)
