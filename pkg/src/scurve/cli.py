"""Command-line front end: ``scurve regime|scenarios|value|trends``.

Exit status: 0 success, 2 input or IO error, 3 model not applicable (no
saturation in the data), 4 numerical non-convergence.
"""
from __future__ import annotations

import argparse
import datetime as dt
import math
import os
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import svg
from .calibration import (
    ConvergenceWarning,
    NoSaturationError,
    fit_exponential,
    nested_model_test,
    regime_scan,
)
from .ingest import (
    BUILTIN_DATASETS,
    ObservationSeries,
    SeriesError,
    builtin_dataset,
    parse_date,
    parse_series,
    to_elapsed,
)
from .scenarios import WeakIdentificationWarning, build_scenarios
from .valuation import (
    DEFAULT_DISCOUNTS,
    DEFAULT_HORIZON,
    SoftNumbers,
    TrendPair,
    avg_revenue_per_user,
    fit_trend,
    plateau_scenarios,
    valuation_table,
    value_company,
)

EXIT_OK, EXIT_INPUT, EXIT_MODEL, EXIT_CONVERGENCE = 0, 2, 3, 4
FORMATS = ("csv", "markdown", "svg")


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    dataset: str
    epoch: dt.date | None
    soft: SoftNumbers
    out: Path
    seed: int = 0
    format: str = "csv"


def load_dataset(spec: str, epoch: dt.date | None = None) -> ObservationSeries:
    if spec in BUILTIN_DATASETS:
        series = builtin_dataset(spec)
        if epoch is not None:
            series = ObservationSeries(series.label, epoch, series.dates, series.values,
                                       series.metadata)
        return series
    path = Path(spec)
    try:
        with path.open() as fh:
            return parse_series(fh, epoch, label=path.stem)
    except OSError as exc:
        raise InputError(f"cannot read dataset {spec}: {exc.strerror}") from None


def _num(v: float) -> str:
    return f"{v:.10g}"


def _write(out: Path, name: str, text: str) -> Path:
    path = out / name
    path.write_text(text, encoding="utf-8")
    return path


def _csv(header, rows) -> str:
    lines = [",".join(header)]
    lines += [",".join(c if isinstance(c, str) else _num(c) for c in row) for row in rows]
    return "\n".join(lines) + "\n"


def _markdown(header, rows) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    lines += ["| " + " | ".join(c if isinstance(c, str) else f"{c:.4g}" for c in row) + " |"
              for row in rows]
    return "\n".join(lines) + "\n"


def _table(cfg, stem, header, rows):
    _write(cfg.out, f"{stem}.csv", _csv(header, rows))
    if cfg.format == "markdown":
        _write(cfg.out, f"{stem}.md", _markdown(header, rows))


# -- commands --------------------------------------------------------------

def cmd_regime(cfg: RunConfig, args) -> list[str]:
    series = to_elapsed(load_dataset(cfg.dataset, cfg.epoch))
    max_omit = args.max_omit if args.max_omit is not None else min(10, len(series) - 2)
    scan = regime_scan(series, max_omit)
    _table(cfg, "regime_errors", ("omitted", "error"),
           [(str(k), e) for k, e in scan.errors])
    if cfg.format == "svg":
        chart = svg.Chart("Exponential fitting error vs omitted points",
                          "most recent points omitted", "fitting error", log_y=True)
        chart.add("error", [k for k, _ in scan.errors], [e for _, e in scan.errors], markers=True)
        _write(cfg.out, "regime_errors.svg", chart.render())
    if scan.regime_change_detected:
        verdict = f"regime change detected (ratio ≈ {scan.jump_ratio:.1f})"
    else:
        verdict = f"no regime change (ratio ≈ {scan.jump_ratio:.1f})"
    _write(cfg.out, "regime_verdict.txt", verdict + "\n")
    return [f"full-sample error {scan.errors[0][1]:.4f}, plateau {scan.plateau_level:.4f}",
            verdict]


def _scenarios(cfg):
    obs = load_dataset(cfg.dataset, cfg.epoch)
    series = to_elapsed(obs)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", WeakIdentificationWarning)
        scen = build_scenarios(series, seed=cfg.seed)
    return series, scen


def cmd_scenarios(cfg: RunConfig, args) -> list[str]:
    series, scen = _scenarios(cfg)
    reg = scen.regression
    _table(cfg, "regression", ("quantity", "value"), [
        ("a", reg.a), ("b", reg.b), ("se_a", reg.se_a), ("se_b", reg.se_b),
        ("n_pairs", float(reg.n_pairs)), ("r", reg.a), ("k_avg", reg.k_point),
        ("k_80", scen.k_high), ("k_95", scen.k_extreme), ("p0", scen.initial.p0),
    ])
    _table(cfg, "scenarios", ("scenario", "k", "p0", "r", "error", "k_fixed"), [
        (name, f.params.k, f.params.p0, f.params.r, f.error, str(f.k_fixed).lower())
        for name, f in scen
    ])
    exp_fit = fit_exponential(series)
    p = nested_model_test(exp_fit, scen.base, len(series))
    _table(cfg, "nested_test", ("quantity", "value"),
           [("exp_error", exp_fit.error), ("logistic_error", scen.base.error),
            ("n", float(len(series))), ("p_value", p)])

    grid = np.linspace(0.0, series.t[-1] + 5.0, 121)
    curves = {name: f(grid) for name, f in scen}
    _write(cfg.out, "observations.csv",
           _csv(("t", "value"), list(zip(series.t, series.values))))
    _write(cfg.out, "curves.csv", _csv(("t",) + tuple(curves),
                                       [(t,) + tuple(c[i] for c in curves.values())
                                        for i, t in enumerate(grid)]))
    if cfg.format == "svg":
        chart = svg.Chart(f"{series.label}: logistic scenarios", "years since epoch", "count")
        chart.add("observed", series.t, series.values, markers=True, line=False)
        for name, c in curves.items():
            chart.add(name, grid, c)
        _write(cfg.out, "scenarios.svg", chart.render())

    unit = 1e9 if scen.base.params.k >= 1e9 / 2 else 1e6
    word = "billion" if unit == 1e9 else "million"
    lines = [f"{name:8s} K = {f.params.k / unit:.2f} {word}, r = {f.params.r:.2f}/yr, "
             f"P0 = {f.params.p0 / 1e3:.0f} thousand, error = {f.error:.3f}"
             for name, f in scen]
    lines.append(f"nested-model test: p = {p:.2g}")
    return lines


def cmd_value(cfg: RunConfig, args) -> list[str]:
    if args.plateaus:
        scen = plateau_scenarios(args.plateaus)
        from_t = 0.0
    else:
        series, scen = _scenarios(cfg)
        from_t = float(series.t[-1])
    table = valuation_table(scen, from_t, args.discounts, cfg.soft.horizon_years)
    _write(cfg.out, "valuation_table.csv", table.to_csv())
    if cfg.format == "markdown":
        _write(cfg.out, "valuation_table.md", table.to_markdown())
    if cfg.format == "svg":
        chart = svg.Chart("Normalized value (1 USD per user per year)", "discount rate (%)",
                          "billion USD")
        for name in table.scenarios:
            chart.add(name, [100 * d for d in table.discounts], table.column(name) / 1e9,
                      markers=True)
        _write(cfg.out, "valuation_table.svg", chart.render())

    result = value_company(scen, from_t, cfg.soft)
    _table(cfg, "company_value", ("scenario", "value_usd"),
           [(name, v) for name, v in result.per_scenario.items()])
    lines = [table.to_markdown().rstrip(),
             f"profit per user: {cfg.soft.profit_per_user:.2f} USD per year "
             f"({cfg.soft.profit_margin:.0%} margin x {cfg.soft.revenue_per_user:g} USD)"]
    lines += [f"{name:8s} {v / 1e9:.1f} billion USD at {cfg.soft.discount_rate:.0%}"
              for name, v in result.per_scenario.items()]
    return lines


def cmd_trends(cfg: RunConfig, args) -> list[str]:
    users_obs = load_dataset(cfg.dataset, cfg.epoch)
    rev_spec = args.revenue
    if rev_spec is None:
        if cfg.dataset != "facebook-users":
            raise InputError("trends needs a revenue series: pass --revenue")
        rev_spec = "facebook-revenues"
    rev_obs = load_dataset(rev_spec, cfg.epoch or users_obs.epoch)
    if rev_obs.epoch != users_obs.epoch:
        raise InputError("user and revenue series have different epochs")
    users, revenue = to_elapsed(users_obs), to_elapsed(rev_obs)
    trends = TrendPair(fit_trend(revenue), fit_trend(users))
    age = args.age if args.age is not None else round(2 * users.t[-1]) / 2
    if args.window < 1 or age < args.window:
        raise InputError(f"window of {args.window} years exceeds company age {age:g}")
    avg = avg_revenue_per_user(trends, age, args.window)
    half = trends.half_life
    half_txt = "none (no decay)" if math.isinf(half) else f"{half:.2f}"
    ratio0 = trends.revenue_trend.p0 / trends.user_trend.p0
    _table(cfg, "trends", ("quantity", "value"), [
        ("revenue_level", trends.revenue_trend.p0), ("revenue_rate", trends.revenue_trend.r),
        ("user_level", trends.user_trend.p0), ("user_rate", trends.user_trend.r),
        ("ratio_at_epoch", ratio0), ("rate_gap", trends.rate_gap),
        ("half_life_years", half_txt), ("age_years", age),
        ("window_years", float(args.window)), ("avg_revenue_per_user", avg),
    ])
    return [f"revenue trend {trends.revenue_trend.p0:.3g} e^({trends.revenue_trend.r:.2f} t)",
            f"user trend    {trends.user_trend.p0:.3g} e^({trends.user_trend.r:.2f} t)",
            f"revenue per user ratio at launch {ratio0:.2f}, half-life: {half_txt}",
            f"{args.window}-year average revenue per user at age {age:g}: {avg:.2f} USD"]


COMMANDS = {"regime": cmd_regime, "scenarios": cmd_scenarios,
            "value": cmd_value, "trends": cmd_trends}


# -- argument parsing ------------------------------------------------------

def _rates(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad rate list {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty rate list")
    # whole-number entries are percentages
    out = [v / 100 if v >= 1 else v for v in vals]
    if any(v <= 0 for v in out):
        raise argparse.ArgumentTypeError("rates must be positive")
    return out


def _counts(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad plateau list {text!r}") from None
    if len(vals) != 3 or any(v <= 0 for v in vals):
        raise argparse.ArgumentTypeError("need three positive plateaus: base,high,extreme")
    return vals


def _epoch(text: str) -> dt.date:
    try:
        return parse_date(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dataset", default="facebook-users",
                        help="built-in dataset name or path to a date,value CSV")
    common.add_argument("--epoch", type=_epoch, help="t = 0 date (YYYY-MM or YYYY-MM-DD)")
    common.add_argument("--discounts", type=_rates, default=list(DEFAULT_DISCOUNTS),
                        help="comma-separated discount rates, e.g. 2,3,5 or 0.05")
    common.add_argument("--rate", type=float, default=0.05,
                        help="discount rate for the company valuation (default 0.05)")
    common.add_argument("--margin", type=float, default=0.29, help="profit margin")
    common.add_argument("--rev-per-user", type=float, default=3.5,
                        help="revenue per user per year, USD")
    common.add_argument("--horizon", type=int, default=DEFAULT_HORIZON, help="years of cash flows")
    common.add_argument("--seed", type=int, default=0, help="optimizer restart seed")
    common.add_argument("--out", type=Path, help="output directory (falls back to $SCURVE_OUT)")
    common.add_argument("--format", choices=FORMATS, default="csv")

    parser = argparse.ArgumentParser(
        prog="scurve", description="Logistic user-growth calibration and valuation.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("regime", parents=[common], help="exponential omission scan")
    p.add_argument("--max-omit", type=int, default=None)
    sub.add_parser("scenarios", parents=[common], help="calibrate the three scenarios")
    p = sub.add_parser("value", parents=[common], help="discount sweep and company value")
    p.add_argument("--plateaus", type=_counts,
                   help="value saturated scenarios at these ceilings instead of fitting")
    p = sub.add_parser("trends", parents=[common], help="revenue and user trends")
    p.add_argument("--revenue", help="revenue series (dataset name or path)")
    p.add_argument("--window", type=int, default=5)
    p.add_argument("--age", type=float, help="company age in years (default: last user observation)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        soft = SoftNumbers(args.rate, args.margin, args.rev_per_user, args.horizon)
    except ValueError as exc:
        parser.print_usage(sys.stderr)
        print(f"scurve: error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    out = args.out or Path(os.environ.get("SCURVE_OUT", "."))
    cfg = RunConfig(args.dataset, args.epoch, soft, Path(out), args.seed, args.format)
    try:
        cfg.out.mkdir(parents=True, exist_ok=True)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", ConvergenceWarning)
            lines = COMMANDS[args.command](cfg, args)
    except NoSaturationError as exc:
        print(f"scurve: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except (InputError, SeriesError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) else exc
        print(f"scurve: {msg}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"scurve: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print("\n".join(lines))
    if any(issubclass(w.category, ConvergenceWarning) for w in caught):
        print("scurve: optimizer did not converge; results are best-so-far", file=sys.stderr)
        return EXIT_CONVERGENCE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
