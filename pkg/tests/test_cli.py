import csv
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from scurve.cli import EXIT_INPUT, EXIT_MODEL, EXIT_OK, main


def run(tmp_path, *argv, sub="out"):
    out = tmp_path / sub
    code = main(list(argv) + ["--out", str(out)])
    return code, out


def read_table(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


@pytest.fixture
def exp_csv(tmp_path):
    rows = ["date,value"] + [f"{2000 + i}-06-01,{1000 * np.exp(0.6 * i):.6f}" for i in range(14)]
    path = tmp_path / "exp.csv"
    path.write_text("\n".join(rows) + "\n")
    return path


def test_regime_facebook(tmp_path, capsys):
    code, out = run(tmp_path, "regime", "--format", "svg")
    assert code == EXIT_OK
    text = capsys.readouterr().out
    assert "regime change detected (ratio ≈" in text
    rows = read_table(out / "regime_errors.csv")
    assert [int(r["omitted"]) for r in rows] == list(range(11))
    ET.fromstring((out / "regime_errors.svg").read_text())


def test_regime_synthetic_exponential(tmp_path, exp_csv, capsys):
    code, _ = run(tmp_path, "regime", "--dataset", str(exp_csv))
    assert code == EXIT_OK
    assert "no regime change" in capsys.readouterr().out


def test_missing_file(tmp_path, capsys):
    missing = tmp_path / "nope.csv"
    code, _ = run(tmp_path, "regime", "--dataset", str(missing))
    assert code == EXIT_INPUT
    assert str(missing) in capsys.readouterr().err


def test_malformed_file(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("date,value\n2004-01,10\n2004-02,oops\n")
    code, _ = run(tmp_path, "scenarios", "--dataset", str(bad))
    assert code == EXIT_INPUT
    assert "line 3" in capsys.readouterr().err


def test_scenarios_facebook(tmp_path, capsys):
    code, out = run(tmp_path, "scenarios", "--format", "svg")
    assert code == EXIT_OK
    rows = {r["scenario"]: r for r in read_table(out / "scenarios.csv")}
    ks = [float(rows[n]["k"]) / 1e9 for n in ("base", "high", "extreme")]
    np.testing.assert_allclose(ks, [0.84, 1.11, 1.82], rtol=0.05)
    reg = {r["quantity"]: float(r["value"]) for r in read_table(out / "regression.csv")}
    assert set(reg) >= {"a", "b", "k_avg", "k_80", "k_95", "p0"}
    nested = {r["quantity"]: float(r["value"]) for r in read_table(out / "nested_test.csv")}
    assert nested["p_value"] < 0.001
    curves = read_table(out / "curves.csv")
    assert list(curves[0]) == ["t", "base", "high", "extreme"]
    ET.fromstring((out / "scenarios.svg").read_text())
    assert "K = 1.11 billion" in capsys.readouterr().out


def test_scenarios_groupon(tmp_path):
    code, out = run(tmp_path, "scenarios", "--dataset", "groupon-repeat-customers")
    assert code == EXIT_OK
    ks = [float(r["k"]) for r in read_table(out / "scenarios.csv")]
    np.testing.assert_allclose(ks, [17.4e6, 21.1e6, 27.0e6], rtol=0.05)


def test_scenarios_pure_exponential(tmp_path, exp_csv, capsys):
    code, _ = run(tmp_path, "scenarios", "--dataset", str(exp_csv))
    assert code == EXIT_MODEL
    assert "no saturation" in capsys.readouterr().err


def test_value_defaults(tmp_path, capsys):
    code, out = run(tmp_path, "value", "--format", "markdown")
    assert code == EXIT_OK
    rows = read_table(out / "valuation_table.csv")
    assert len(rows) == 9 and len(rows[0]) == 4
    assert (out / "valuation_table.md").exists()
    text = capsys.readouterr().out
    assert "profit per user: 1.01 USD" in text
    company = {r["scenario"]: float(r["value_usd"]) for r in read_table(out / "company_value.csv")}
    np.testing.assert_allclose([company[n] for n in ("base", "high", "extreme")],
                               [15.3e9, 20.2e9, 32.9e9], rtol=0.03)


def test_value_single_discount(tmp_path):
    code, out = run(tmp_path, "value", "--discounts", "5")
    assert code == EXIT_OK
    rows = read_table(out / "valuation_table.csv")
    assert len(rows) == 1 and float(rows[0]["discount"]) == 0.05


def test_value_groupon(tmp_path):
    code, out = run(tmp_path, "value", "--dataset", "groupon-repeat-customers",
                    "--margin", "0.20", "--rev-per-user", "78")
    assert code == EXIT_OK
    company = {r["scenario"]: float(r["value_usd"]) for r in read_table(out / "company_value.csv")}
    # figure-transcribed data: loose agreement only
    assert company["high"] == pytest.approx(6.0e9, rel=0.1)
    assert company["extreme"] == pytest.approx(7.7e9, rel=0.1)


def test_value_plateaus(tmp_path):
    code, out = run(tmp_path, "value", "--plateaus", "17.4e6,21.1e6,27.0e6",
                    "--margin", "0.2", "--rev-per-user", "78")
    assert code == EXIT_OK
    company = {r["scenario"]: float(r["value_usd"]) for r in read_table(out / "company_value.csv")}
    assert company["high"] == pytest.approx(6.0e9, rel=0.03)
    assert company["extreme"] == pytest.approx(7.7e9, rel=0.03)


@pytest.mark.parametrize("flags", [["--margin", "1.5"], ["--rev-per-user", "-2"],
                                   ["--rate", "0"], ["--horizon", "0"]])
def test_value_invalid_soft_numbers(tmp_path, flags, capsys):
    code, _ = run(tmp_path, "value", *flags)
    assert code == EXIT_INPUT
    assert "usage:" in capsys.readouterr().err


def test_trends_facebook(tmp_path, capsys):
    code, out = run(tmp_path, "trends")
    assert code == EXIT_OK
    vals = {r["quantity"]: r["value"] for r in read_table(out / "trends.csv")}
    assert float(vals["half_life_years"]) == pytest.approx(3.5, abs=0.3)
    assert float(vals["avg_revenue_per_user"]) == pytest.approx(3.5, abs=0.2)
    assert float(vals["age_years"]) == 7.5


def test_trends_identical_series(tmp_path, capsys):
    code, out = run(tmp_path, "trends", "--revenue", "facebook-users")
    assert code == EXIT_OK
    vals = {r["quantity"]: r["value"] for r in read_table(out / "trends.csv")}
    assert float(vals["ratio_at_epoch"]) == pytest.approx(1.0)
    assert vals["half_life_years"] == "none (no decay)"


def test_trends_window_too_long(tmp_path, capsys):
    code, _ = run(tmp_path, "trends", "--window", "9")
    assert code == EXIT_INPUT
    assert "window" in capsys.readouterr().err


def test_trends_needs_revenue(tmp_path, capsys):
    code, _ = run(tmp_path, "trends", "--dataset", "groupon-repeat-customers")
    assert code == EXIT_INPUT


def test_unknown_builtin_is_treated_as_path(tmp_path):
    code, _ = run(tmp_path, "regime", "--dataset", "myspace-users")
    assert code == EXIT_INPUT


def test_env_output_fallback(tmp_path, monkeypatch):
    monkeypatch.setenv("SCURVE_OUT", str(tmp_path / "env"))
    assert main(["regime"]) == EXIT_OK
    assert (tmp_path / "env" / "regime_errors.csv").exists()


@pytest.mark.parametrize("command", ["regime", "scenarios", "value", "trends"])
def test_reruns_are_byte_identical(tmp_path, command):
    _, a = run(tmp_path, command, "--seed", "0", sub="a")
    _, b = run(tmp_path, command, "--seed", "0", sub="b")
    files = sorted(p.name for p in a.iterdir())
    assert files == sorted(p.name for p in b.iterdir())
    for name in files:
        assert (a / name).read_bytes() == (b / name).read_bytes(), name


def test_observations_csv_reparses(tmp_path):
    from scurve.ingest import builtin_dataset, to_elapsed
    _, out = run(tmp_path, "scenarios")
    rows = read_table(out / "observations.csv")
    fb = to_elapsed(builtin_dataset("facebook-users"))
    np.testing.assert_allclose([float(r["t"]) for r in rows], fb.t, rtol=1e-9)
    np.testing.assert_allclose([float(r["value"]) for r in rows], fb.values, rtol=1e-9)
