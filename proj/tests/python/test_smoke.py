import math
import pathlib

import pytest

import oscistrip

ROOT = pathlib.Path(__file__).resolve().parents[2]


def test_suites_listed():
    assert {"mu", "conc", "full"} <= set(oscistrip.suite_names())


def test_mu_closed_form():
    assert oscistrip.mu("two-plus-cos", 0.7) == pytest.approx(2.0, abs=1e-12)
    assert oscistrip.mu("constant") == pytest.approx(1.0)


def test_constant_profile_strip_area():
    for eps in (0.2, 0.1):
        value = oscistrip.conc_integral(eps, profile="constant")
        assert value == pytest.approx(2 * math.pi - math.pi * eps, abs=1e-8)


def test_callable_integrands_approach_the_limit():
    def x(a, b):
        return a

    limit = oscistrip.boundary_limit(x, x)
    assert limit == pytest.approx(2 * math.pi, rel=1e-10)
    errors = [abs(oscistrip.conc_integral(e, x, x) - limit) for e in (0.2, 0.1, 0.05)]
    assert errors[0] > errors[1] > errors[2]


def test_nonlinearity():
    f = oscistrip.Nonlinearity.bistable()
    assert f(0.5) == pytest.approx(0.375)
    assert f.derivative(0.0) == pytest.approx(1.0)
    assert f(10.0) == pytest.approx(-24.0)


def test_config_errors_are_value_errors():
    with pytest.raises(ValueError, match="ladder.epsilons"):
        oscistrip.parse_config("[ladder]\nepsilons = 0.1, 0.2\n")
    with pytest.raises(oscistrip.ConfigError):
        oscistrip.load_config("/nonexistent.ini")


def test_mu_suite_round_trip(tmp_path):
    cfg = oscistrip.load_config(str(ROOT / "configs" / "smoke.ini"))
    report = oscistrip.run_suite(cfg, "mu", str(tmp_path))
    assert report["passed"]
    assert (tmp_path / "summary.txt").read_text().strip().endswith("RESULT PASS")
    again = oscistrip.parse_config((tmp_path / "config.ini").read_text())
    assert again.echo() == cfg.echo()
