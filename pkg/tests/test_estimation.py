import math

import numpy as np
import pytest

from nigarch import (DataError, GarchParams, InnovationSpec, ParameterError, QmleFit,
                     ReturnSeries, expanding_window_fit, fit, load_returns, qmle_loglik,
                     simulate)


def test_loglik_hand_value_two_observations():
    # y = (1, 1), omega so that sigma_2^2 = 1: term is log 1 + 1 = 1, loglik = -1/2
    series = ReturnSeries(np.array([1.0, 1.0]))
    params = GarchParams(omega=0.5, alpha=0.25, beta=0.25)
    # sigma_1^2 = mean(y^2) = 1, sigma_2^2 = 0.5 + 0.25*1 + 0.25*1 = 1
    assert qmle_loglik(params, series) == pytest.approx(-0.5, rel=1e-14)


def test_loglik_hand_value_sigma_two():
    # sigma_2^2 = 2 with y_2^2 = 1: loglik = -(1/2)(log 2 + 1/2)
    series = ReturnSeries(np.array([1.0, 1.0]))
    params = GarchParams(omega=1.5, alpha=0.25, beta=0.25)
    assert qmle_loglik(params, series) == pytest.approx(-0.5 * (math.log(2.0) + 0.5),
                                                        rel=1e-14)


def test_loglik_scaling_equivariance():
    """loglik(c*y; c^2 omega, alpha, beta) = loglik(y; omega, alpha, beta) - (N-1) log c."""
    rng = np.random.default_rng(3)
    y = rng.standard_normal(200) * 0.5
    params = GarchParams(omega=0.1, alpha=0.08, beta=0.85)
    base = qmle_loglik(params, ReturnSeries(y))
    for c in (2.0, 10.0):
        scaled = qmle_loglik(GarchParams(omega=c * c * 0.1, alpha=0.08, beta=0.85),
                             ReturnSeries(c * y))
        assert scaled == pytest.approx(base - (y.size - 1) * math.log(c), rel=1e-12)


def test_loglik_input_validation():
    with pytest.raises(ParameterError):
        qmle_loglik(GarchParams(1.0, 0.1, 0.8), ReturnSeries(np.array([1.0])))
    with pytest.raises(ParameterError):
        ReturnSeries(np.array([1.0, np.nan]))


def _simulated_series(omega=0.1, alpha=0.05, beta=0.90, n=5000, seed=6):
    params = GarchParams(omega=omega, alpha=alpha, beta=beta)
    path = simulate(params, InnovationSpec.standard_normal(), n,
                    omega / (1.0 - alpha - beta), seed)
    return ReturnSeries(path.y[1:]), params


def test_fit_recovers_simulated_parameters():
    series, truth = _simulated_series()
    result = fit(series)
    assert result.converged
    p = result.params
    assert p.alpha + p.beta == pytest.approx(0.95, abs=0.02)
    assert p.alpha == pytest.approx(0.05, abs=0.02)
    # the fitted likelihood can never fall below the truth's
    assert result.loglik >= qmle_loglik(truth, series) - 1e-9


def test_fit_is_a_local_maximum():
    series, _ = _simulated_series(n=2000, seed=9)
    result = fit(series)
    u = np.log([result.params.omega, result.params.alpha, result.params.beta])
    for i in range(3):
        for d in (-1e-3, 1e-3):
            v = u.copy()
            v[i] += d
            perturbed = GarchParams(*np.exp(v))
            assert qmle_loglik(perturbed, series) <= result.loglik + 1e-7


def test_fit_negative_control_reversed_series_differs_little_but_runs():
    # reversing the series changes the conditioning order; the fit must still
    # run and produce a finite likelihood, generally different from the forward one
    series, _ = _simulated_series(n=1000, seed=2)
    forward = fit(series)
    backward = fit(ReturnSeries(series.values[::-1].copy()))
    assert math.isfinite(backward.loglik)
    assert forward.loglik != backward.loglik


def test_gamma_is_recomputed():
    result = QmleFit(params=GarchParams(omega=1.0, alpha=0.007391279, beta=0.992564947),
                     loglik=0.0, converged=True, iterations=10)
    assert result.gamma == pytest.approx(-4.3774e-05, rel=1e-4)
    assert f"{result.gamma:.4e}" == "-4.3774e-05"


def test_fit_rejects_short_or_degenerate_series():
    with pytest.raises(ParameterError):
        fit(ReturnSeries(np.ones(10) * 0.1))
    with pytest.raises(ParameterError):
        fit(ReturnSeries(np.zeros(100)))


def test_expanding_window_rows():
    series, _ = _simulated_series(n=1200, seed=4)
    rows = expanding_window_fit(series, [500, 200, 1000])
    assert [r.n for r in rows] == [200, 500, 1000]
    for r in rows:
        assert r.gamma == pytest.approx(r.alpha + r.beta - 1.0, rel=1e-12)
    with pytest.raises(ParameterError):
        expanding_window_fit(series, [5000])


def test_load_returns_plain(tmp_path):
    p = tmp_path / "r.csv"
    p.write_text("0.01\n-0.02\n0.005\n")
    series = load_returns(p)
    assert series.origin == "raw-returns"
    assert np.allclose(series.values, [0.01, -0.02, 0.005])


def test_load_returns_header_column_and_blank_lines(tmp_path):
    p = tmp_path / "r.csv"
    p.write_text("date,ret\n2020-01-01,0.01\n\n2020-01-02,-0.02\n")
    series = load_returns(p, column=1, has_header=True)
    assert np.allclose(series.values, [0.01, -0.02])


def test_load_returns_parse_error_reports_line(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("\n".join(["0.1"] * 6 + ["oops", "0.2"]) + "\n")
    with pytest.raises(DataError) as exc:
        load_returns(p)
    assert exc.value.line == 7
    assert "oops" in str(exc.value)


def test_load_returns_prices_mode(tmp_path):
    p = tmp_path / "prices.csv"
    p.write_text("100\n101\n99.5\n")
    series = load_returns(p, prices_mode=True)
    assert series.origin == "log-differenced-prices"
    assert np.allclose(series.values,
                       [math.log(101 / 100), math.log(99.5 / 101)])
    bad = tmp_path / "badprices.csv"
    bad.write_text("100\n-5\n101\n")
    with pytest.raises(DataError):
        load_returns(bad, prices_mode=True)


def test_load_returns_missing_column_and_empty(tmp_path):
    p = tmp_path / "narrow.csv"
    p.write_text("0.1\n0.2\n")
    with pytest.raises(DataError):
        load_returns(p, column=3)
    empty = tmp_path / "empty.csv"
    empty.write_text("\n\n")
    with pytest.raises(DataError):
        load_returns(empty)
