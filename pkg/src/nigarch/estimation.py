"""Gaussian quasi-maximum-likelihood fitting of GARCH(1,1).

The likelihood is computed under the working assumption of standard
normal innovations regardless of the true law. Conventions, frozen for
reproducibility: sigma_1^2 is the mean of the squared returns, and the
likelihood sums over k = 2..N with additive constants dropped,

    loglik = -(1/2) sum_{k=2..N} (log sigma_k^2 + y_k^2 / sigma_k^2).

The optimizer works on (log omega, log alpha, log beta), which enforces
omega > 0, alpha > 0, beta > 0 but deliberately not alpha + beta < 1:
estimates on real return series can and do land outside the stationarity
region.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy.optimize import minimize

from .errors import DataError, ParameterError
from .garch import GarchParams

MIN_FIT_LENGTH = 50
INIT_SIGMA_SQ_CONVENTION = "mean-squared-returns"

# simplex termination: loglik spread below this, or the iteration cap
LOGLIK_SPREAD_TOL = 1e-8
MAX_ITERATIONS = 2000


@dataclass(frozen=True)
class ReturnSeries:
    """A series of (log) returns."""

    values: np.ndarray
    origin: str = "raw-returns"  # or "log-differenced-prices"

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if values.ndim != 1 or values.size == 0:
            raise ParameterError("returns must be a nonempty 1-d array")
        if not np.isfinite(values).all():
            raise ParameterError("returns contain non-finite values")

    def __len__(self):
        return self.values.size


@dataclass(frozen=True)
class QmleFit:
    params: GarchParams
    loglik: float
    converged: bool
    iterations: int
    init_sigma_sq: str = INIT_SIGMA_SQ_CONVENTION

    @property
    def gamma(self) -> float:
        """Always recomputed from the fitted parameters."""
        return self.params.gamma


@njit(cache=True)
def _qmle_core(omega, alpha, beta, y, sigma1_sq):
    total = 0.0
    sig = sigma1_sq
    for k in range(1, y.shape[0]):
        sig = omega + alpha * y[k - 1] * y[k - 1] + beta * sig
        if not (sig > 0.0) or not math.isfinite(sig):
            return np.nan
        total += math.log(sig) + y[k] * y[k] / sig
    return -0.5 * total


def qmle_loglik(params: GarchParams, series: ReturnSeries) -> float:
    """Gaussian quasi-log-likelihood (additive constants dropped)."""
    y = series.values
    if y.size < 2:
        raise ParameterError("need at least 2 observations")
    sigma1_sq = float(np.mean(y**2))
    value = _qmle_core(params.omega, params.alpha, params.beta, y, sigma1_sq)
    if math.isnan(value):
        raise ParameterError("non-finite likelihood: conditional variance left (0, inf)")
    return float(value)


def _default_starts(sample_var: float):
    # span persistent and non-persistent basins
    return (
        (sample_var * 0.1, 0.05, 0.85),
        (sample_var * 0.05, 0.10, 0.80),
        (sample_var * 0.01, 0.01, 0.98),
    )


def fit(series: ReturnSeries, init: GarchParams | None = None,
        max_iterations: int = MAX_ITERATIONS) -> QmleFit:
    """Maximize the quasi-likelihood with a multi-start Nelder-Mead simplex.

    Each start runs scipy's Nelder-Mead (standard reflection 1, expansion 2,
    contraction 0.5, shrink 0.5 coefficients) on the log-parameterization,
    stopping once the simplex loglik spread is below 1e-8 or after 2000
    iterations; the best final point wins. Non-convergence is flagged on
    the result, never raised.
    """
    y = series.values
    if y.size < MIN_FIT_LENGTH:
        raise ParameterError(f"need N >= {MIN_FIT_LENGTH} observations to fit, got {y.size}")
    sample_var = float(np.var(y))
    if sample_var == 0.0:
        raise ParameterError("degenerate series: zero variance")
    sigma1_sq = float(np.mean(y**2))

    def negloglik(u):
        omega, alpha, beta = np.exp(u)
        value = _qmle_core(omega, alpha, beta, y, sigma1_sq)
        return 1e300 if math.isnan(value) else -value

    starts = list(_default_starts(sample_var))
    if init is not None:
        starts.insert(0, (init.omega, max(init.alpha, 1e-12), max(init.beta, 1e-12)))

    best = None
    for start in starts:
        result = minimize(negloglik, np.log(start), method="Nelder-Mead",
                          options={"fatol": LOGLIK_SPREAD_TOL, "xatol": 1e-6,
                                   "maxiter": max_iterations, "maxfev": 4 * max_iterations})
        if best is None or result.fun < best.fun:
            best = result

    omega, alpha, beta = np.exp(best.x)
    return QmleFit(
        params=GarchParams(omega=float(omega), alpha=float(alpha), beta=float(beta)),
        loglik=float(-best.fun),
        converged=bool(best.success),
        iterations=int(best.nit),
    )


@dataclass(frozen=True)
class WindowFit:
    """One row of the expanding-window table."""

    n: int
    alpha: float
    beta: float
    gamma: float
    loglik: float
    converged: bool


def expanding_window_fit(series: ReturnSeries, windows) -> list[WindowFit]:
    """Fit each prefix {1..n} for n in windows; rows ordered by window size."""
    windows = sorted(int(w) for w in windows)
    if windows and windows[-1] > len(series):
        raise ParameterError(f"window {windows[-1]} exceeds series length {len(series)}")
    rows = []
    for w in windows:
        f = fit(ReturnSeries(series.values[:w], origin=series.origin))
        rows.append(WindowFit(n=w, alpha=f.params.alpha, beta=f.params.beta,
                              gamma=f.gamma, loglik=f.loglik, converged=f.converged))
    return rows


def load_returns(path, column: int = 0, has_header: bool = False,
                 prices_mode: bool = False, delimiter: str = ",") -> ReturnSeries:
    """Read a return (or price) series from delimiter-separated text.

    In prices mode the series is log-differenced: r_t = log(p_t / p_{t-1}).
    Parse failures report the 1-based line number.
    """
    values = []
    with open(path, newline="") as handle:
        reader = csv.reader(handle, delimiter=delimiter)
        for line_no, row in enumerate(reader, start=1):
            if has_header and line_no == 1:
                continue
            if not row or all(not cell.strip() for cell in row):
                continue
            if column >= len(row):
                raise DataError(f"missing column {column}", line=line_no)
            cell = row[column].strip()
            try:
                values.append(float(cell))
            except ValueError:
                raise DataError(f"could not parse {cell!r} as a number", line=line_no) from None
    if not values:
        raise DataError(f"no data rows in {path}")
    data = np.asarray(values)
    if prices_mode:
        if np.any(data <= 0):
            bad = int(np.flatnonzero(data <= 0)[0])
            raise DataError(f"non-positive price {data[bad]} at row {bad + 1} in prices mode")
        return ReturnSeries(np.diff(np.log(data)), origin="log-differenced-prices")
    return ReturnSeries(data, origin="raw-returns")
