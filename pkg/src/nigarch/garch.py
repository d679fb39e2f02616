"""GARCH(1,1) path generation and pathwise identities.

The conditional-variance recursion is

    sigma_k^2 = omega + alpha * y_{k-1}^2 + beta * sigma_{k-1}^2,
    y_k       = sigma_k * eps_k,

started from a caller-supplied sigma_0^2 with y_0 = sigma_0 * eps_0.
Besides the recursion, two equivalent evaluations of sigma_k^2 are
provided: the multiplicative product expansion over the innovation
history, and the additive (geometric + centered-squared-innovation)
approximation whose remainder scales like k*(alpha^2 + gamma^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import ExplosionError, ParameterError
from .innovations import InnovationSpec


@dataclass(frozen=True)
class GarchParams:
    """The (omega, alpha, beta) triple; omega > 0, alpha >= 0, beta >= 0."""

    omega: float
    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.omega > 0):
            raise ParameterError(f"omega must be positive, got {self.omega}")
        if not (self.alpha >= 0):
            raise ParameterError(f"alpha must be nonnegative, got {self.alpha} (alpha >= 0)")
        if not (self.beta >= 0):
            raise ParameterError(f"beta must be nonnegative, got {self.beta} (beta >= 0)")

    @property
    def gamma(self) -> float:
        """Persistence gap alpha + beta - 1, always derived, never stored."""
        return self.alpha + self.beta - 1.0


@dataclass
class Path:
    """One simulated trajectory; arrays are indexed 0..n."""

    n: int
    sigma_sq: np.ndarray
    y: np.ndarray
    eps: np.ndarray

    def __post_init__(self):
        if not (len(self.sigma_sq) == len(self.y) == len(self.eps) == self.n + 1):
            raise ParameterError("path arrays must all have length n+1")


@dataclass(frozen=True)
class AdditiveDecomposition:
    """Additive approximation of sigma_k^2 versus the exact recursion."""

    k: int
    main_value: float
    exact_value: float
    relative_error: float
    predicted_order: float


@njit(cache=True)
def _filter(omega, alpha, beta, sigma0_sq, eps):
    n = eps.shape[0] - 1
    sigma_sq = np.empty(n + 1)
    y = np.empty(n + 1)
    sigma_sq[0] = sigma0_sq
    y[0] = math.sqrt(sigma0_sq) * eps[0]
    for k in range(1, n + 1):
        s = omega + alpha * y[k - 1] * y[k - 1] + beta * sigma_sq[k - 1]
        sigma_sq[k] = s
        y[k] = math.sqrt(s) * eps[k]
    return sigma_sq, y


def _check_finite(sigma_sq):
    bad = np.flatnonzero(~np.isfinite(sigma_sq))
    if bad.size:
        raise ExplosionError(int(bad[0]))


def simulate_with_innovations(params: GarchParams, eps, sigma0_sq: float) -> Path:
    """Run the variance recursion with caller-supplied innovations."""
    eps = np.ascontiguousarray(eps, dtype=float)
    if eps.size == 0:
        raise ParameterError("eps must be nonempty")
    if not (sigma0_sq > 0):
        raise ParameterError(f"sigma0_sq must be positive, got {sigma0_sq}")
    sigma_sq, y = _filter(params.omega, params.alpha, params.beta, float(sigma0_sq), eps)
    _check_finite(sigma_sq)
    return Path(n=eps.size - 1, sigma_sq=sigma_sq, y=y, eps=eps)


def default_sigma0_sq(params: GarchParams, n: int) -> float:
    """Rough stationary/typical scale: omega/|gamma| when gamma != 0, else omega*n."""
    g = params.gamma
    return params.omega / abs(g) if g != 0 else params.omega * n


def simulate(params: GarchParams, innovation: InnovationSpec, n: int,
             sigma0_sq: float, seed: int) -> Path:
    """Simulate a path of length n with i.i.d. innovations from a seeded stream."""
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    eps = innovation.sample(rng, n + 1)
    return simulate_with_innovations(params, eps, sigma0_sq)


def simulate_batch(params: GarchParams, innovation: InnovationSpec, n: int,
                   sigma0_sq: float, seeds, record_indices):
    """Simulate many independent paths, recording sigma_sq and y only at the
    given indices.

    One path per entry of ``seeds``; the r-th output row depends only on
    seeds[r], so results are independent of any chunking of the seed list.
    Returns (sigma_sq, y) arrays of shape (len(seeds), len(record_indices)).
    Raises ExplosionError naming the offending replication index if a
    recorded value is non-finite.
    """
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    record = np.asarray(record_indices, dtype=np.int64)
    if record.size and (record.min() < 0 or record.max() > n):
        raise ParameterError("record indices must lie in 0..n")
    r_count = len(seeds)
    eps = np.empty((r_count, n + 1))
    for r, seed in enumerate(seeds):
        eps[r] = innovation.sample(np.random.default_rng(seed), n + 1)
    return recursion_batch(params, eps, sigma0_sq, record)


def recursion_batch(params: GarchParams, eps: np.ndarray, sigma0_sq: float, record_indices):
    """Vectorized recursion over a (R, n+1) innovation matrix.

    Elementwise identical to running simulate_with_innovations row by row.
    """
    record = np.asarray(record_indices, dtype=np.int64)
    slots = {int(k): j for j, k in enumerate(record)}
    r_count, cols = eps.shape
    n = cols - 1
    omega, alpha, beta = params.omega, params.alpha, params.beta
    sig = np.full(r_count, float(sigma0_sq))
    y = np.sqrt(sig) * eps[:, 0]
    out_sig = np.empty((r_count, record.size))
    out_y = np.empty((r_count, record.size))
    if 0 in slots:
        out_sig[:, slots[0]] = sig
        out_y[:, slots[0]] = y
    for k in range(1, n + 1):
        sig = omega + alpha * y * y + beta * sig
        y = np.sqrt(sig) * eps[:, k]
        if k in slots:
            j = slots[k]
            out_sig[:, j] = sig
            out_y[:, j] = y
    bad = np.flatnonzero(~np.isfinite(out_sig).all(axis=1))
    if bad.size:
        raise ExplosionError(int(bad[0]), f"sigma_sq non-finite in replication {int(bad[0])}")
    return out_sig, out_y


def volterra_sigma_sq(params: GarchParams, sigma0_sq: float, eps, k: int) -> float:
    """Product-expansion evaluation of sigma_k^2 over the innovation history.

    sigma0^2 * prod_{i=1..k}(beta + alpha*eps_{k-i}^2)
      + omega * [1 + sum_{j=1..k-1} prod_{i=1..j}(beta + alpha*eps_{k-i}^2)]

    Partial products are accumulated in one backward pass, O(k).
    """
    eps = np.asarray(eps, dtype=float)
    if not 1 <= k <= eps.size:
        raise ParameterError(f"need 1 <= k <= len(eps), got k={k}")
    if not (sigma0_sq > 0):
        raise ParameterError(f"sigma0_sq must be positive, got {sigma0_sq}")
    # i = 1..k walks eps indices k-1 down to 0
    factors = params.beta + params.alpha * eps[k - 1::-1] ** 2
    partial = np.cumprod(factors)
    value = sigma0_sq * partial[-1] + params.omega * (1.0 + partial[:-1].sum())
    if not np.isfinite(value):
        raise ExplosionError(k)
    return float(value)


def volterra_sigma_sq_all(params: GarchParams, sigma0_sq: float, eps) -> np.ndarray:
    """Product-expansion values of sigma_k^2 for every k = 1..len(eps) at once.

    Uses running-product ratios C_k / C_m, so it is O(n) but can under- or
    overflow for strongly non-integrated parameters over long horizons;
    intended for near-integrated settings where log C_k stays moderate.
    """
    eps = np.asarray(eps, dtype=float)
    factors = params.beta + params.alpha * eps**2
    c = np.cumprod(factors)  # c[m-1] = prod of the first m factors
    inv_sum = np.concatenate(([0.0], np.cumsum(1.0 / c)))  # sum_{m<=j} 1/C_m
    values = c * (sigma0_sq + params.omega * inv_sum[:-1]) + params.omega
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        raise ExplosionError(int(bad[0]) + 1)
    return values


def additive_sigma_sq(params: GarchParams, sigma0_sq: float, eps, k: int) -> AdditiveDecomposition:
    """Additive approximation of sigma_k^2 with all remainder terms dropped:

        sigma0^2 e^{k*gamma} (1 + alpha * sum_{j<=k} xi_{k-j})
          + omega [1 + sum_{j<=k-1} e^{j*gamma} (1 + alpha * sum_{i<=j} xi_{k-i})]

    with xi_j = eps_j^2 - 1. The inner double sum is rearranged to
    sum_i (sum_{j>=i} e^{j*gamma}) xi_{k-i}, computed in O(k). The exact
    value comes from the recursion; the expected relative-error scale is
    k*(alpha^2 + gamma^2).
    """
    eps = np.asarray(eps, dtype=float)
    if not 1 <= k <= eps.size:
        raise ParameterError(f"need 1 <= k <= len(eps), got k={k}")
    gamma = params.gamma
    alpha = params.alpha
    xi = eps[:k] ** 2 - 1.0  # xi_0 .. xi_{k-1}

    # weights e^{j*gamma}, j = 1..k-1, and their tail sums T_i = sum_{j=i..k-1}
    j = np.arange(1, k)
    w = np.exp(gamma * j)
    tail = np.cumsum(w[::-1])[::-1]
    # xi_{k-i} for i = 1..k-1 is xi[k-1], xi[k-2], ..., xi[1]
    double_sum = float(tail @ xi[k - 1:0:-1]) if k > 1 else 0.0

    main = (sigma0_sq * math.exp(k * gamma) * (1.0 + alpha * float(xi.sum()))
            + params.omega * (1.0 + float(w.sum()) + alpha * double_sum))

    # sigma_k^2 only consumes eps_0..eps_{k-1}; pad one dummy entry so the
    # recursion output has an index-k slot even when k == len(eps)
    exact_path = simulate_with_innovations(params, np.append(eps[:k], 0.0), sigma0_sq)
    exact = float(exact_path.sigma_sq[k])
    rel = abs(main - exact) / exact
    return AdditiveDecomposition(
        k=k,
        main_value=main,
        exact_value=exact,
        relative_error=rel,
        predicted_order=k * (alpha**2 + gamma**2),
    )


def arma_residual_check(path: Path, params: GarchParams) -> float:
    """Max absolute residual of the squared-return ARMA(1,1) identity.

    With e_k = (eps_k^2 - 1) sigma_k^2, substituting y = sigma*eps into the
    variance recursion gives, exactly in real arithmetic,

        y_k^2 = omega + (alpha+beta) y_{k-1}^2 + e_k - beta*e_{k-1}.

    Note the omega term: the identity without it holds only up to the
    intercept. Returns max_{1<=k<=n} |residual_k|.
    """
    y2 = path.y**2
    e = (path.eps**2 - 1.0) * path.sigma_sq
    rhs = (params.omega + (params.alpha + params.beta) * y2[:-1]
           + e[1:] - params.beta * e[:-1])
    return float(np.abs(y2[1:] - rhs).max())


@dataclass(frozen=True)
class LyapunovEstimate:
    mean: float
    std_error: float
    verdict: str  # "negative", "positive" or "inconclusive" at 3 std errors


def lyapunov_estimate(params: GarchParams, innovation: InnovationSpec,
                      m: int, seed: int) -> LyapunovEstimate:
    """Monte Carlo estimate of E log(beta + alpha*eps^2).

    A strictly negative value is the stationarity (a.s. convergence)
    condition for the variance recursion.
    """
    if m < 1:
        raise ParameterError("m must be >= 1")
    if params.alpha == 0 and params.beta == 0:
        raise ParameterError("beta + alpha*eps^2 is 0 a.s.; log-moment undefined")
    if params.alpha == 0:
        mu = math.log(params.beta)
        return LyapunovEstimate(mean=mu, std_error=0.0,
                                verdict="negative" if mu < 0 else "positive" if mu > 0 else "inconclusive")
    rng = np.random.default_rng(seed)
    eps = innovation.sample(rng, m)
    x = np.log(params.beta + params.alpha * eps**2)
    mu = float(x.mean())
    se = float(x.std(ddof=1) / math.sqrt(m)) if m > 1 else math.inf
    if mu + 3 * se < 0:
        verdict = "negative"
    elif mu - 3 * se > 0:
        verdict = "positive"
    else:
        verdict = "inconclusive"
    return LyapunovEstimate(mean=mu, std_error=se, verdict=verdict)
