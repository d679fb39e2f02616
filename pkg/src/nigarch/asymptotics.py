"""Normalizing transforms and target limit laws for the six theorems.

Each theorem turns sigma^2 or y, evaluated at indices k = floor(n*t) of a
length-n path, into a statistic whose law stabilizes as n grows:

    T21 (gamma<0): sqrt(2|gamma|^3)/alpha * (sigma_k^2/omega - centering), iid N(0,1)
    T22 (gamma<0): sqrt(|gamma|/omega) * y_k, iid with the innovation law
    T23 (gamma=0): (sigma_k^2/omega - k) / (n^(3/2) alpha), Gaussian, cov min(s,t)^3/3
    T24 (gamma=0): y_k / sqrt(omega*k), iid with the innovation law
    T25 (gamma>0): gamma e^{-k gamma} / (alpha sqrt(k)) * (sigma_k^2/omega - centering)
    T26 (gamma>0): sqrt(gamma/omega) e^{-k gamma/2} * y_k, iid with the innovation law

T21, T23 and T25 carry an extra 1/sqrt(E xi^2) factor, xi = eps^2 - 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import GeometricOverflowError, ParameterError
from .garch import GarchParams, Path
from .innovations import InnovationSpec
from .schemes import NEGATIVE, POSITIVE, ZERO


class TheoremId(str, Enum):
    T21 = "T21"
    T22 = "T22"
    T23 = "T23"
    T24 = "T24"
    T25 = "T25"
    T26 = "T26"

    @property
    def sign(self) -> str:
        return {"T21": NEGATIVE, "T22": NEGATIVE,
                "T23": ZERO, "T24": ZERO,
                "T25": POSITIVE, "T26": POSITIVE}[self.value]

    @property
    def uses_y(self) -> bool:
        """True for the theorems about y itself (innovation-law limits)."""
        return self in (TheoremId.T22, TheoremId.T24, TheoremId.T26)

    @property
    def independent_limit(self) -> bool:
        """True when the limit coordinates are independent across the grid."""
        return self in (TheoremId.T21, TheoremId.T22, TheoremId.T24, TheoremId.T26)


@dataclass(frozen=True)
class TimeGrid:
    """Strictly increasing evaluation fractions 0 < t_1 < ... < t_N <= 1."""

    t: tuple

    def __post_init__(self):
        t = tuple(float(v) for v in self.t)
        object.__setattr__(self, "t", t)
        if len(t) < 1:
            raise ParameterError("grid needs at least one point")
        if not all(b > a for a, b in zip(t, t[1:])):
            raise ParameterError("grid must be strictly increasing")
        if not (t[0] > 0 and t[-1] <= 1):
            raise ParameterError("grid must satisfy 0 < t_1 and t_N <= 1")

    def __len__(self):
        return len(self.t)

    def indices(self, n: int) -> np.ndarray:
        k = np.floor(n * np.asarray(self.t)).astype(np.int64)
        if k[0] < 1:
            raise ParameterError(f"floor(n*t_1) = {k[0]} < 1; grid too fine for n={n}")
        return k


@dataclass(frozen=True)
class TargetLaw:
    """Finite-dimensional limit law on a grid: kind tag plus covariance."""

    kind: str
    covariance: np.ndarray


def geometric_sum(gamma: float, k: int) -> float:
    """sum_{j=1}^{k-1} e^{j*gamma}, by closed form, continuous at gamma = 0.

    expm1 keeps the ratio accurate for |gamma| near 0; the value at
    gamma = 0 is k - 1.
    """
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    if gamma == 0.0:
        return float(k - 1)
    if (k - 1) * gamma > 700:
        raise GeometricOverflowError(f"(k-1)*gamma = {(k - 1) * gamma:.3g} > 700")
    return math.exp(gamma) * math.expm1((k - 1) * gamma) / math.expm1(gamma)


_TERM_CUTOFF = 1e-18
_CHUNK = 1 << 16


def weighted_geometric_sum(nu: float, gamma: float, k: int) -> float:
    """Exact sum_{j=1}^{k} j^nu e^{gamma*j} for gamma < 0, by direct summation.

    Summation stops early once past the peak j = nu/|gamma| and the last
    term falls below 1e-18 of the running sum.
    """
    if nu < 0:
        raise ParameterError(f"nu must be >= 0, got {nu}")
    if not gamma < 0:
        raise ParameterError(f"gamma must be negative, got {gamma}")
    peak = nu / abs(gamma)
    total = 0.0
    start = 1
    while start <= k:
        stop = min(start + _CHUNK - 1, k)
        j = np.arange(start, stop + 1, dtype=float)
        total += float(np.sum(j**nu * np.exp(gamma * j)))
        last = stop**nu * math.exp(gamma * stop)
        if stop > peak and last < _TERM_CUTOFF * total:
            break
        start = stop + 1
    return total


def gamma_asymptote(nu: float, gamma: float) -> float:
    """Small-|gamma| asymptote of the weighted sum: Gamma(nu+1) / |gamma|^(nu+1)."""
    if nu < 0:
        raise ParameterError(f"nu must be >= 0, got {nu}")
    if not gamma < 0:
        raise ParameterError(f"gamma must be negative, got {gamma}")
    return math.gamma(nu + 1.0) / abs(gamma) ** (nu + 1.0)


def xi_variance(innovation: InnovationSpec) -> float:
    """E[(eps^2 - 1)^2] = E[eps^4] - 1, analytic per law."""
    return innovation.xi_variance


def statistic_from_values(theorem: TheoremId, sigma_sq, y, k_indices, params: GarchParams,
                          n: int, xi_var: float) -> np.ndarray:
    """Evaluate a theorem statistic from sigma_k^2 / y_k values at grid indices.

    sigma_sq and y may be 1-d (one path) or 2-d (replications x grid);
    the last axis must align with k_indices.
    """
    gamma = params.gamma
    sign = NEGATIVE if gamma < 0 else POSITIVE if gamma > 0 else ZERO
    if sign != theorem.sign:
        raise ParameterError(
            f"{theorem.value} requires gamma {theorem.sign}, got gamma={gamma}")
    sigma_sq = np.asarray(sigma_sq, dtype=float)
    y = np.asarray(y, dtype=float)
    k = np.asarray(k_indices, dtype=np.int64)
    if k.min() < 1:
        raise ParameterError("grid index floor(n*t) must be >= 1")
    omega, alpha = params.omega, params.alpha
    root_xi = math.sqrt(xi_var)

    if theorem == TheoremId.T21:
        centering = np.array([geometric_sum(gamma, int(kk)) for kk in k])
        scale = math.sqrt(2.0 * abs(gamma) ** 3) / (alpha * root_xi)
        return scale * (sigma_sq / omega - centering)
    if theorem == TheoremId.T22:
        return math.sqrt(abs(gamma) / omega) * y
    if theorem == TheoremId.T23:
        return (sigma_sq / omega - k) / (n**1.5 * alpha * root_xi)
    if theorem == TheoremId.T24:
        return y / np.sqrt(omega * k)
    if theorem == TheoremId.T25:
        centering = np.array([geometric_sum(gamma, int(kk)) for kk in k])
        scale = gamma * np.exp(-k * gamma) / (alpha * np.sqrt(k) * root_xi)
        return scale * (sigma_sq / omega - centering)
    # T26
    return np.sqrt(gamma / omega) * np.exp(-k * gamma / 2.0) * y


def theorem_statistic(theorem: TheoremId, path: Path, params: GarchParams, n: int,
                      grid: TimeGrid, xi_var: float) -> np.ndarray:
    """Normalized statistic vector of one path on the time grid."""
    k = grid.indices(n)
    return statistic_from_values(theorem, path.sigma_sq[k], path.y[k], k, params, n, xi_var)


def target_covariance(theorem: TheoremId, grid: TimeGrid) -> TargetLaw:
    """Covariance matrix of the limit vector on the grid."""
    t = np.asarray(grid.t)
    if theorem == TheoremId.T21:
        return TargetLaw("iid standard normal", np.eye(len(t)))
    if theorem.uses_y:
        # independent innovation-law coordinates, unit variance
        return TargetLaw("iid innovation law", np.eye(len(t)))
    tmin = np.minimum.outer(t, t)
    if theorem == TheoremId.T23:
        return TargetLaw("Gaussian, cov min(s,t)^3/3", tmin**3 / 3.0)
    return TargetLaw("Wiener marginals, cov min(s,t)", tmin)


def oscillation_rate(sign: str, n: int, q: float | None, omega: float) -> float:
    """Normalization under which y_n has a nondegenerate limit.

    gamma < 0: omega^(1/2) n^(q/2);  gamma = 0: omega^(1/2) n^(1/2);
    gamma > 0: omega^(1/2) n^(q/2) e^{n^(1-q)/2}, reading the exponential
    growth as e^{n*gamma/2} with gamma = n^-q.
    """
    if not omega > 0:
        raise ParameterError(f"omega must be positive, got {omega}")
    if sign == ZERO:
        return math.sqrt(omega * n)
    if q is None or not 0.5 < q < 1.0:
        raise ParameterError(f"q must lie in (1/2, 1), got {q}")
    base = math.sqrt(omega) * n ** (q / 2.0)
    if sign == NEGATIVE:
        return base
    if sign == POSITIVE:
        exponent = n ** (1.0 - q) / 2.0
        if exponent > 700:
            raise GeometricOverflowError(f"n^(1-q)/2 = {exponent:.3g} > 700")
        return base * math.exp(exponent)
    raise ParameterError(f"unknown sign {sign!r}")
