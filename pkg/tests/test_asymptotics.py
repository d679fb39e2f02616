import math

import numpy as np
import pytest

from nigarch import (GarchParams, GeometricOverflowError, InnovationSpec, ParameterError,
                     TheoremId, TimeGrid, gamma_asymptote, geometric_sum, oscillation_rate,
                     simulate_with_innovations, target_covariance, theorem_statistic,
                     weighted_geometric_sum, xi_variance)
from nigarch.asymptotics import statistic_from_values


def test_geometric_sum_small_k_by_hand():
    # k = 1 is an empty sum; k = 4 at gamma = log 2 is 2 + 4 + 8 = 14
    assert geometric_sum(-0.5, 1) == 0.0
    assert geometric_sum(math.log(2.0), 4) == pytest.approx(14.0, rel=1e-14)
    assert geometric_sum(0.0, 10) == 9.0


def test_geometric_sum_continuity_at_zero():
    # for |gamma| = 1e-12 the closed form must stay within rounding of k - 1
    for gamma in (1e-12, -1e-12):
        assert geometric_sum(gamma, 10**6) == pytest.approx(10**6 - 1, rel=1e-6)


def test_geometric_sum_against_fsum():
    for gamma, k in [(-1e-3, 5000), (2e-4, 3000), (-0.3, 50)]:
        direct = math.fsum(math.exp(j * gamma) for j in range(1, k))
        assert geometric_sum(gamma, k) == pytest.approx(direct, rel=1e-12)


def test_geometric_sum_overflow_guard():
    with pytest.raises(GeometricOverflowError):
        geometric_sum(1.0, 1000)
    with pytest.raises(ParameterError):
        geometric_sum(-0.5, 0)


def test_weighted_geometric_sum_against_fsum():
    for nu in (0.0, 1.0, 2.0):
        gamma, k = -1e-2, 5000
        direct = math.fsum(j**nu * math.exp(gamma * j) for j in range(1, k + 1))
        assert weighted_geometric_sum(nu, gamma, k) == pytest.approx(direct, rel=1e-12)


def test_weighted_geometric_sum_near_asymptote():
    # with k|gamma| large the exact sum sits within 1% of Gamma(nu+1)/|gamma|^(nu+1)
    gamma = -1e-3
    k = 200_000
    for nu in (0.0, 1.0):
        ratio = weighted_geometric_sum(nu, gamma, k) / gamma_asymptote(nu, gamma)
        assert abs(ratio - 1.0) < 0.01, (nu, ratio)


def test_weighted_geometric_sum_far_from_asymptote():
    # at gamma = -5 the nu = 0 sum is exactly e^-5/(1 - e^-5), nowhere near 1/5
    exact = weighted_geometric_sum(0.0, -5.0, 10_000)
    closed = math.exp(-5.0) / (1.0 - math.exp(-5.0))
    assert exact == pytest.approx(closed, rel=1e-12)
    assert abs(exact / gamma_asymptote(0.0, -5.0) - 1.0) > 0.9


def test_weighted_geometric_sum_validation():
    with pytest.raises(ParameterError):
        weighted_geometric_sum(-1.0, -0.1, 10)
    with pytest.raises(ParameterError):
        weighted_geometric_sum(0.0, 0.0, 10)
    with pytest.raises(ParameterError):
        gamma_asymptote(0.0, 0.1)


def test_xi_variance_values():
    assert xi_variance(InnovationSpec.standard_normal()) == pytest.approx(2.0)
    assert xi_variance(InnovationSpec.scaled_uniform()) == pytest.approx(0.8)
    assert xi_variance(InnovationSpec.scaled_student_t(8.0)) == pytest.approx(3.5)


def test_grid_validation():
    TimeGrid((0.5, 1.0))
    with pytest.raises(ParameterError):
        TimeGrid(())
    with pytest.raises(ParameterError):
        TimeGrid((0.5, 0.5))
    with pytest.raises(ParameterError):
        TimeGrid((0.0, 1.0))
    with pytest.raises(ParameterError):
        TimeGrid((0.5, 1.5))
    with pytest.raises(ParameterError):
        TimeGrid((1e-6,)).indices(100)  # floor(n t_1) = 0
    assert list(TimeGrid((0.5, 1.0)).indices(101)) == [50, 101]


def test_t23_statistic_on_unit_innovation_path():
    # eps identically 1 with alpha + beta = 1 gives sigma_k^2 = omega*k + sigma_0^2
    # exactly, so starting at sigma_0^2 = omega the centered deviation is always 1
    omega = 2.0
    alpha = 1e-3
    params = GarchParams(omega=omega, alpha=alpha, beta=1.0 - alpha)
    n = 1000
    path = simulate_with_innovations(params, np.ones(n + 1), omega)
    stat = theorem_statistic(TheoremId.T23, path, params, n, TimeGrid((0.5, 1.0)), 2.0)
    expected = 1.0 / (n**1.5 * alpha * math.sqrt(2.0))
    assert np.allclose(stat, expected, rtol=1e-10)


def test_t22_scalar_example():
    params = GarchParams(omega=4.0, alpha=1e-3, beta=1.0 - 1e-3 - 1e-2)
    stat = statistic_from_values(TheoremId.T22, sigma_sq=np.array([7.0]),
                                 y=np.array([20.0]), k_indices=np.array([100]),
                                 params=params, n=1000, xi_var=2.0)
    # sqrt(|gamma|/omega) * y = sqrt(0.01/4) * 20 = 1
    assert stat[0] == pytest.approx(1.0, rel=1e-12)


def test_sign_mismatch_raises():
    params = GarchParams(omega=1.0, alpha=1e-3, beta=1.0 - 1e-3)  # gamma = 0
    with pytest.raises(ParameterError):
        statistic_from_values(TheoremId.T21, np.array([1.0]), np.array([1.0]),
                              np.array([10]), params, 100, 2.0)


@pytest.mark.parametrize("theorem", [TheoremId.T21, TheoremId.T25])
def test_omega_rescaling_invariance(theorem):
    """Statistics built from sigma^2/omega are invariant under omega scaling.

    Doubling omega doubles sigma_k^2 path-by-path (the recursion is linear
    in (omega, sigma^2) for fixed eps), so the normalized statistic is
    unchanged.
    """
    n = 2000
    gamma = 1e-3 if theorem is TheoremId.T25 else -1e-3
    alpha = 5e-3
    rng = np.random.default_rng(7)
    eps = rng.standard_normal(n + 1)
    grid = TimeGrid((0.5, 1.0))
    stats = []
    for omega in (1.0, 2.0):
        params = GarchParams(omega=omega, alpha=alpha, beta=1.0 + gamma - alpha)
        path = simulate_with_innovations(params, eps, omega)
        stats.append(theorem_statistic(theorem, path, params, n, grid, 2.0))
    assert np.allclose(stats[0], stats[1], rtol=1e-12)


def test_target_covariances():
    grid = TimeGrid((0.5, 1.0))
    assert np.array_equal(target_covariance(TheoremId.T21, grid).covariance, np.eye(2))
    assert np.array_equal(target_covariance(TheoremId.T24, grid).covariance, np.eye(2))
    cov23 = target_covariance(TheoremId.T23, grid).covariance
    assert np.allclose(cov23, [[1 / 24, 1 / 24], [1 / 24, 1 / 3]])
    cov25 = target_covariance(TheoremId.T25, TimeGrid((0.25, 0.75))).covariance
    assert np.allclose(cov25, [[0.25, 0.25], [0.25, 0.75]])
    # min(s,t) and min^3/3 kernels are positive semidefinite
    for cov in (cov23, cov25):
        assert np.linalg.eigvalsh(cov).min() > 0


def test_oscillation_rate():
    assert oscillation_rate("zero", 400, None, 1.0) == pytest.approx(20.0)
    assert oscillation_rate("negative", 10**4, 0.75, 4.0) == pytest.approx(2.0 * 10**1.5)
    pos = oscillation_rate("positive", 10**4, 0.75, 1.0)
    assert pos == pytest.approx(10**1.5 * math.exp(5.0), rel=1e-12)
    with pytest.raises(GeometricOverflowError):
        oscillation_rate("positive", 10**9, 0.51, 1.0)
    with pytest.raises(ParameterError):
        oscillation_rate("negative", 100, None, 1.0)
    with pytest.raises(ParameterError):
        oscillation_rate("zero", 100, None, -1.0)
