"""Near-integrated GARCH(1,1) toolkit: simulation via three equivalent
representations, Monte Carlo verification of the six limit theorems, and
Gaussian quasi-maximum-likelihood fitting."""

from .asymptotics import (TargetLaw, TheoremId, TimeGrid, gamma_asymptote, geometric_sum,
                          oscillation_rate, target_covariance, theorem_statistic,
                          weighted_geometric_sum, xi_variance)
from .errors import (DataError, ExplosionError, GeometricOverflowError, NigarchError,
                     OverflowRiskError, ParameterError, SchemeError)
from .garch import (AdditiveDecomposition, GarchParams, LyapunovEstimate, Path,
                    additive_sigma_sq, arma_residual_check, default_sigma0_sq,
                    lyapunov_estimate, simulate, simulate_batch, simulate_with_innovations,
                    volterra_sigma_sq, volterra_sigma_sq_all)
from .innovations import InnovationSpec, parse_innovation
from .montecarlo import (ExperimentConfig, MonteCarloReport, empirical_covariance, ks_test,
                         run_experiment, seed_stream)
from .schemes import AssumptionReport, Scheme, scheme_params, validate_assumptions
from .estimation import (QmleFit, ReturnSeries, WindowFit, expanding_window_fit, fit,
                         load_returns, qmle_loglik)

__version__ = "0.1.0"
