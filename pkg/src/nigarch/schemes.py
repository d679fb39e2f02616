"""Power-law families of near-integrated GARCH(1,1) models.

A scheme fixes the sign of gamma and two exponents q, a in (1/2, 1); at
sample size n the model M_n has

    alpha = n^{-a},    gamma = sign * n^{-q},    beta = 1 + gamma - alpha.

The validator checks, per theorem regime, each of the nine rate
assumptions both asymptotically (pure exponent arithmetic) and
numerically at the given n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import OverflowRiskError, SchemeError
from .garch import GarchParams
from .innovations import InnovationSpec

NEGATIVE = "negative"
ZERO = "zero"
POSITIVE = "positive"
_SIGNS = (NEGATIVE, ZERO, POSITIVE)

# nγ beyond this puts e^{nγ} near the double-precision ceiling; flag before
# simulating rather than fail during.
OVERFLOW_NGAMMA = 600.0

HOLDS = "holds"
FAILS = "fails"
REQUIRED = "required"
IMPLIED = "implied"
NOT_REQUIRED = "not-required"


def log_log(x: float) -> float:
    """log log x, with the convention log log x = 1 for x < 4."""
    return 1.0 if x < 4 else math.log(math.log(x))


@dataclass(frozen=True)
class Scheme:
    """An n-indexed near-integrated parameter family."""

    sign: str
    a: float
    q: float | None = None
    omega: float = 1.0
    innovation: InnovationSpec = field(default_factory=InnovationSpec.standard_normal)
    delta: float | None = None  # excess-moment exponent; per-law default when None

    def __post_init__(self):
        if self.sign not in _SIGNS:
            raise SchemeError(f"sign must be one of {_SIGNS}, got {self.sign!r}")
        if not 0.5 < self.a < 1.0:
            raise SchemeError(f"a must lie in (1/2, 1), got {self.a}")
        if self.sign == ZERO:
            if self.q is not None:
                raise SchemeError("q is meaningless when sign is zero")
        else:
            if self.q is None or not 0.5 < self.q < 1.0:
                raise SchemeError(f"q must lie in (1/2, 1), got {self.q}")
            if self.sign == NEGATIVE and not 1.5 * self.q > self.a:
                raise SchemeError(
                    f"negative sign requires 3q/2 > a so |gamma|^(3/2)/alpha -> 0 "
                    f"(q={self.q}, a={self.a})")
            if self.sign == POSITIVE and not self.q >= self.a:
                raise SchemeError(
                    f"positive sign requires q >= a so gamma/alpha stays bounded "
                    f"(q={self.q}, a={self.a})")
        if not self.omega > 0:
            raise SchemeError(f"omega must be positive, got {self.omega}")
        if self.delta is not None and not self.delta > 0:
            raise SchemeError(f"delta must be positive, got {self.delta}")

    @property
    def effective_delta(self) -> float:
        return self.delta if self.delta is not None else self.innovation.default_delta()

    def gamma_at(self, n: int) -> float:
        if self.sign == ZERO:
            return 0.0
        g = n ** (-self.q)
        return -g if self.sign == NEGATIVE else g

    def alpha_at(self, n: int) -> float:
        return n ** (-self.a)

    def to_config(self) -> dict:
        cfg = {"sign": self.sign, "q": self.q, "a": self.a, "omega": self.omega,
               **self.innovation.to_config(), "delta": self.delta}
        if "nu" not in cfg:
            cfg["nu"] = None
        return cfg

    @classmethod
    def from_config(cls, cfg: dict) -> "Scheme":
        return cls(sign=cfg["sign"], a=cfg["a"], q=cfg.get("q"),
                   omega=cfg.get("omega", 1.0),
                   innovation=InnovationSpec(cfg.get("law", "normal"), nu=cfg.get("nu")),
                   delta=cfg.get("delta"))


def scheme_params(scheme: Scheme, n: int) -> GarchParams:
    """Materialize M_n: alpha = n^-a, gamma = sign*n^-q, beta = 1 + gamma - alpha."""
    if n < 2:
        raise SchemeError(f"n must be >= 2, got {n}")
    alpha = scheme.alpha_at(n)
    gamma = scheme.gamma_at(n)
    beta = 1.0 + gamma - alpha
    if beta < 0:
        raise SchemeError(f"infeasible beta = 1 + gamma - alpha = {beta} < 0 at n={n}")
    return GarchParams(omega=scheme.omega, alpha=alpha, beta=beta)


@dataclass(frozen=True)
class AssumptionRow:
    assumption: str       # e.g. "2.18"
    statement: str
    status: str           # required / implied / not-required
    verdict: str          # holds / fails (asymptotic, from exponent arithmetic)
    witness: float        # numeric value of the rate quantity at n

    def to_dict(self) -> dict:
        return {"assumption": self.assumption, "statement": self.statement,
                "status": self.status, "verdict": self.verdict, "witness": self.witness}


@dataclass(frozen=True)
class AssumptionReport:
    scheme: Scheme
    n: int
    regime: str
    rows: tuple
    sign_compatible: bool
    overflow_risk: bool   # n*gamma > 600
    beta_feasible: bool

    def row(self, assumption: str) -> AssumptionRow:
        for r in self.rows:
            if r.assumption == assumption:
                return r
        raise KeyError(assumption)

    @property
    def required_ok(self) -> bool:
        return self.sign_compatible and all(
            r.verdict == HOLDS for r in self.rows if r.status in (REQUIRED, IMPLIED))

    def to_dict(self) -> dict:
        return {
            "regime": self.regime,
            "n": self.n,
            "scheme": self.scheme.to_config(),
            "sign_compatible": self.sign_compatible,
            "overflow_risk": self.overflow_risk,
            "beta_feasible": self.beta_feasible,
            "required_ok": self.required_ok,
            "rows": [r.to_dict() for r in self.rows],
        }


# theorem id -> (required sign, assumptions its preamble lists)
_REGIMES = {
    "T21": (NEGATIVE, {"2.11", "2.12", "2.18", "2.19", "2.20", "2.21"}),
    "T22": (NEGATIVE, {"2.11", "2.12", "2.18", "2.19", "2.20", "2.21"}),
    "T23": (ZERO, {"2.10", "2.11", "2.21"}),
    "T24": (ZERO, {"2.10", "2.11", "2.21"}),
    "T25": (POSITIVE, {"2.9", "2.11", "2.18", "2.19", "2.22"}),
    "T26": (POSITIVE, {"2.9", "2.11", "2.18", "2.19", "2.22"}),
}


def validate_assumptions(scheme: Scheme, n: int, regime: str) -> AssumptionReport:
    """Check every rate assumption for the named theorem regime at size n.

    Reports, never raises, for feasible schemes: each of the nine
    assumptions gets an asymptotic verdict plus a numeric witness.
    """
    if regime not in _REGIMES:
        raise SchemeError(f"unknown regime {regime!r}; expected one of {sorted(_REGIMES)}")
    required_sign, needed = _REGIMES[regime]
    a, q, sign = scheme.a, scheme.q, scheme.sign
    inn = scheme.innovation
    delta = scheme.effective_delta

    alpha = scheme.alpha_at(n)
    gamma = scheme.gamma_at(n)
    abs_gamma = abs(gamma)
    sqrt_n = math.sqrt(n)

    zero = sign == ZERO

    def status(key: str) -> str:
        if key in needed:
            return REQUIRED
        # the gamma>0 theorems derive n^{1/2}gamma -> 0 from (2.19) and (2.22)
        if key == "2.12" and regime in ("T25", "T26"):
            return IMPLIED
        return NOT_REQUIRED

    rows = (
        AssumptionRow("2.9", "E eps^4 < inf", status("2.9"),
                      HOLDS if inn.has_moment(4) else FAILS,
                      inn.fourth_moment if inn.has_moment(4) else math.inf),
        AssumptionRow("2.10", "n^(1/2) alpha -> 0", status("2.10"),
                      HOLDS if a > 0.5 else FAILS, sqrt_n * alpha),
        AssumptionRow("2.11", "n alpha -> inf", status("2.11"),
                      HOLDS if a < 1.0 else FAILS, n * alpha),
        AssumptionRow("2.12", "n^(1/2) gamma -> 0", status("2.12"),
                      HOLDS if zero or q > 0.5 else FAILS, sqrt_n * abs_gamma),
        AssumptionRow("2.18", "n |gamma| -> inf", status("2.18"),
                      FAILS if zero else (HOLDS if q < 1.0 else FAILS), n * abs_gamma),
        AssumptionRow("2.19", "alpha n^(1/2) loglog n -> 0", status("2.19"),
                      HOLDS if a > 0.5 else FAILS, alpha * sqrt_n * log_log(n)),
        AssumptionRow("2.20", "|gamma|^(3/2) / alpha -> 0", status("2.20"),
                      HOLDS if zero or 1.5 * q > a else FAILS,
                      abs_gamma**1.5 / alpha),
        AssumptionRow("2.21", f"E|eps|^(4+delta) < inf, delta={delta}", status("2.21"),
                      HOLDS if inn.has_moment(4 + delta) else FAILS,
                      4 + delta),
        AssumptionRow("2.22", "gamma/alpha = O(1)", status("2.22"),
                      HOLDS if zero or q >= a else FAILS, gamma / alpha),
    )

    beta_feasible = 1.0 + gamma - alpha >= 0
    return AssumptionReport(
        scheme=scheme, n=n, regime=regime, rows=rows,
        sign_compatible=(sign == required_sign),
        overflow_risk=n * gamma > OVERFLOW_NGAMMA,
        beta_feasible=beta_feasible,
    )


def require_runnable(report: AssumptionReport, force: bool = False) -> None:
    """Raise unless the report clears every gate an experiment needs."""
    if not report.beta_feasible:
        raise SchemeError(f"infeasible beta at n={report.n}")
    if not report.sign_compatible:
        raise SchemeError(
            f"scheme sign {report.scheme.sign!r} is incompatible with regime {report.regime}")
    if not report.required_ok:
        failing = [r.assumption for r in report.rows
                   if r.status in (REQUIRED, IMPLIED) and r.verdict == FAILS]
        raise SchemeError(f"required assumptions fail for {report.regime}: {failing}")
    if report.overflow_risk and not force:
        raise OverflowRiskError(
            f"n*gamma = {report.n * report.scheme.gamma_at(report.n):.3g} > {OVERFLOW_NGAMMA}; "
            "simulation would overflow double precision")
