"""Innovation laws with unit second moment.

Every admissible law satisfies E[eps^2] = 1 and has a finite fourth moment
strictly larger than 1 (i.e., eps^2 is nondegenerate). Laws with eps^2
almost surely constant (e.g. Rademacher) are therefore not representable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats
from scipy.special import ndtr

from .errors import ParameterError

_SQRT3 = math.sqrt(3.0)

NORMAL = "normal"
UNIFORM = "uniform"
STUDENT = "student"

_LAWS = (NORMAL, UNIFORM, STUDENT)


@dataclass(frozen=True)
class InnovationSpec:
    """Distribution of the i.i.d. innovations.

    law:
        "normal"  -- standard normal,
        "uniform" -- uniform on [-sqrt(3), sqrt(3)],
        "student" -- Student t with ``nu`` degrees of freedom, rescaled by
                     sqrt((nu-2)/nu) so that the variance is 1. Requires
                     nu > 4 so the fourth moment is finite.
    """

    law: str
    nu: float | None = None

    def __post_init__(self):
        if self.law not in _LAWS:
            raise ParameterError(f"unknown innovation law {self.law!r}")
        if self.law == STUDENT:
            if self.nu is None or not self.nu > 4:
                raise ParameterError("scaled Student t requires nu > 4 for a finite fourth moment")
        elif self.nu is not None:
            raise ParameterError(f"law {self.law!r} does not take a degrees-of-freedom parameter")

    @classmethod
    def standard_normal(cls) -> "InnovationSpec":
        return cls(NORMAL)

    @classmethod
    def scaled_uniform(cls) -> "InnovationSpec":
        return cls(UNIFORM)

    @classmethod
    def scaled_student_t(cls, nu: float) -> "InnovationSpec":
        return cls(STUDENT, nu=float(nu))

    @property
    def fourth_moment(self) -> float:
        """E[eps^4]; finite and > 1 for every admissible law."""
        if self.law == NORMAL:
            return 3.0
        if self.law == UNIFORM:
            return 9.0 / 5.0  # E[x^4] on U[-s, s] is s^4/5 with s^2 = 3
        return 3.0 * (self.nu - 2.0) / (self.nu - 4.0)

    @property
    def xi_variance(self) -> float:
        """Variance of eps^2 - 1, i.e. E[eps^4] - 1."""
        return self.fourth_moment - 1.0

    @property
    def student_scale(self) -> float:
        return math.sqrt((self.nu - 2.0) / self.nu)

    def has_moment(self, order: float) -> bool:
        """Whether E|eps|^order is finite."""
        if self.law == STUDENT:
            return order < self.nu
        return True

    def default_delta(self) -> float:
        """Default excess-moment exponent delta such that E|eps|^(4+delta) < inf."""
        if self.law == STUDENT:
            return (self.nu - 4.0) / 2.0
        return 1.0

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.law == NORMAL:
            return rng.standard_normal(size)
        if self.law == UNIFORM:
            return rng.uniform(-_SQRT3, _SQRT3, size)
        return rng.standard_t(self.nu, size) * self.student_scale

    def cdf(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.law == NORMAL:
            return ndtr(x)
        if self.law == UNIFORM:
            return np.clip((x + _SQRT3) / (2.0 * _SQRT3), 0.0, 1.0)
        return stats.t.cdf(x / self.student_scale, self.nu)

    def to_config(self) -> dict:
        cfg = {"law": self.law}
        if self.nu is not None:
            cfg["nu"] = self.nu
        return cfg

    @classmethod
    def from_config(cls, cfg: dict) -> "InnovationSpec":
        return cls(cfg["law"], nu=cfg.get("nu"))


def parse_innovation(text: str) -> InnovationSpec:
    """Parse CLI-style innovation specs: normal | uniform | student:<nu>."""
    if text == NORMAL:
        return InnovationSpec.standard_normal()
    if text == UNIFORM:
        return InnovationSpec.scaled_uniform()
    if text.startswith("student:"):
        try:
            nu = float(text.split(":", 1)[1])
        except ValueError as exc:
            raise ParameterError(f"bad degrees of freedom in {text!r}") from exc
        return InnovationSpec.scaled_student_t(nu)
    raise ParameterError(f"unknown innovation {text!r} (expected normal, uniform or student:<nu>)")
