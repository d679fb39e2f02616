"""Exception types shared across the package."""


class NigarchError(Exception):
    """Base class for all package-specific errors."""


class ParameterError(NigarchError, ValueError):
    """Invalid model parameters or arguments."""


class ExplosionError(NigarchError, OverflowError):
    """A simulated variance became non-finite.

    Carries the first offending recursion index in ``index``.
    """

    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"sigma_sq overflowed to a non-finite value at k={index}")


class GeometricOverflowError(NigarchError, OverflowError):
    """A geometric sum would overflow double precision."""


class SchemeError(NigarchError, ValueError):
    """Infeasible or inconsistent near-integrated scheme."""


class OverflowRiskError(NigarchError):
    """A configuration was pre-flagged as overflow-prone (n*gamma > 600)."""


class DataError(NigarchError, ValueError):
    """Input data could not be parsed or fails validation.

    ``line`` is the 1-based line number when the error is tied to a file line.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
