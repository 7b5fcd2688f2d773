"""Exception types raised by the library.

Every exception carries a short machine-readable ``category`` used by the
command line tool (``error: <category>: <message>`` on stderr) and by
language bindings that map failures one-to-one.
"""


class JprError(Exception):
    """Base class for all library errors."""

    category = "error"


class InputIOError(JprError):
    """A file could not be opened or read."""

    category = "io"


class ParseError(JprError):
    """A CSV field failed to parse as a finite real number.

    ``row`` and ``column`` are 1-based file coordinates.
    """

    category = "parse"

    def __init__(self, message, row=None, column=None):
        if row is not None and column is not None:
            message = f"row {row}, column {column}: {message}"
        super().__init__(message)
        self.row = row
        self.column = column


class ShapeError(JprError):
    """Dimensions are inconsistent or below the supported minimum."""

    category = "shape"


class NonFiniteError(JprError):
    """An array contains NaN/Inf, or an iteration diverged to non-finite values."""

    category = "non-finite"


class DegenerateFeatureError(JprError):
    """A feature column has zero variance and cannot be regressed on."""

    category = "degenerate-feature"


class DegenerateVarianceError(JprError):
    """A residual variance is zero, so 1/tau^2 is undefined."""

    category = "degenerate-variance"


class EmptyGridError(JprError):
    """A candidate grid for penalty selection is empty."""

    category = "empty-grid"


class EigenFailureError(JprError):
    """The symmetric eigendecomposition did not converge."""

    category = "eigen-failure"


class NotPositiveDefiniteError(JprError):
    """A covariance matrix is not positive definite (Cholesky failed)."""

    category = "not-positive-definite"


class InfeasibleDegreeError(JprError):
    """Graph degree demands cannot be met for the requested size."""

    category = "infeasible-degree"


class ConfigError(JprError):
    """Invalid configuration (step sizes, flags, parameter ranges)."""

    category = "config"
