"""Exception hierarchy shared by all plsboot modules.

``PlsbootError`` is the common base; resampling engines catch it (together
with linear-algebra failures) to turn a failed replicate into an excluded,
non-finite entry instead of aborting a whole run.
"""


class PlsbootError(Exception):
    """Base class for all errors raised by this package."""


class NonFiniteInput(PlsbootError):
    """Input matrix or vector contains NaN or infinite entries."""


class ZeroVarianceColumn(PlsbootError):
    """A predictor column is constant and cannot be scaled."""

    def __init__(self, column: int):
        self.column = column
        super().__init__(f"predictor column {column} has zero variance")


class DegenerateDirection(PlsbootError):
    """The residual covariance X'y is (numerically) zero: no direction left."""


class TooManyComponents(PlsbootError):
    """Requested component count exceeds what the data can support."""


class DimensionMismatch(PlsbootError):
    """Matrix/vector shapes are inconsistent with the fitted model."""


class EmptySupport(PlsbootError):
    """No predictor was declared significant."""


class TooFewReplicates(PlsbootError):
    """Not enough finite bootstrap replicates to build an interval."""


class NoValidEta(PlsbootError):
    """Every sparsity value on the grid stopped at zero components."""


class SeparationDivergence(PlsbootError):
    """Logistic coefficients diverged (quasi-separation or overflow)."""


class NonBinaryResponse(PlsbootError):
    """Classification response must contain exactly the values 0 and 1."""


class SingleClass(PlsbootError):
    """A class-based statistic needs at least two nonempty classes."""


class BoundaryNotIntegral(PlsbootError):
    """Simulation group boundaries do not fall on whole predictor indices."""


class ParseError(PlsbootError):
    """A CSV cell could not be parsed; carries 1-based row/column location."""

    def __init__(self, row: int, column: int, message: str):
        self.row = row
        self.column = column
        super().__init__(f"row {row}, column {column}: {message}")


class MissingColumn(PlsbootError):
    """The requested response column is absent from the CSV header."""


class ConfigError(PlsbootError):
    """Invalid run configuration (bad flag values, missing files)."""
