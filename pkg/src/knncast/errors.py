"""Exception hierarchy shared across the package.

Every domain error derives from :class:`KnncastError` so callers (and the
CLI) can catch one base class and map it to a nonzero exit code.
"""


class KnncastError(Exception):
    """Base class for all errors raised by knncast."""


class LengthMismatch(KnncastError):
    """Aligned sequences have different lengths."""


class PeriodOutOfRange(KnncastError):
    """A seasonal period value falls outside [1, n_periods]."""


class NonIncreasingTime(KnncastError):
    """Time orders are not strictly increasing."""


class DimensionMismatch(KnncastError):
    """Vector arguments to a distance kernel differ in length."""


class NegativeDistance(KnncastError):
    """A dissimilarity passed to the similarity transform is negative."""


class MissingExogenous(KnncastError):
    """A weighted similarity with gamma > 0 was requested without predictors."""


class KTooLarge(KnncastError):
    """Requested neighbor count exceeds the available candidate pool."""


class IndexOutOfRange(KnncastError):
    """A forecast index refers to positions outside the series."""


class NoSeasonalPrior(KnncastError):
    """No earlier non-forecast observation shares the target's period."""


class RankDeficient(KnncastError):
    """The least-squares design matrix does not have full column rank."""


class ZeroActual(KnncastError):
    """Percent error is undefined because an actual value is zero."""


class InvalidCoefficients(KnncastError):
    """AR or MA coefficients violate stationarity/invertibility constraints."""


class InvalidBreakpoint(KnncastError):
    """A piecewise-function breakpoint violates its family constraint."""


class ParseError(KnncastError):
    """A file could not be parsed in the expected format."""


class MissingColumn(KnncastError):
    """A required column is absent from an input file."""


class NonNumericValue(KnncastError):
    """A cell expected to be numeric could not be parsed as a number."""


class BadDate(KnncastError):
    """A date cell is not in ISO-8601 (YYYY-MM-DD) format."""


class IoError(KnncastError):
    """An output file could not be written."""
