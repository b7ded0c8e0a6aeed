"""Exception types raised by gausskl.

All errors derive from :class:`GaussKLError`, which is itself a
``ValueError`` so callers that only care about bad input can catch that.
"""


class GaussKLError(ValueError):
    """Base class for all gausskl errors."""


class DimensionMismatch(GaussKLError):
    """Operands have incompatible shapes."""


class NotSymmetric(GaussKLError):
    """A covariance matrix is not symmetric within tolerance."""


class NotPositiveDefinite(GaussKLError):
    """Cholesky factorization hit a pivot that is non-positive or degenerate."""


class NonPositiveVariance(GaussKLError):
    """A diagonal variance is not strictly positive (or is below 1e-300)."""


class NonFinite(GaussKLError):
    """An input contains NaN or infinite entries."""


class RaggedBatch(GaussKLError):
    """Rows of a batch have different lengths, or the batch is empty."""


class PreconditionError(GaussKLError):
    """An argument is outside its documented range."""
