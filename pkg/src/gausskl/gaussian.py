"""Multivariate Gaussians: representation, log-density and seeded sampling."""

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from ._random import standard_normal
from ._validation import check_count, check_rows, check_seed, check_vector
from .exceptions import DimensionMismatch, NonPositiveVariance

LOG_2PI = float(np.log(2.0 * np.pi))
#: Variances at or below this value are rejected.
VARIANCE_FLOOR = linalg.PIVOT_FLOOR


@dataclass(frozen=True, eq=False)
class Full:
    """Dense covariance; factored on construction."""

    matrix: linalg.SpdMatrix
    factor: linalg.CholeskyFactor = field(init=False, repr=False)

    def __post_init__(self):
        matrix = linalg.as_spd(self.matrix)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "factor", linalg.cholesky(matrix))

    @property
    def dim(self):
        return self.matrix.dim

    def dense(self):
        return self.matrix.entries


@dataclass(frozen=True, eq=False)
class Diagonal:
    """Diagonal covariance given by its strictly positive variances."""

    variances: np.ndarray

    def __post_init__(self):
        v = check_vector(self.variances, "variances")
        if not np.all(v > VARIANCE_FLOOR):
            raise NonPositiveVariance(
                f"variances must be > {VARIANCE_FLOOR:g}, got min {v.min():.6g}"
            )
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "variances", v)

    @property
    def dim(self):
        return self.variances.size

    @property
    def factor(self):
        return linalg.CholeskyFactor(np.diag(np.sqrt(self.variances)))

    def dense(self):
        return np.diag(self.variances)

    def to_full(self):
        return Full(self.dense())


@dataclass(frozen=True, eq=False)
class Gaussian:
    """``N(mean, covariance)`` where covariance is :class:`Full` or :class:`Diagonal`."""

    mean: np.ndarray
    covariance: object

    def __post_init__(self):
        if not isinstance(self.covariance, (Full, Diagonal)):
            raise TypeError("covariance must be Full or Diagonal")
        mean = check_vector(self.mean, "mean", self.covariance.dim).copy()
        mean.setflags(write=False)
        object.__setattr__(self, "mean", mean)

    @classmethod
    def full(cls, mean, cov):
        return cls(mean, Full(cov))

    @classmethod
    def diagonal(cls, mean, var):
        return cls(mean, Diagonal(var))

    @classmethod
    def standard(cls, k):
        return cls(np.zeros(k), Diagonal(np.ones(k)))

    @property
    def dim(self):
        return self.mean.size

    @property
    def is_diagonal(self):
        return isinstance(self.covariance, Diagonal)

    def as_full(self):
        """Same distribution with the covariance stored densely."""
        if self.is_diagonal:
            return Gaussian(self.mean, self.covariance.to_full())
        return self


@dataclass(frozen=True, eq=False)
class SampleBatch:
    rows: np.ndarray
    seed: int

    @property
    def n(self):
        return self.rows.shape[0]

    @property
    def dim(self):
        return self.rows.shape[1]


def log_density(g, x):
    """Log of the Gaussian density at ``x``.

    Parameters
    ----------
    g : Gaussian
    x : array_like, shape (k,) or (n, k)

    Returns
    -------
    float for a single point, otherwise an array of shape (n,).
    """
    single = np.ndim(x) == 1
    if single and np.shape(x)[0] != g.dim:
        raise DimensionMismatch(f"x has length {np.shape(x)[0]}, expected {g.dim}")
    rows = check_rows(x, g.dim)
    centered = rows - g.mean
    cov = g.covariance
    if isinstance(cov, Diagonal):
        half_log_det = 0.5 * float(np.sum(np.log(cov.variances)))
        maha = np.sum(centered * centered / cov.variances, axis=1)
    else:
        half_log_det = 0.5 * linalg.log_det(cov.factor)
        y = linalg.solve_lower(cov.factor, centered.T)
        maha = np.sum(y * y, axis=0)
    out = -0.5 * g.dim * LOG_2PI - half_log_det - 0.5 * maha
    return float(out[0]) if single else out


def sample(g, seed, n):
    """Draw ``n`` rows ``mean + L @ eps`` with deviates from the documented stream.

    Deviate ``i * k + j`` of :func:`gausskl._random.standard_normal` is
    component ``j`` of ``eps_i``, so a batch of ``n`` rows is a prefix of
    any larger batch with the same seed.
    """
    seed = check_seed(seed)
    n = check_count(n, 1)
    k = g.dim
    eps = standard_normal(seed, n * k).reshape(n, k)
    cov = g.covariance
    if isinstance(cov, Diagonal):
        rows = g.mean + eps * np.sqrt(cov.variances)
    else:
        rows = g.mean + eps @ cov.factor.lower.T
    rows.setflags(write=False)
    return SampleBatch(rows, seed)


@dataclass(frozen=True)
class MomentReport:
    max_deviation: float
    threshold: float
    passed: bool


def second_moment_check(g, seed, n):
    """Compare the sample ``E[x x^T]`` against ``Sigma + mu mu^T``.

    Passes when the largest elementwise deviation is below
    ``5 * max(1, max_i Sigma_ii) / sqrt(n)``. Requires ``n >= 1000``.
    """
    n = check_count(n, 1000)
    x = sample(g, seed, n).rows
    empirical = x.T @ x / n
    expected = g.covariance.dense() + np.outer(g.mean, g.mean)
    dev = float(np.max(np.abs(empirical - expected)))
    scale = max(1.0, float(np.max(np.diag(g.covariance.dense()))))
    threshold = float(5.0 * scale / np.sqrt(n))
    return MomentReport(dev, threshold, dev <= threshold)
