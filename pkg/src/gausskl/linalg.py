"""Dense kernels for symmetric positive-definite matrices.

Everything the closed-form divergence needs (log-determinants and
applications of an inverse covariance) goes through a lower Cholesky
factor; no explicit inverse is ever formed.
"""

from dataclasses import dataclass

import numpy as np

from ._validation import check_square
from .exceptions import DimensionMismatch, NotPositiveDefinite, NotSymmetric

#: Relative tolerance of the symmetry check.
SYMMETRY_RTOL = 1e-10
#: Pivots at or below this value are treated as singular.
PIVOT_FLOOR = 1e-300


def _frozen(arr):
    arr = np.array(arr, dtype=np.float64, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SpdMatrix:
    """Dense symmetric matrix intended as a covariance.

    Symmetry is checked on construction (never repaired). Positive
    definiteness is established by :func:`cholesky`.
    """

    entries: np.ndarray

    def __post_init__(self):
        a = check_square(self.entries, "covariance")
        scale = max(1.0, float(np.max(np.abs(a))))
        asym = float(np.max(np.abs(a - a.T)))
        if asym > SYMMETRY_RTOL * scale:
            raise NotSymmetric(
                f"matrix is not symmetric: max |A - A^T| = {asym:.3e} "
                f"exceeds {SYMMETRY_RTOL:g} * {scale:.3e}"
            )
        object.__setattr__(self, "entries", _frozen(a))

    @property
    def dim(self):
        return self.entries.shape[0]


@dataclass(frozen=True, eq=False)
class CholeskyFactor:
    """Lower-triangular ``L`` with strictly positive diagonal, ``L @ L.T = A``."""

    lower: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "lower", _frozen(self.lower))

    @property
    def dim(self):
        return self.lower.shape[0]


def as_spd(a):
    return a if isinstance(a, SpdMatrix) else SpdMatrix(a)


def cholesky(a):
    """Lower Cholesky factor of a symmetric positive-definite matrix.

    Parameters
    ----------
    a : SpdMatrix or array_like, shape (k, k)
        Only the lower triangle is read once symmetry has been validated.

    Returns
    -------
    CholeskyFactor

    Raises
    ------
    NotSymmetric
        If ``a`` fails the symmetry check.
    NotPositiveDefinite
        If some pivot is not greater than ``PIVOT_FLOOR``.
    """
    a = as_spd(a).entries
    k = a.shape[0]
    L = np.zeros((k, k))
    for j in range(k):
        row = L[j, :j]
        pivot = a[j, j] - row @ row
        if not pivot > PIVOT_FLOOR:
            raise NotPositiveDefinite(
                f"pivot {j} is {pivot:.6g}, must exceed {PIVOT_FLOOR:g}"
            )
        L[j, j] = np.sqrt(pivot)
        L[j + 1:, j] = (a[j + 1:, j] - L[j + 1:, :j] @ row) / L[j, j]
    return CholeskyFactor(L)


def log_det(l):
    """Log-determinant of ``L @ L.T``, i.e. ``2 * sum(log(diag(L)))``."""
    return 2.0 * float(np.sum(np.log(np.diag(l.lower))))


def solve_lower(l, b):
    """Forward substitution: solve ``L @ y = b``.

    ``b`` may be a vector of length ``k`` or a ``(k, m)`` matrix whose
    columns are solved simultaneously.
    """
    b = np.asarray(b, dtype=np.float64)
    L = l.lower
    k = L.shape[0]
    if b.ndim not in (1, 2) or b.shape[0] != k:
        raise DimensionMismatch(f"right-hand side has shape {b.shape}, factor has dim {k}")
    y = np.empty_like(b)
    for i in range(k):
        y[i] = (b[i] - L[i, :i] @ y[:i]) / L[i, i]
    return y


def quadratic_form(l_q, d):
    """``d^T A^{-1} d`` for ``A = L_q L_q^T``, as the squared norm of ``L_q^{-1} d``."""
    d = np.asarray(d, dtype=np.float64)
    if d.ndim != 1:
        raise DimensionMismatch(f"d must be a vector, got shape {d.shape}")
    y = solve_lower(l_q, d)
    return float(y @ y)


def trace_solve_product(l_q, sigma_p):
    """``tr(A_q^{-1} A_p)`` computed as ``||L_q^{-1} L_p||_F^2``.

    ``sigma_p`` may be an :class:`SpdMatrix`, an array, or an existing
    :class:`CholeskyFactor` of ``A_p``.
    """
    l_p = sigma_p if isinstance(sigma_p, CholeskyFactor) else cholesky(sigma_p)
    if l_p.dim != l_q.dim:
        raise DimensionMismatch(f"dimensions differ: {l_q.dim} vs {l_p.dim}")
    m = solve_lower(l_q, l_p.lower)
    return float(np.sum(m * m))
