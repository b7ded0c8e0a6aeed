"""Closed-form KL divergence between multivariate Gaussians.

The result is exposed as the three-term split

    KL(P || Q) = H1 + H2 - H3
    H1 = 1/2 (log|S_q| - log|S_p|)
    H2 = 1/2 (tr(S_q^-1 S_p) + (m_p - m_q)^T S_q^-1 (m_p - m_q))
    H3 = k / 2

Note that ``h2`` carries the factor 1/2, so the three fields add up to the
total with no further scaling.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from ._validation import check_vector
from .exceptions import DimensionMismatch, NonFinite, NonPositiveVariance
from .gaussian import VARIANCE_FLOOR

#: Raw totals in ``[-CLAMP_TOL, 0)`` are reported as zero.
CLAMP_TOL = 1e-10


@dataclass(frozen=True)
class KlBreakdown:
    h1: float
    h2: float
    h3: float

    @property
    def total(self):
        return self.h1 + self.h2 - self.h3

    @property
    def reported_total(self):
        """Total with round-off negatives (down to ``-CLAMP_TOL``) clamped to zero."""
        t = self.total
        return 0.0 if -CLAMP_TOL <= t < 0.0 else t

    def to_dict(self):
        return {"h1": self.h1, "h2": self.h2, "h3": self.h3, "total": self.total}


def kl(p, q):
    """KL(p || q) for two :class:`~gausskl.gaussian.Gaussian` objects.

    Uses an elementwise path when both covariances are diagonal; otherwise
    any diagonal operand is promoted to a dense covariance.

    Returns
    -------
    KlBreakdown
        The raw (unclamped) decomposition.
    """
    if p.dim != q.dim:
        raise DimensionMismatch(f"dimensions differ: {p.dim} vs {q.dim}")
    k = p.dim
    diff = p.mean - q.mean
    if p.is_diagonal and q.is_diagonal:
        vp = p.covariance.variances
        vq = q.covariance.variances
        h1 = 0.5 * float(np.sum(np.log(vq)) - np.sum(np.log(vp)))
        h2 = 0.5 * float(np.sum(vp / vq) + np.sum(diff * diff / vq))
    else:
        l_p = p.as_full().covariance.factor
        l_q = q.as_full().covariance.factor
        h1 = 0.5 * (linalg.log_det(l_q) - linalg.log_det(l_p))
        h2 = 0.5 * (linalg.trace_solve_product(l_q, l_p) + linalg.quadratic_form(l_q, diff))
    return KlBreakdown(h1, h2, 0.5 * k)


def _check_variances(v, name):
    if not np.all(v > VARIANCE_FLOOR):
        raise NonPositiveVariance(f"{name} must be > {VARIANCE_FLOOR:g}")


def kl_diagonal(mu_p, var_p, mu_q, var_q):
    """KL between two diagonal Gaussians from their means and variances."""
    mu_p = check_vector(mu_p, "mu_p")
    k = mu_p.size
    var_p = check_vector(var_p, "var_p", k)
    mu_q = check_vector(mu_q, "mu_q", k)
    var_q = check_vector(var_q, "var_q", k)
    _check_variances(var_p, "var_p")
    _check_variances(var_q, "var_q")
    d = mu_p - mu_q
    terms = var_p / var_q + d * d / var_q - 1.0 + np.log(var_q) - np.log(var_p)
    return 0.5 * float(np.sum(terms))


def kl_univariate(mu_p, var_p, mu_q, var_q):
    """KL between two scalar normals given means and variances."""
    mu_p, var_p, mu_q, var_q = (float(v) for v in (mu_p, var_p, mu_q, var_q))
    if not all(math.isfinite(v) for v in (mu_p, var_p, mu_q, var_q)):
        raise NonFinite("arguments must be finite")
    for name, v in (("var_p", var_p), ("var_q", var_q)):
        if not v > VARIANCE_FLOOR:
            raise NonPositiveVariance(f"{name} must be > {VARIANCE_FLOOR:g}, got {v!r}")
    d = mu_p - mu_q
    return 0.5 * (var_p / var_q + d * d / var_q - 1.0 + math.log(var_q / var_p))
