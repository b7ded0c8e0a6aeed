"""The VAE regularizer: KL from a diagonal posterior to the standard-normal prior.

The posterior is parameterized by its mean and elementwise log-variance,
matching the usual encoder outputs. For a dense posterior covariance use
:func:`gausskl.divergence.kl` with ``Gaussian.standard(k)`` as ``q``.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_vector
from .exceptions import DimensionMismatch, NonFinite, PreconditionError, RaggedBatch

LOG_VAR_BOUND = 80.0


@dataclass(frozen=True, eq=False)
class VaeKlParams:
    mu: np.ndarray
    log_var: np.ndarray

    def __post_init__(self):
        mu = check_vector(self.mu, "mu")
        log_var = check_vector(self.log_var, "log_var")
        if mu.size != log_var.size:
            raise DimensionMismatch(
                f"mu has length {mu.size} but log_var has length {log_var.size}"
            )
        if np.any(np.abs(log_var) > LOG_VAR_BOUND):
            raise NonFinite(f"log_var entries must lie in [-{LOG_VAR_BOUND:g}, {LOG_VAR_BOUND:g}]")
        mu, log_var = mu.copy(), log_var.copy()
        mu.setflags(write=False)
        log_var.setflags(write=False)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "log_var", log_var)

    @property
    def dim(self):
        return self.mu.size


@dataclass(frozen=True, eq=False)
class VaeKlGradient:
    d_mu: np.ndarray
    d_log_var: np.ndarray


def _as_params(params):
    return params if isinstance(params, VaeKlParams) else VaeKlParams(*params)


def _vae_kl(mu, log_var):
    # expm1 keeps the per-coordinate term non-negative near log_var = 0.
    return 0.5 * float(np.sum(np.expm1(log_var) - log_var + mu * mu))


def vae_kl(params):
    """``1/2 * sum(exp(log_var) + mu**2 - 1 - log_var)``."""
    params = _as_params(params)
    return _vae_kl(params.mu, params.log_var)


def vae_kl_gradient(params):
    """Analytic gradient: ``d_mu = mu`` and ``d_log_var = (exp(log_var) - 1) / 2``."""
    params = _as_params(params)
    return VaeKlGradient(params.mu.copy(), 0.5 * np.expm1(params.log_var))


def finite_difference_check(params, step=1e-5):
    """Max relative error between the analytic gradient and central differences.

    The error per coordinate is ``|analytic - numeric| / max(1, |analytic|)``.
    ``step`` must lie in the open interval (1e-9, 1e-2).
    """
    params = _as_params(params)
    if not 1e-9 < step < 1e-2:
        raise PreconditionError(f"step must lie in (1e-9, 1e-2), got {step!r}")
    grad = vae_kl_gradient(params)
    x = np.concatenate([params.mu, params.log_var])
    analytic = np.concatenate([grad.d_mu, grad.d_log_var])
    k = params.dim

    def f(v):
        return _vae_kl(v[:k], v[k:])

    worst = 0.0
    for i in range(x.size):
        up, down = x.copy(), x.copy()
        up[i] += step
        down[i] -= step
        numeric = (f(up) - f(down)) / (up[i] - down[i])
        err = abs(analytic[i] - numeric) / max(1.0, abs(analytic[i]))
        worst = max(worst, err)
    return worst


@dataclass(frozen=True, eq=False)
class BatchResult:
    values: np.ndarray
    mean: float


def vae_kl_batch(rows):
    """Row-wise :func:`vae_kl` over a minibatch plus the mean.

    ``rows`` is a sequence of :class:`VaeKlParams` (or ``(mu, log_var)``
    pairs). The mean is an exactly rounded sum in index order, so it does
    not depend on how the rows were evaluated.
    """
    rows = [_as_params(r) for r in rows]
    if not rows:
        raise RaggedBatch("batch is empty")
    k = rows[0].dim
    for i, r in enumerate(rows):
        if r.dim != k:
            raise RaggedBatch(f"row {i} has dimension {r.dim}, expected {k}")
    values = np.array([vae_kl(r) for r in rows])
    return BatchResult(values, math.fsum(values) / len(values))
