"""Closed-form KL divergence between multivariate Gaussians, with a Monte
Carlo oracle, the VAE regularizer and its gradient."""

from .divergence import KlBreakdown, kl, kl_diagonal, kl_univariate
from .exceptions import (
    DimensionMismatch,
    GaussKLError,
    NonFinite,
    NonPositiveVariance,
    NotPositiveDefinite,
    NotSymmetric,
    PreconditionError,
    RaggedBatch,
)
from .gaussian import Diagonal, Full, Gaussian, log_density, sample, second_moment_check
from .linalg import CholeskyFactor, SpdMatrix, cholesky, log_det
from .montecarlo import McEstimate, mc_kl
from .vae import VaeKlParams, finite_difference_check, vae_kl, vae_kl_batch, vae_kl_gradient

__version__ = "0.1.0"
