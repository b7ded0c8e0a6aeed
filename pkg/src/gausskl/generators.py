"""Random problem generators used by the identity suite and the test-suite."""

import numpy as np

from .gaussian import Gaussian


def random_spd(rng, k):
    """``M^T M + k I`` with ``M`` uniform in [-1, 1]."""
    m = rng.uniform(-1.0, 1.0, size=(k, k))
    a = m.T @ m + k * np.eye(k)
    return 0.5 * (a + a.T)


def random_gaussian(rng, k, diagonal=False, mean_scale=1.0, cov_scale=1.0):
    mean = rng.uniform(-mean_scale, mean_scale, size=k)
    if diagonal:
        return Gaussian.diagonal(mean, cov_scale * rng.uniform(0.2, 3.0, size=k))
    a = random_spd(rng, k)
    return Gaussian.full(mean, cov_scale * a / np.max(np.diag(a)))


def random_invertible(rng, k, max_cond=100.0):
    """Random ``k x k`` matrix with condition number at most ``max_cond``."""
    u, _ = np.linalg.qr(rng.standard_normal((k, k)))
    v, _ = np.linalg.qr(rng.standard_normal((k, k)))
    s = np.exp(rng.uniform(0.0, np.log(max_cond), size=k))
    return (u * s) @ v.T
