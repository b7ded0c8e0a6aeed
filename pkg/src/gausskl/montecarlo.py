"""Monte Carlo estimate of KL(P || Q) as the mean log-ratio under samples of P.

This is deliberately independent of the closed form: it touches only the
log-densities and the sampler.
"""

import math
from dataclasses import dataclass

from ._validation import check_count, check_seed
from .exceptions import DimensionMismatch
from .gaussian import log_density, sample


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    n: int
    seed: int

    def to_dict(self):
        return {"mean": self.mean, "std_error": self.std_error, "n": self.n, "seed": self.seed}

    def agrees_with(self, value, n_sigma=4.0):
        return abs(value - self.mean) <= n_sigma * self.std_error


def mc_kl(p, q, n, seed):
    """Estimate KL(p || q) from ``n`` draws of ``p``.

    The mean and the unbiased variance are both accumulated with
    :func:`math.fsum` in sample order. The estimate may be negative.
    """
    if p.dim != q.dim:
        raise DimensionMismatch(f"dimensions differ: {p.dim} vs {q.dim}")
    n = check_count(n, 2)
    seed = check_seed(seed)
    x = sample(p, seed, n).rows
    terms = (log_density(p, x) - log_density(q, x)).tolist()
    mean = math.fsum(terms) / n
    var = math.fsum((t - mean) ** 2 for t in terms) / (n - 1)
    return McEstimate(mean, math.sqrt(var / n), n, seed)
