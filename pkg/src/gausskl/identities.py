"""Randomized checks of the trace, quadratic-form and moment identities the
closed form relies on.

Algebraic identities are compared at a relative tolerance (deviation
divided by ``max(1, |lhs|, |rhs|)``). Moment identities are checked on
``n`` draws against a ``5 / sqrt(n)`` band.
"""

from dataclasses import dataclass

import numpy as np

from ._validation import check_count, check_seed
from .gaussian import Gaussian, sample, second_moment_check
from .generators import random_spd

ALGEBRAIC_RTOL = 1e-10
N_MOMENT_SAMPLES = 100_000
_N_AVERAGED = 32


@dataclass(frozen=True)
class IdentityResult:
    name: str
    kind: str
    max_deviation: float
    threshold: float

    @property
    def passed(self):
        return self.max_deviation <= self.threshold

    def to_dict(self):
        return {
            "name": self.name,
            "kind": self.kind,
            "max_deviation": self.max_deviation,
            "threshold": self.threshold,
            "passed": self.passed,
        }


def _rel(lhs, rhs):
    lhs, rhs = np.asarray(lhs), np.asarray(rhs)
    scale = max(1.0, float(np.max(np.abs(lhs))), float(np.max(np.abs(rhs))))
    return float(np.max(np.abs(lhs - rhs))) / scale


def _algebraic_trial(rng, k):
    """One draw of every algebraic identity; returns {name: relative deviation}."""
    m, r = rng.integers(1, k + 2, size=2)
    a = rng.uniform(-1, 1, (k, k))
    b = rng.uniform(-1, 1, (k, k))
    ar = rng.uniform(-1, 1, (k, m))
    br = rng.uniform(-1, 1, (m, k))
    bc = rng.uniform(-1, 1, (m, r))
    cc = rng.uniform(-1, 1, (r, k))
    s, t = rng.uniform(-3, 3, size=2)
    x = rng.uniform(-1, 1, k)

    abc, bca, cab = np.trace(ar @ bc @ cc), np.trace(bc @ cc @ ar), np.trace(cc @ ar @ bc)
    quad = x @ a @ x

    xs = rng.uniform(-1, 1, (_N_AVERAGED, k, k))
    vs = rng.standard_normal((_N_AVERAGED, k))
    outer_mean = np.einsum("si,sj->ij", vs, vs) / _N_AVERAGED
    quad_mean = np.mean(np.einsum("si,ij,sj->s", vs, a, vs))

    return {
        "trace_transpose": _rel(np.trace(a), np.trace(a.T)),
        "trace_commutative": _rel(np.trace(ar @ br), np.trace(br @ ar)),
        "trace_cyclic": max(_rel(abc, bca), _rel(abc, cab)),
        "trace_linearity": _rel(np.trace(s * a + t * b), s * np.trace(a) + t * np.trace(b)),
        "quadratic_form_trace": max(
            _rel(quad, np.trace(np.atleast_2d(quad))),
            _rel(quad, np.trace(a @ np.outer(x, x))),
        ),
        "expectation_trace": _rel(np.mean(np.trace(xs, axis1=1, axis2=2)), np.trace(xs.mean(axis=0))),
        "expectation_quadratic": _rel(quad_mean, np.trace(a @ outer_mean)),
    }


def _moment_gaussian(rng, k):
    # Moderate scales keep the per-entry sample std below 1, so the 5/sqrt(n)
    # band is at least a 5-sigma band.
    a = random_spd(rng, k)
    return Gaussian.full(rng.uniform(-0.5, 0.5, k), 0.5 * a / np.max(np.diag(a)))


def run_identity_suite(dim, trials, seed, n_samples=N_MOMENT_SAMPLES, rtol=ALGEBRAIC_RTOL):
    """Run every identity check and return a list of :class:`IdentityResult`.

    Parameters
    ----------
    dim : int
        Vector and square-matrix dimension ``k``.
    trials : int
        Number of random instances per algebraic identity.
    seed : int
        Seeds both the problem generator and the Gaussian sampler.
    n_samples : int
        Draws used for the moment identities.
    rtol : float
        Relative tolerance for the algebraic identities.
    """
    k = check_count(dim, 1, "dim")
    trials = check_count(trials, 1, "trials")
    seed = check_seed(seed)
    n = check_count(n_samples, 1000, "n_samples")
    rng = np.random.default_rng(seed)

    worst = {}
    for _ in range(trials):
        for name, dev in _algebraic_trial(rng, k).items():
            worst[name] = max(worst.get(name, 0.0), dev)
    results = [IdentityResult(name, "algebraic", dev, rtol) for name, dev in worst.items()]

    band = float(5.0 / np.sqrt(n))

    # Covariance definition on a non-Gaussian vector: mu + A u with unit-variance uniforms.
    mix = rng.uniform(-1, 1, (k, k)) / np.sqrt(2 * k)
    mu = rng.uniform(-0.5, 0.5, k)
    u = rng.uniform(-np.sqrt(3.0), np.sqrt(3.0), (n, k))
    x = mu + u @ mix.T
    centered = x - mu
    sigma = mix @ mix.T
    empirical = centered.T @ centered / n
    results.append(
        IdentityResult(
            "covariance_definition",
            "statistical",
            float(np.max(np.abs(empirical - sigma))),
            band * max(1.0, float(np.max(np.diag(sigma)))),
        )
    )

    g = _moment_gaussian(rng, k)
    cov = g.covariance.dense()
    max_var = float(np.max(np.diag(cov)))
    x = sample(g, seed, n).rows
    results.append(
        IdentityResult(
            "gaussian_mean",
            "statistical",
            float(np.max(np.abs(x.mean(axis=0) - g.mean))),
            float(5.0 * np.sqrt(max_var / n)),
        )
    )
    c = x - g.mean
    results.append(
        IdentityResult(
            "gaussian_covariance",
            "statistical",
            float(np.max(np.abs(c.T @ c / n - cov))),
            band * max(1.0, max_var),
        )
    )
    report = second_moment_check(g, seed, n)
    results.append(
        IdentityResult("gaussian_second_moment", "statistical", report.max_deviation, report.threshold)
    )
    return results
