import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from gausskl.divergence import kl
from gausskl.exceptions import DimensionMismatch, NonFinite, PreconditionError, RaggedBatch
from gausskl.gaussian import Gaussian
from gausskl.montecarlo import mc_kl
from gausskl.vae import (
    VaeKlParams,
    finite_difference_check,
    vae_kl,
    vae_kl_batch,
    vae_kl_gradient,
)


def random_params(rng, k):
    return VaeKlParams(rng.standard_normal(k), rng.uniform(-2.0, 2.0, k))


@pytest.mark.parametrize("k", [1, 4, 32])
def test_prior_matches_prior(k):
    assert vae_kl(VaeKlParams(np.zeros(k), np.zeros(k))) == 0.0


def test_examples():
    assert vae_kl(VaeKlParams([1.0, 0.0], [0.0, 0.0])) == 0.5
    assert vae_kl(VaeKlParams([0.0], [math.log(2.0)])) == pytest.approx(0.15342640972002736, abs=1e-15)


def test_example_agrees_with_oracle():
    p = Gaussian.diagonal([0.0], [2.0])
    est = mc_kl(p, Gaussian.standard(1), 200_000, 5)
    assert abs(est.mean - vae_kl(VaeKlParams([0.0], [math.log(2.0)]))) <= 4 * est.std_error


def test_matches_general_divergence(rng):
    for _ in range(100):
        k = int(rng.integers(1, 33))
        params = random_params(rng, k)
        p = Gaussian.diagonal(params.mu, np.exp(params.log_var))
        assert abs(vae_kl(params) - kl(p, Gaussian.standard(k)).total) <= 1e-12


def test_validation():
    with pytest.raises(DimensionMismatch):
        VaeKlParams([0.0, 0.0], [0.0])
    with pytest.raises(NonFinite):
        VaeKlParams([np.inf], [0.0])
    with pytest.raises(NonFinite):
        VaeKlParams([0.0], [81.0])
    VaeKlParams([0.0], [-80.0])


def test_gradient_examples():
    g = vae_kl_gradient(VaeKlParams(np.zeros(3), np.zeros(3)))
    assert np.array_equal(g.d_mu, np.zeros(3)) and np.array_equal(g.d_log_var, np.zeros(3))
    g = vae_kl_gradient(VaeKlParams([1.0], [0.0]))
    assert g.d_mu.tolist() == [1.0] and g.d_log_var.tolist() == [0.0]
    g = vae_kl_gradient(VaeKlParams([0.0], [math.log(2.0)]))
    assert g.d_log_var[0] == pytest.approx(0.5, abs=1e-15)


def test_gradient_against_independent_difference(rng):
    # Forward/backward difference at a different step from the harness' central one.
    params = random_params(rng, 5)
    g = vae_kl_gradient(params)
    h = 1e-7
    for i in range(5):
        lv = params.log_var.copy()
        lv[i] += h
        numeric = (vae_kl(VaeKlParams(params.mu, lv)) - vae_kl(params)) / h
        assert numeric == pytest.approx(g.d_log_var[i], abs=1e-5)


def test_finite_difference_check(rng):
    assert finite_difference_check(random_params(rng, 16), 1e-5) <= 1e-6
    assert finite_difference_check(VaeKlParams(np.zeros(4), np.zeros(4)), 1e-5) <= 1e-8
    for step in (1e-9, 1e-2, 0.0, -1e-5):
        with pytest.raises(PreconditionError):
            finite_difference_check(VaeKlParams([0.0], [0.0]), step)


def test_finite_difference_detects_wrong_gradient(monkeypatch, rng):
    import gausskl.vae as vae

    real = vae.vae_kl_gradient
    monkeypatch.setattr(vae, "vae_kl_gradient", lambda p: vae.VaeKlGradient(real(p).d_mu * 1.01, real(p).d_log_var))
    assert finite_difference_check(VaeKlParams([1.0, 2.0], [0.0, 0.0])) > 1e-3


class TestBatch:
    def test_identical_rows(self):
        row = VaeKlParams([0.3, -0.2], [0.1, 0.4])
        res = vae_kl_batch([row, row])
        assert res.values[0] == res.values[1] == res.mean

    def test_two_rows(self):
        res = vae_kl_batch([(np.zeros(2), np.zeros(2)), ([1.0, 0.0], [0.0, 0.0])])
        assert res.values.tolist() == [0.0, 0.5]
        assert res.mean == 0.25

    def test_empty(self):
        with pytest.raises(RaggedBatch):
            vae_kl_batch([])

    def test_ragged(self):
        with pytest.raises(RaggedBatch):
            vae_kl_batch([([0.0], [0.0]), ([0.0, 1.0], [0.0, 0.0])])

    def test_order_independent(self, rng):
        rows = [random_params(rng, 6) for _ in range(20)]
        res = vae_kl_batch(rows)
        perm = rng.permutation(20)
        shuffled = vae_kl_batch([rows[i] for i in perm])
        np.testing.assert_array_equal(shuffled.values, res.values[perm])
        assert shuffled.mean == res.mean


def test_gradient_check_random(rng):
    for _ in range(50):
        assert finite_difference_check(random_params(rng, int(rng.integers(1, 33))), 1e-5) <= 1e-6


@settings(max_examples=200, deadline=None)
@given(
    mu=arrays(np.float64, 3, elements=st.floats(-10, 10)),
    log_var=arrays(np.float64, 3, elements=st.floats(-10, 10)),
)
def test_non_negative(mu, log_var):
    assert vae_kl(VaeKlParams(mu, log_var)) >= 0.0


@settings(max_examples=100, deadline=None)
@given(
    mu=arrays(np.float64, 3, elements=st.floats(-1e-6, 1e-6)),
    log_var=arrays(np.float64, 3, elements=st.floats(-1e-6, 1e-6)),
)
def test_near_zero_at_prior(mu, log_var):
    assert vae_kl(VaeKlParams(mu, log_var)) <= 1e-10


def test_zero_only_at_prior(rng):
    for _ in range(100):
        params = random_params(rng, 4)
        assert vae_kl(params) > 0


def test_midpoint_convexity(rng):
    for _ in range(200):
        k = int(rng.integers(1, 9))
        mu_a, mu_b = rng.standard_normal(k), rng.standard_normal(k)
        lv_a, lv_b = -rng.uniform(0, 4, k), -rng.uniform(0, 4, k)
        fa = vae_kl(VaeKlParams(mu_a, lv_a))
        fb = vae_kl(VaeKlParams(mu_b, lv_b))
        fm = vae_kl(VaeKlParams((mu_a + mu_b) / 2, (lv_a + lv_b) / 2))
        assert fm <= (fa + fb) / 2 + 1e-12
