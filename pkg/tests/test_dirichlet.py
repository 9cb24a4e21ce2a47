"""Dirichlet process on a finite state space"""

import itertools

import numpy as np
import pytest

from conftest import mc_band
from smbs.common.errors import ParameterError
from smbs.core import StateSpace
from smbs.priors import DirichletParams, dir_mean, dir_posterior, dir_sample, dir_variance

SPACE2 = StateSpace((0, 1))
SPACE3 = StateSpace((0, 1, 2))


def test_posterior_adds_counts():
    prior = DirichletParams(SPACE3, (1.0, 0.0, 1.0))

    assert dir_posterior(prior, [0, 0, 2]).masses == (1.0, 0.0, 3.0)


def test_zero_counts_return_prior():
    prior = DirichletParams(SPACE3, (1.0, 2.0, 0.5))

    assert dir_posterior(prior, [0, 0, 0]) is prior


def test_batch_equals_sequential_singletons():
    prior = DirichletParams(SPACE3, (0.5, 1.0, 2.0))
    draws = [0, 2, 2, 1]
    batch = dir_posterior(prior, [1, 1, 2])

    for order in set(itertools.permutations(draws)):
        sequential = prior
        for state in order:
            counts = [0, 0, 0]
            counts[state] = 1
            sequential = dir_posterior(sequential, counts)
        assert sequential == batch


def test_posterior_rejects_bad_counts():
    prior = DirichletParams(SPACE3, (1.0, 1.0, 1.0))

    with pytest.raises(ParameterError):
        dir_posterior(prior, [1, -1, 0])
    with pytest.raises(ParameterError):
        dir_posterior(prior, [1, 0])


def test_params_reject_zero_total():
    with pytest.raises(ParameterError):
        DirichletParams(SPACE2, (0.0, 0.0))


def test_mean_and_variance():
    params = DirichletParams(SPACE2, (2.0, 3.0))

    assert dir_mean(DirichletParams(SPACE2, (1.0, 1.0)), 0) == 0.5
    assert dir_mean(params, 0) == pytest.approx(0.4)
    assert dir_variance(params, 0) == pytest.approx(0.04)


def test_zero_mass_state_gets_zero_probability():
    params = DirichletParams(SPACE3, (1.0, 0.0, 2.0))
    rng = np.random.default_rng(5)

    assert dir_mean(params, 1) == 0.0
    for _ in range(100):
        assert dir_sample(params, rng)[1] == 0.0


def test_degenerate_sample():
    rng = np.random.default_rng(6)

    for _ in range(10):
        assert dir_sample(DirichletParams(SPACE2, (0.0, 5.0)), rng).tolist() == [0.0, 1.0]


def test_sample_moments():
    rng = np.random.default_rng(7)
    n = 50_000
    symmetric = np.array([dir_sample(DirichletParams(SPACE2, (1.0, 1.0)), rng)[0] for _ in range(n)])
    skewed = np.array([dir_sample(DirichletParams(SPACE2, (2.0, 3.0)), rng)[0] for _ in range(n)])

    assert mc_band(symmetric.mean(), 0.5, 1 / 12, n)
    assert mc_band(skewed.mean(), 0.4, 0.04, n)
    # fourth central moment of Beta(2, 3) bounds the spread of the sample variance
    assert abs(skewed.var() - 0.04) <= 4 * np.sqrt(0.0048 / n)


def test_tiny_masses_keep_their_marginal_mean():
    # GIVEN masses small enough that unnormalized gamma draws underflow to zero
    params = DirichletParams(SPACE2, (0.002, 0.001))
    rng = np.random.default_rng(1)
    n = 100_000

    # WHEN
    draws = np.array([dir_sample(params, rng) for _ in range(n)])

    # THEN every draw is a pmf and P({1}) has the Beta(0.001, 0.002) mean
    np.testing.assert_allclose(draws.sum(axis=1), 1.0, rtol=0, atol=1e-12)
    expected = dir_mean(params, 1)
    assert expected == pytest.approx(1 / 3)
    assert mc_band(draws[:, 1].mean(), expected, dir_variance(params, 1), n)
