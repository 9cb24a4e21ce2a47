"""Centering distributions and the discrete-time beta-Stacy process"""

import itertools
import math

import numpy as np
import pytest

from conftest import mc_band
from smbs.common.errors import ModelError, ParameterError
from smbs.priors import (
    BetaStacyParams,
    CenteringDistribution,
    DiscreteWeibull1,
    Geometric,
    PrecisionFunction,
    Tabulated,
    UniformSupport,
    bs_mean,
    bs_posterior_censored,
    bs_posterior_exact,
    bs_sample,
    bs_variance,
    draw_holding_time,
)
from smbs.priors.beta_stacy import draw_hazard


def unit_geometric(p: float = 0.5, c: float = 1.0) -> BetaStacyParams:
    return BetaStacyParams(PrecisionFunction.constant(c), Geometric(p))


@pytest.mark.parametrize('centering', [
    Geometric(0.3),
    DiscreteWeibull1(0.3, 0.5),
    UniformSupport(4),
    Tabulated((0.1, 0.2, 0.3), 0.4),
])
def test_centering_pmf_hazard_survival_agree(centering):
    for t in range(1, 8):
        assert centering.survival(t - 1) - centering.survival(t) == pytest.approx(centering.pmf(t), abs=1e-12)
        assert centering.cdf(t) == pytest.approx(1.0 - centering.survival(t), abs=1e-12)
        if centering.survival(t - 1) > 0:
            assert centering.hazard(t) == pytest.approx(centering.pmf(t) / centering.survival(t - 1), abs=1e-12)


@pytest.mark.parametrize('centering', [Geometric(0.3), DiscreteWeibull1(0.6, 0.9), Tabulated((0.5,), 0.25)])
def test_centering_dict_round_trip(centering):
    assert CenteringDistribution.from_dict(centering.to_dict()) == centering


def test_centering_rejects_unknown_family():
    with pytest.raises(ParameterError):
        CenteringDistribution.from_dict({'family': 'poisson', 'mu': 2})


def test_hazard_beyond_support_raises():
    with pytest.raises(ModelError):
        UniformSupport(2).hazard(3)


def test_discrete_weibull_with_unit_shape_is_geometric():
    weibull = DiscreteWeibull1(0.3, 1.0)
    geometric = Geometric(0.7)

    for t in range(1, 10):
        assert weibull.cdf(t) == pytest.approx(geometric.cdf(t), abs=1e-14)


def test_precision_function_head_and_tail():
    precision = PrecisionFunction.from_dict({'head': [2.0, 3.0], 'tail': 0.5})

    assert precision(1) == 2.0
    assert precision(2) == 3.0
    assert precision(9) == 0.5
    assert PrecisionFunction.from_dict(4) == PrecisionFunction.constant(4.0)
    with pytest.raises(ParameterError):
        PrecisionFunction.constant(0.0)


def test_exact_update_worked_example():
    # GIVEN c = 1, F0 = geometric(0.5)
    prior = unit_geometric()

    # WHEN one holding time of 2 is observed
    posterior = bs_posterior_exact(prior, [2])

    # THEN
    assert posterior.survival(1) == pytest.approx(0.75, abs=1e-15)
    assert posterior.survival(2) == pytest.approx(0.125, abs=1e-15)
    assert bs_mean(posterior, 2) == pytest.approx(0.875, abs=1e-15)


def test_censored_update_worked_example():
    posterior = bs_posterior_censored(unit_geometric(), 1)

    assert posterior.survival(1) == pytest.approx(0.75, abs=1e-15)


def test_censored_update_keeps_prior_hazard_beyond_censoring():
    prior = BetaStacyParams(PrecisionFunction.constant(2.0), DiscreteWeibull1(0.4, 0.8))
    posterior = bs_posterior_censored(prior, 3)

    for t in range(4, 12):
        assert posterior.hazard(t) == pytest.approx(prior.centering.hazard(t), rel=1e-12)


def test_censored_survival_dominates_exact_survival():
    prior = unit_geometric(0.3, 2.0)
    for t_star in (1, 2, 4):
        censored = bs_posterior_censored(prior, t_star)
        exact = bs_posterior_exact(prior, [t_star])
        for t in range(t_star, t_star + 10):
            assert censored.survival(t) >= exact.survival(t)


def test_empty_update_returns_prior():
    prior = unit_geometric()

    assert bs_posterior_exact(prior, []) is prior
    for t in range(1, 6):
        assert bs_mean(prior, t) == prior.centering.cdf(t)


def test_batch_update_equals_sequential_in_any_order():
    prior = BetaStacyParams(PrecisionFunction((1.0, 2.0), 0.5), Geometric(0.2))
    batch = bs_posterior_exact(prior, [2, 5, 5])

    for order in itertools.permutations([2, 5, 5]):
        sequential = prior
        for observation in order:
            sequential = bs_posterior_exact(sequential, [observation])
        assert sequential == batch
        for t in range(1, 8):
            assert sequential.survival(t) == batch.survival(t)


def test_observations_must_be_positive():
    with pytest.raises(ParameterError):
        bs_posterior_exact(unit_geometric(), [0])
    with pytest.raises(ParameterError):
        bs_posterior_censored(unit_geometric(), 0)


def test_prior_mean_is_centering():
    assert bs_mean(unit_geometric(0.3), 1) == pytest.approx(0.3)


def test_prior_variance_is_dirichlet_variance_for_constant_precision():
    # constant c makes F(t) ~ Beta(c F0(t), c (1 - F0(t)))
    centering = Geometric(0.3)
    for c in (0.1, 1.0, 10.0):
        params = unit_geometric(0.3, c)
        for t in (1, 3, 7):
            f = centering.cdf(t)
            assert bs_variance(params, t) == pytest.approx(f * (1 - f) / (c + 1), rel=1e-10)


def test_variance_decreases_with_precision():
    variances = [bs_variance(unit_geometric(0.3, c), 3) for c in (0.1, 1.0, 10.0)]

    assert variances[0] > variances[1] > variances[2]


def test_posterior_precision():
    # c_*(t) F_*((t, inf)) = c(t) F0((t, inf)) + N((t, inf))
    posterior = bs_posterior_exact(unit_geometric(0.5, 3.0), [1, 4])

    for t in range(1, 6):
        expected = 3.0 * 0.5 ** t + (1 if t < 4 else 0)
        assert posterior.precision_star(t) * posterior.survival(t) == pytest.approx(expected, rel=1e-12)


def test_sample_point_mass_at_one():
    sample = bs_sample(BetaStacyParams(PrecisionFunction.constant(1.0), Tabulated((1.0,))),
                       np.random.default_rng(1))

    assert sample.hazard(1) == 1.0
    assert sample.survival(1) == 0.0
    assert sample.survival(5) == 0.0


def test_sample_zero_centering_mass_gives_zero_hazard():
    params = BetaStacyParams(PrecisionFunction.constant(1.0), Tabulated((0.5, 0.0, 0.5)))
    sample = bs_sample(params, np.random.default_rng(2))

    assert sample.hazard(2) == 0.0
    assert sample.survival(2) == sample.survival(1)


def test_sample_is_stable_across_queries():
    sample = bs_sample(unit_geometric(0.3, 2.0), np.random.default_rng(3))

    later = sample.survival(10)
    assert sample.survival(4) == sample.survival(4)
    assert sample.survival(10) == later


def test_sample_mean_matches_posterior_mean():
    rng = np.random.default_rng(11)
    params = bs_posterior_exact(BetaStacyParams(PrecisionFunction.constant(2.0), DiscreteWeibull1(0.4, 0.8)),
                                [1, 2, 2, 6])
    n = 20_000
    draws = [bs_sample(params, rng) for _ in range(n)]
    for t in (1, 3, 10):
        values = np.array([d.cdf(t) for d in draws])
        assert mc_band(values.mean(), bs_mean(params, t), bs_variance(params, t), n)


def test_sample_variance_matches_closed_form():
    rng = np.random.default_rng(12)
    params = unit_geometric(0.3, 1.0)
    n = 20_000
    values = np.array([bs_sample(params, rng).survival(3) for _ in range(n)])

    assert mc_band(values.mean(), 0.7 ** 3, bs_variance(params, 3), n)
    assert values.var() == pytest.approx(bs_variance(params, 3), rel=0.1)


def test_draw_holding_time_cap():
    class NeverLeaves:
        def hazard(self, t):
            return 0.0

    with pytest.raises(ModelError):
        draw_holding_time(NeverLeaves(), np.random.default_rng(0), max_steps=50)


def test_draw_holding_time_frequencies():
    rng = np.random.default_rng(13)
    law = Geometric(0.4)
    n = 20_000
    draws = np.array([draw_holding_time(law, rng) for _ in range(n)])

    assert mc_band((draws == 1).mean(), 0.4, 0.4 * 0.6, n)
    assert mc_band(draws.mean(), 2.5, 0.6 / 0.4 ** 2, n)
    assert math.isclose(draws.min(), 1)


def test_draw_holding_time_limit_returns_none_past_the_limit():
    class NeverLeaves:
        def hazard(self, t):
            return 0.0

    # GIVEN a law that never jumps and one that always jumps at 1
    rng = np.random.default_rng(14)

    # WHEN draws are cut at a limit
    # THEN running past the limit gives None instead of an error
    assert draw_holding_time(NeverLeaves(), rng, limit=5) is None
    assert draw_holding_time(Tabulated((1.0,)), rng, limit=5) == 1
    assert draw_holding_time(Tabulated((1.0,)), rng, limit=0) is None


def test_posterior_atoms_track_both_kinds_of_observation():
    prior = unit_geometric()

    assert prior.posterior_atoms == {}

    posterior = bs_posterior_censored(bs_posterior_exact(prior, [2, 2, 4]), 3)

    assert posterior.posterior_atoms == {2: (2, 0), 3: (0, 1), 4: (1, 0)}


def dirichlet_oracle_mean(f0, c, observations, t):
    # Constant precision c and support {1, 2, 3}: F ~ Dir(c f0) on three atoms,
    # so after n exact draws E[F(t)] = sum_{k <= t} (c f0_k + n_k) / (c + n)
    counts = [observations.count(k) for k in (1, 2, 3)]
    n = len(observations)
    return sum(c * f0[k] + counts[k] for k in range(t)) / (c + n)


@pytest.mark.parametrize('c', [0.5, 1.0, 7.0])
def test_posterior_mean_matches_three_atom_dirichlet(c):
    # GIVEN a three-atom centering with constant precision
    f0 = (0.2, 0.5, 0.3)
    prior = BetaStacyParams(PrecisionFunction.constant(c), Tabulated(f0))

    for n in range(4):
        for observations in itertools.combinations_with_replacement((1, 2, 3), n):
            # WHEN the observations are absorbed as exact holding times
            posterior = bs_posterior_exact(prior, list(observations))

            # THEN the beta-Stacy mean is the Dirichlet posterior mean
            for t in (1, 2, 3):
                expected = dirichlet_oracle_mean(f0, c, list(observations), t)
                assert bs_mean(posterior, t) == pytest.approx(expected, abs=1e-10)


def test_sampled_survival_under_geometric_centering_dies_out():
    # GIVEN a geometric centering
    rng = np.random.default_rng(15)

    for c in (0.1, 1.0, 10.0):
        # WHEN a survival function is drawn and read far out
        sample = bs_sample(unit_geometric(0.3, c), rng)

        # THEN it has lost all its mass
        assert sample.survival(10_000) < 1e-12


def test_interleaved_exact_and_censored_updates_commute():
    # GIVEN a mixed stream of exact and censored observations
    prior = BetaStacyParams(PrecisionFunction((1.0, 2.0), 0.5), DiscreteWeibull1(0.4, 0.8))
    updates = [('exact', 2), ('censored', 3), ('exact', 5), ('censored', 1), ('exact', 2)]

    results = []
    for order in itertools.permutations(updates):
        # WHEN they are absorbed one at a time in every order
        params = prior
        for kind, t in order:
            if kind == 'exact':
                params = bs_posterior_exact(params, [t])
            else:
                params = bs_posterior_censored(params, t)
        results.append(params)

    # THEN the posterior is the same beta-Stacy law whatever the order
    batch = bs_posterior_censored(bs_posterior_censored(bs_posterior_exact(prior, [2, 5, 2]), 3), 1)
    for params in results:
        assert params == batch
        for t in range(1, 9):
            assert params.beta_parameters(t) == pytest.approx(batch.beta_parameters(t), rel=1e-12)
            assert params.survival(t) == pytest.approx(batch.survival(t), rel=1e-12)


def test_degenerate_beta_limit_is_reported_at_warning(package_warnings):
    # GIVEN a precision so small that a(1) + b(1) underflows the Beta sampler
    params = BetaStacyParams(PrecisionFunction.constant(1e-13), Geometric(0.5))

    # WHEN the first hazard is drawn
    u = draw_hazard(params, 1, np.random.default_rng(16))

    # THEN the Bernoulli limit is used and logged
    assert u in (0.0, 1.0)
    assert any('Degenerate Beta' in r.getMessage() for r in package_warnings.records)
