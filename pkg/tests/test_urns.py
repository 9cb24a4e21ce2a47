"""Dir-urns, BS-systems and the reinforced urn processes"""

import itertools

import numpy as np
import pytest

from conftest import SPACE3, TopOfRange, all_paths, mc_band, mixed_prior
from smbs.common.errors import ModelError
from smbs.core import StateSequence, StateSpace, count_statistics, decompose_path
from smbs.predictive import PredictiveState, path_probability, predictive_kernel, variant_b_kernel
from smbs.priors import BetaStacyParams, Geometric, PrecisionFunction, Tabulated, bs_posterior_exact
from smbs.process import PairParams, SmbsParams, VariantBParams, variant_b_posterior
from smbs.urns import BLACK, WHITE, BsSystem, DirUrn, UrnDraw, UrnProcess, rup_generate

SPACE2 = StateSpace((0, 1))


def unit_geometric(p: float = 0.5) -> BetaStacyParams:
    return BetaStacyParams(PrecisionFunction.constant(1.0), Geometric(p))


def test_single_color_urn_always_draws_it():
    urn = DirUrn(SPACE3, (0.0, 2.5, 0.0))
    rng = np.random.default_rng(0)

    assert {urn.draw(rng) for _ in range(20)} == {1}
    assert urn.composition.tolist() == [0.0, 22.5, 0.0]
    assert urn.draw_count == 20


def test_urn_never_draws_a_color_with_no_mass():
    # GIVEN an urn whose last color has no balls
    urn = DirUrn(SPACE3, (0.1, 0.2, 0.0))

    # WHEN the uniform sits at the top of its range
    color = urn.draw(TopOfRange())

    # THEN the last positive color is drawn and reinforced
    assert color == 1
    assert urn.composition.tolist() == pytest.approx([0.1, 1.2, 0.0])


def test_two_draw_enumeration():
    urn = DirUrn(SPACE2, (1.0, 1.0))

    for a, b in itertools.product(SPACE2.states, repeat=2):
        expected = 0.5 * (2 / 3) if a == b else 0.5 * (1 / 3)
        assert urn.sequence_probability([a, b]) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize('masses', [(1.0, 1.0, 1.0), (0.5, 2.0, 0.25), (3.0, 0.0, 1.0)])
def test_color_sequences_are_exchangeable(masses):
    urn = DirUrn(SPACE3, masses)
    for length in (1, 2, 3):
        for colors in itertools.product(SPACE3.states, repeat=length):
            probability = urn.sequence_probability(colors)
            for permuted in itertools.permutations(colors):
                assert abs(urn.sequence_probability(permuted) - probability) <= 1e-14


def test_predictive_rule_after_simulated_history():
    masses = (0.5, 2.0, 0.25)
    urn = DirUrn(SPACE3, masses)
    rng = np.random.default_rng(1)
    counts = np.zeros(3)
    for n in range(50):
        expected = (np.array(masses) + counts) / (sum(masses) + n)
        np.testing.assert_allclose(urn.probabilities(), expected, rtol=0, atol=1e-14)
        counts[SPACE3.index(urn.draw(rng))] += 1


def test_empty_urn_raises():
    with pytest.raises(ModelError):
        DirUrn(SPACE2, (0.0, 0.0)).draw(np.random.default_rng(0))


def test_system_point_mass_at_one():
    system = BsSystem(BetaStacyParams(PrecisionFunction.constant(1.0), Tabulated((1.0,))))
    rng = np.random.default_rng(2)

    assert [system.draw(rng) for _ in range(10)] == [1] * 10


def test_fresh_system_probabilities():
    system = BsSystem(unit_geometric())

    assert 1 - system.survival_probability(1) == pytest.approx(0.5, abs=1e-15)
    assert system.survival_probability(1) - system.survival_probability(2) == pytest.approx(0.25, abs=1e-15)


def test_system_after_one_observation():
    system = BsSystem(unit_geometric())
    system.force_at(1, black=False)
    system.force_at(2, black=True)

    assert system.survival_probability(1) == pytest.approx(0.75, abs=1e-14)
    assert system.survival_probability(2) == pytest.approx(bs_posterior_exact(unit_geometric(), [2]).survival(2),
                                                           abs=1e-12)


def force_holding_time(system: BsSystem, t: int) -> None:
    for s in range(1, t):
        system.force_at(s, black=False)
    system.force_at(t, black=True)


def test_system_predictive_matches_beta_stacy_posterior():
    prior = BetaStacyParams(PrecisionFunction((0.5, 2.0), 1.2), Geometric(0.35))
    for length in (1, 2, 3):
        for history in itertools.product(range(1, 5), repeat=length):
            system = BsSystem(prior)
            for t in history:
                force_holding_time(system, t)
            posterior = bs_posterior_exact(prior, list(history))
            for t in range(1, 9):
                assert abs(system.survival_probability(t) - posterior.survival(t)) <= 1e-12


def test_system_predictive_matches_posterior_after_random_draws():
    prior = unit_geometric(0.3)
    rng = np.random.default_rng(3)
    system = BsSystem(prior)
    history = []
    for _ in range(3):
        history.append(system.draw(rng))
        posterior = bs_posterior_exact(prior, history)
        for t in range(1, 9):
            assert abs(system.survival_probability(t) - posterior.survival(t)) <= 1e-12


def test_system_iteration_cap():
    system = BsSystem(BetaStacyParams(PrecisionFunction.constant(1.0), Geometric(1e-9)))

    with pytest.raises(ModelError):
        system.draw(np.random.default_rng(4), max_iter=100)


def scripted_prior() -> SmbsParams:
    """State 1 holds exactly 3 steps then moves to 3; state 3 holds 2 steps then moves to 2"""
    space = StateSpace((1, 2, 3))
    return SmbsParams.from_arrays(
        space,
        [[0, 0, 1], [1, 0, 1], [0, 1, 0]],
        PrecisionFunction.constant(1.0),
        [Tabulated((0.0, 0.0, 1.0)), Geometric(0.5), Tabulated((0.0, 1.0))],
    )


def test_scripted_walk_trace_order():
    # GIVEN
    draws = []
    walk = UrnProcess.from_smbs(scripted_prior(), 1, tracer=draws.append)

    # WHEN
    jumps = walk.generate(2, np.random.default_rng(5))

    # THEN
    assert jumps.visited == (1, 3, 2)
    assert jumps.holding == (3, 2)
    assert [d.urn_id for d in draws] == ['V1,1', 'V1,2', 'V1,3', 'U1', 'V3,1', 'V3,2', 'U3']
    assert [d.color for d in draws] == [WHITE, WHITE, BLACK, 3, WHITE, BLACK, 2]
    diagnostics = walk.recurrence_diagnostics()
    assert diagnostics.visits == {1: 1, 2: 1, 3: 1}
    assert diagnostics.transitions == {(1, 3): 1, (3, 2): 1}


def test_rup_generate_without_jumps():
    jumps = rup_generate(mixed_prior(), 2, 0, np.random.default_rng(6))

    assert jumps.visited == (2,)
    assert jumps.holding == ()
    assert jumps.terminal_age == 0


def test_fresh_walk_diagnostics():
    diagnostics = UrnProcess.from_smbs(mixed_prior(), 0).recurrence_diagnostics()

    assert diagnostics.transitions == {}
    assert diagnostics.visits == {0: 1, 1: 0, 2: 0}
    assert diagnostics.unvisited() == [1, 2]


def test_diagnostics_match_recount():
    walk = UrnProcess.from_smbs(mixed_prior(), 0)
    jumps = walk.generate(40, np.random.default_rng(7))
    diagnostics = walk.recurrence_diagnostics()

    for state in SPACE3.states:
        assert diagnostics.visits[state] == jumps.visited.count(state)
    stats = count_statistics(walk.path())
    for (i, j), count in diagnostics.transitions.items():
        assert stats.transition_count(i, j) == count
    assert sum(diagnostics.transitions.values()) == jumps.n_jumps


def test_reinforcement_is_monotone():
    draws = []
    walk = UrnProcess.from_smbs(mixed_prior(), 1, tracer=draws.append)
    walk.generate(30, np.random.default_rng(8))

    for draw in draws:
        gained = np.subtract(draw.post_masses, draw.pre_masses)
        assert np.all(gained >= 0.0)
        assert sorted(gained.tolist())[-1] == 1.0
        assert np.count_nonzero(gained) == 1


def test_draw_record_serializes():
    record = UrnDraw('V1,2', WHITE, (0.25, 0.5), (0.25, 1.5)).to_dict()

    assert record == {'urn_id': 'V1,2', 'color': 'white', 'pre_masses': [0.25, 0.5], 'post_masses': [0.25, 1.5]}


def test_fresh_urns_match_fresh_kernel():
    prior = mixed_prior()
    for state in SPACE3.states:
        walk = UrnProcess.from_smbs(prior, state)
        kernel = predictive_kernel(PredictiveState.from_path(prior, StateSequence(SPACE3, (state,))))
        np.testing.assert_allclose(walk.step_probabilities(), kernel, rtol=0, atol=1e-14)


def test_urn_walk_matches_kernel_on_every_short_prefix():
    prior = mixed_prior()
    for path in all_paths(SPACE3, 6):
        walk = UrnProcess.from_smbs(prior, path.states[0])
        probability = walk.replay(path)
        kernel = predictive_kernel(PredictiveState.from_path(prior, path))
        np.testing.assert_allclose(walk.step_probabilities(), kernel, rtol=0, atol=1e-12)
        assert probability == pytest.approx(path_probability(prior, path), abs=1e-12)


def test_urn_walk_generates_the_reinforced_semi_markov_law():
    prior = mixed_prior()
    exact = np.zeros(SPACE3.size)
    for future in itertools.product(SPACE3.states, repeat=3):
        exact[SPACE3.index(future[-1])] += path_probability(prior, StateSequence(SPACE3, (0,) + future))

    rng = np.random.default_rng(9)
    n = 20_000
    finals = np.zeros(n, dtype=int)
    for k in range(n):
        walk = UrnProcess.from_smbs(prior, 0)
        for _ in range(3):
            walk.step(rng)
        finals[k] = walk.current
    for k, state in enumerate(SPACE3.states):
        assert mc_band((finals == state).mean(), exact[k], exact[k] * (1 - exact[k]), n)


TIME_BUNDLE = {
    'states': [
        {'state': 0, 'jump_masses': [{'state': 1, 'mass': 1.0}, {'state': 2, 'mass': 2.0}],
         'precision': 2.0, 'centering': {'family': 'geometric', 'p': 0.4},
         'time_indexed_jump_masses': [{'t': 1, 'masses': [{'state': 1, 'mass': 4.0}, {'state': 2, 'mass': 0.5}]}]},
        {'state': 1, 'jump_masses': [{'state': 0, 'mass': 0.5}, {'state': 2, 'mass': 1.5}],
         'centering': {'family': 'discrete_weibull1', 'q': 0.5, 'k': 0.7}},
        {'state': 2, 'jump_masses': [{'state': 0, 'mass': 1.0}, {'state': 1, 'mass': 1.0}],
         'centering': {'family': 'table', 'pmf': [0.2, 0.3], 'tail_rate': 0.5},
         'time_indexed_jump_masses': [{'t': 2, 'masses': [{'state': 1, 'mass': 5.0}, {'state': 0, 'mass': 0.1}]}]},
    ]
}


def test_time_indexed_urns_match_variant_b_posterior_predictive():
    prior = VariantBParams.from_dict(SPACE3, TIME_BUNDLE)
    for path in all_paths(SPACE3, 5):
        walk = UrnProcess.from_variant_b(prior, path.states[0])
        walk.replay(path)
        jumps = decompose_path(path)
        kernel = variant_b_kernel(variant_b_posterior(prior, path), jumps.visited[-1], jumps.terminal_age_next)
        np.testing.assert_allclose(walk.step_probabilities(), kernel, rtol=0, atol=1e-12)


def test_time_indexed_walk_uses_row_of_realized_holding_time():
    draws = []
    prior = VariantBParams.from_dict(SPACE3, TIME_BUNDLE)
    walk = UrnProcess.from_variant_b(prior, 2, tracer=draws.append)
    walk.replay(StateSequence(SPACE3, (2, 2, 1)))

    assert [d.urn_id for d in draws] == ['V2,1', 'V2,2', 'U2,2']


def test_pair_scheme_cannot_be_forced():
    walk = UrnProcess.from_pair(PairParams.from_smbs(mixed_prior()), 0)

    with pytest.raises(ModelError):
        walk.observe(1)


def test_fresh_pair_scheme_matches_fresh_kernel():
    prior = mixed_prior()
    walk = UrnProcess.from_pair(PairParams.from_smbs(prior), 1)
    kernel = predictive_kernel(PredictiveState.from_path(prior, StateSequence(SPACE3, (1,))))

    np.testing.assert_allclose(walk.step_probabilities(), kernel, rtol=0, atol=1e-14)


def test_pair_scheme_draws_successor_before_holding_time():
    draws = []
    walk = UrnProcess.from_pair(PairParams.from_smbs(mixed_prior()), 0, tracer=draws.append)
    walk.generate(5, np.random.default_rng(10))

    assert draws[0].urn_id == 'U0'
    successor = draws[0].color
    assert draws[1].urn_id == f'V0-{successor},1'
    probabilities = walk.step_probabilities()
    assert probabilities.sum() == pytest.approx(1.0, abs=1e-12)
