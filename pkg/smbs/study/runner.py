"""Commands behind the CLI: simulate, fit, predict, urn-trace and the full study"""

from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from smbs.common.config import RunConfig
from smbs.common.errors import ConfigError
from smbs.common.logger import get_logger
from smbs.common.records import write_csv, write_json, write_jsonl
from smbs.core.paths import StateSequence, read_paths, write_paths
from smbs.core.state_space import StateSpace
from smbs.predictive.forecast import PredictiveMatrix, h_step_predictive
from smbs.predictive.kernel import rsm_extend_path
from smbs.priors.beta_stacy import bs_mean, bs_sample, bs_variance
from smbs.process.simulate import sm_sample_path
from smbs.process.smbs import SmbsParams, smbs_posterior_multi, smbs_sample
from smbs.process.variants import PairParams, VariantBParams
from smbs.study.truth import (
    SimStudyTruth,
    limiting_distribution,
    mean_sojourn,
    simstudy_generate,
    stationary_distribution,
    study_prior,
)
from smbs.urns.dir_urn import UrnDraw
from smbs.urns.process import UrnProcess

logger = get_logger(__name__)

FIT_COLUMNS = ['c', 'M', 'state', 't', 'posterior_mean', 'posterior_variance',
               'truth', 'sample_id', 'sample_value']


def resolve_truth(config: RunConfig) -> Optional[SimStudyTruth]:
    return SimStudyTruth() if config.truth == 'simstudy' else None


def resolve_space(config: RunConfig) -> StateSpace:
    if config.state_space is not None:
        return StateSpace.from_config(config.state_space)
    truth = resolve_truth(config)
    if truth is not None:
        return truth.space
    raise ConfigError("Config needs 'state_space' unless a truth is configured")


def resolve_prior(config: RunConfig, space: StateSpace) -> SmbsParams:
    """Prior bundle from the config, the study prior as fallback, then the precision override"""
    if config.prior is not None:
        params = SmbsParams.from_dict(space, config.prior)
    elif config.truth is not None:
        params = study_prior()
    else:
        raise ConfigError("Config needs a 'prior' bundle unless a truth is configured")
    if config.precision_override is not None:
        params = params.with_constant_precision(config.precision_override)
    return params


def resolve_paths(config: RunConfig, space: StateSpace, seed: int) -> List[StateSequence]:
    """Observed paths from the data file, or one path generated from the truth"""
    if config.data is not None:
        paths = read_paths(config.data, space)
        if not paths:
            raise ConfigError(f"Data file {config.data} contains no paths")
        logger.info(f"Loaded {len(paths)} path(s) from {config.data}")
        return paths
    if config.truth is not None:
        return [simstudy_generate(seed)]
    raise ConfigError("Config needs a 'data' file unless a truth is configured")


def _start_state(configured: Optional[int], space: StateSpace, truth: Optional[SimStudyTruth]) -> int:
    if configured is not None:
        space.index(configured)
        return configured
    return truth.start if truth is not None else space.states[0]


def _prefix(path: StateSequence, length: Optional[int]) -> StateSequence:
    if length is None:
        return path
    if length > path.horizon:
        raise ConfigError(f"Prefix length {length} exceeds the observed horizon {path.horizon}")
    return path.prefix(length)


def _prefixes(paths: Sequence[StateSequence], length: int) -> List[StateSequence]:
    """First ``length`` steps of every path; shorter paths are used whole"""
    longest = max(path.horizon for path in paths)
    if length > longest:
        raise ConfigError(f"Prefix length {length} exceeds the longest observed horizon {longest}")
    return [path.prefix(min(length, path.horizon)) for path in paths]


def fit_frame(prior: SmbsParams, paths: Sequence[StateSequence], c_values: Sequence[float],
              prefix_lengths: Sequence[int], states: Sequence[int], t_max: int,
              n_samples: int, rng: np.random.Generator,
              truth: Optional[SimStudyTruth] = None) -> pd.DataFrame:
    """
    Posterior mean, variance and sampled values of F^i(t), t = 1..t_max

    The posterior for prefix length M conditions on the first M steps of
    every path jointly.

    One block of rows per (c, M, state): every sample contributes t_max rows,
    with the closed-form summaries repeated alongside. With no samples each t
    gets a single row with an empty sample id.
    """
    blocks = [(c, m, state) for c in c_values for m in prefix_lengths for state in states]
    streams = rng.spawn(len(blocks))
    ts = np.arange(1, t_max + 1)
    frames = []
    posteriors: Dict[tuple, SmbsParams] = {}
    for (c, m, state), stream in zip(blocks, streams):
        key = (c, m)
        if key not in posteriors:
            posteriors[key] = smbs_posterior_multi(prior.with_constant_precision(c), _prefixes(paths, m))
        holding = posteriors[key].holding_prior(state)
        means = np.array([bs_mean(holding, int(t)) for t in ts])
        variances = np.array([bs_variance(holding, int(t)) for t in ts])
        exact = (np.array([truth.holding_law(state).cdf(int(t)) for t in ts])
                 if truth is not None else np.full(t_max, np.nan))

        if n_samples:
            values = np.array([
                [sample.cdf(int(t)) for t in ts]
                for sample in (bs_sample(holding, stream) for _ in range(n_samples))
            ])
            sample_ids = pd.array(np.repeat(np.arange(n_samples), t_max), dtype='Int64')
            sample_values = values.reshape(-1)
            reps = n_samples
        else:
            sample_ids = pd.array([pd.NA] * t_max, dtype='Int64')
            sample_values = np.full(t_max, np.nan)
            reps = 1

        frames.append(pd.DataFrame({
            'c': c,
            'M': m,
            'state': state,
            't': np.tile(ts, reps),
            'posterior_mean': np.tile(means, reps),
            'posterior_variance': np.tile(variances, reps),
            'truth': np.tile(exact, reps),
            'sample_id': sample_ids,
            'sample_value': sample_values,
        }))
        logger.debug(f"Fitted state {state} with c={c}, M={m}")
    return pd.concat(frames, ignore_index=True)[FIT_COLUMNS]


def sup_norm_errors(frame: pd.DataFrame, state: int) -> pd.DataFrame:
    """max_t |posterior_mean - truth| per (c, M) for one state"""
    rows = frame[frame['state'] == state].drop_duplicates(['c', 'M', 't'])
    gaps = (rows['posterior_mean'] - rows['truth']).abs()
    return (rows.assign(error=gaps)
            .groupby(['c', 'M'], as_index=False)['error'].max())


def _reference_frame(space: StateSpace, nu: np.ndarray) -> pd.DataFrame:
    return pd.DataFrame({'state': list(space.states), 'nu': nu})


def run_simulate(config: RunConfig, seed: int, out: Path) -> List[Path]:
    """Write ``n_paths`` paths drawn by the configured generator"""
    space = resolve_space(config)
    truth = resolve_truth(config)
    section = config.simulate
    start = _start_state(section.start, space, truth)
    rng = np.random.default_rng(seed)
    needs_prior = section.generator != 'couple' or truth is None
    params = resolve_prior(config, space) if needs_prior else None

    paths = []
    for stream in rng.spawn(section.n_paths):
        if section.generator == 'couple':
            couple = truth.couple() if truth is not None else smbs_sample(params, stream)
            paths.append(sm_sample_path(couple, start, section.horizon, stream))
        elif section.generator == 'rsm':
            paths.append(rsm_extend_path(params, StateSequence(space, (start,)), section.horizon, stream))
        else:
            walk = UrnProcess.from_smbs(params, start)
            for _ in range(section.horizon):
                walk.step(stream)
            paths.append(walk.path())
    logger.info(f"Simulated {len(paths)} path(s) with the '{section.generator}' generator")
    return [write_paths(paths, Path(out) / 'paths.txt')]


def run_fit(config: RunConfig, seed: int, out: Path) -> List[Path]:
    """Posterior summaries of the holding-time laws for each (c, M)"""
    space = resolve_space(config)
    truth = resolve_truth(config)
    prior = resolve_prior(config, space)
    rng = np.random.default_rng(seed)
    data_stream, fit_stream = rng.spawn(2)
    paths = resolve_paths(config, space, int(data_stream.integers(2 ** 63)))
    section = config.fit
    states = section.states or list(space.states)
    for state in states:
        space.index(state)
    frame = fit_frame(prior, paths, section.c_values, section.prefix_lengths, states,
                      section.t_max, section.n_samples, fit_stream, truth)
    logger.info(f"Fit summaries for {len(section.c_values)} precision(s) and "
                f"{len(section.prefix_lengths)} prefix length(s) over {len(paths)} path(s)")
    return [write_csv(frame, Path(out) / 'fit.csv', 'fit')]


def run_predict(config: RunConfig, seed: int, out: Path) -> List[Path]:
    """Monte Carlo forecast from a prefix, plus the limiting distribution when a truth is known"""
    space = resolve_space(config)
    truth = resolve_truth(config)
    params = resolve_prior(config, space)
    rng = np.random.default_rng(seed)
    data_stream, forecast_stream = rng.spawn(2)
    section = config.predict
    paths = resolve_paths(config, space, int(data_stream.integers(2 ** 63)))
    if not 0 <= section.prefix_index < len(paths):
        raise ConfigError(f"predict.prefix_index {section.prefix_index} outside [0, {len(paths) - 1}]")
    prefix = _prefix(paths[section.prefix_index], section.prefix_length)

    forecast = h_step_predictive(params, prefix, section.horizon, section.n_sims,
                                 forecast_stream, section.batch_size)
    written = [write_csv(forecast.to_frame(), Path(out) / 'forecast.csv', 'forecast')]
    if truth is not None:
        nu = limiting_distribution(truth)
        written.append(write_csv(_reference_frame(space, nu), Path(out) / 'reference.csv', 'reference'))
    return written


def run_urn_trace(config: RunConfig, seed: int, out: Path) -> List[Path]:
    """Generate jumps from fresh urns, recording every draw"""
    space = resolve_space(config)
    truth = resolve_truth(config)
    section = config.urn_trace
    start = _start_state(section.start, space, truth)
    params = resolve_prior(config, space)
    draws: List[UrnDraw] = []

    if section.scheme == 'smbs':
        walk = UrnProcess.from_smbs(params, start, draws.append)
    elif section.scheme == 'pair':
        pair = PairParams.from_dict(space, config.prior) if config.prior else PairParams.from_smbs(params)
        walk = UrnProcess.from_pair(pair, start, draws.append)
    else:
        variant = VariantBParams.from_dict(space, config.prior) if config.prior else VariantBParams.from_smbs(params)
        walk = UrnProcess.from_variant_b(variant, start, draws.append)

    jumps = walk.generate(section.n_jumps, np.random.default_rng(seed))
    diagnostics = walk.recurrence_diagnostics()
    logger.info(f"Urn walk visited {diagnostics.visits} with {len(draws)} draws; "
                f"{jumps.n_jumps} jumps")
    return [
        write_jsonl((d.to_dict() for d in draws), Path(out) / 'urn_trace.jsonl', 'urn-trace'),
        write_paths([walk.path()], Path(out) / 'paths.txt'),
    ]


def run_simstudy(config: RunConfig, seed: int, out: Path) -> List[Path]:
    """
    Full factory study: one long path, posterior summaries per (c, M), a
    forecast from the whole path and the limiting distribution
    """
    section = config.simstudy
    truth = SimStudyTruth(horizon=section.horizon)
    space = truth.space
    rng = np.random.default_rng(seed)
    data_stream, fit_stream, forecast_stream = rng.spawn(3)
    out = Path(out)

    path = simstudy_generate(int(data_stream.integers(2 ** 63)), truth)
    written = [write_paths([path], out / 'paths.txt')]

    prior = study_prior()
    frame = fit_frame(prior, [path], section.c_values, section.prefix_lengths, list(space.states),
                      section.t_max, section.n_samples, fit_stream, truth)
    written.append(write_csv(frame, out / 'fit.csv', 'fit'))

    forecast: PredictiveMatrix = h_step_predictive(
        prior.with_constant_precision(section.forecast_c), path, section.forecast_horizon,
        section.n_sims, forecast_stream, section.batch_size,
    )
    written.append(write_csv(forecast.to_frame(), out / 'forecast.csv', 'forecast'))

    nu = limiting_distribution(truth, section.tail_tol)
    written.append(write_csv(_reference_frame(space, nu), out / 'reference.csv', 'reference'))

    errors = sup_norm_errors(frame, 2)
    gap = float(np.max(np.abs(forecast.row(forecast.horizon) - nu)))
    summary = {
        'nu': nu.tolist(),
        'equilibrium': stationary_distribution(truth.transition).tolist(),
        'mean_sojourn': [mean_sojourn(law, section.tail_tol) for law in truth.holding],
        'sup_norm_errors': errors.to_dict(orient='records'),
        'max_forecast_gap': gap,
    }
    written.append(write_json(summary, out / 'summary.json', 'summary'))
    logger.info(f"Study finished: max forecast gap to the limiting distribution {gap:.4f}")
    return written
