"""Run configuration"""

from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml

from smbs.common.errors import ConfigError

GENERATORS = ('couple', 'rsm', 'urn')
URN_SCHEMES = ('smbs', 'pair', 'time')
TRUTHS = ('simstudy',)


def _section(cls, data: Optional[Dict[str, Any]], name: str):
    """Build a section dataclass, rejecting unknown keys"""
    data = data or {}
    if not isinstance(data, dict):
        raise ConfigError(f"Section '{name}' must be a mapping, got {data!r}")
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"Unknown keys in section '{name}': {unknown}")
    try:
        return cls(**data)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Invalid section '{name}': {e}")


def _positive(name: str, value) -> None:
    if not value > 0:
        raise ConfigError(f"{name} must be positive, got {value}")


@dataclass
class SimulateConfig:
    """Path generation"""
    start: Optional[int] = None
    horizon: int = 100
    n_paths: int = 10
    generator: str = 'couple'

    def __post_init__(self):
        if self.generator not in GENERATORS:
            raise ConfigError(f"simulate.generator must be one of {GENERATORS}, got '{self.generator}'")
        if self.horizon < 0:
            raise ConfigError(f"simulate.horizon must be non-negative, got {self.horizon}")
        _positive('simulate.n_paths', self.n_paths)


@dataclass
class FitConfig:
    """Posterior summaries of the holding-time laws"""
    prefix_lengths: List[int] = field(default_factory=lambda: [0, 100, 1000])
    c_values: List[float] = field(default_factory=lambda: [0.1, 1.0, 10.0])
    n_samples: int = 500
    t_max: int = 20
    states: Optional[List[int]] = None

    def __post_init__(self):
        if any(m < 0 for m in self.prefix_lengths):
            raise ConfigError(f"fit.prefix_lengths must be non-negative: {self.prefix_lengths}")
        for c in self.c_values:
            _positive('fit.c_values entry', c)
        if self.n_samples < 0:
            raise ConfigError(f"fit.n_samples must be non-negative, got {self.n_samples}")
        _positive('fit.t_max', self.t_max)


@dataclass
class PredictConfig:
    """Monte Carlo forecast"""
    horizon: int = 100
    n_sims: int = 100_000
    prefix_index: int = 0
    prefix_length: Optional[int] = None
    batch_size: int = 10_000

    def __post_init__(self):
        _positive('predict.horizon', self.horizon)
        _positive('predict.n_sims', self.n_sims)
        _positive('predict.batch_size', self.batch_size)


@dataclass
class UrnTraceConfig:
    """Urn walk with a draw-by-draw trace"""
    start: Optional[int] = None
    n_jumps: int = 10
    scheme: str = 'smbs'

    def __post_init__(self):
        if self.scheme not in URN_SCHEMES:
            raise ConfigError(f"urn_trace.scheme must be one of {URN_SCHEMES}, got '{self.scheme}'")
        if self.n_jumps < 0:
            raise ConfigError(f"urn_trace.n_jumps must be non-negative, got {self.n_jumps}")


@dataclass
class SimStudyConfig:
    """End-to-end reproduction of the factory study"""
    horizon: int = 1000
    c_values: List[float] = field(default_factory=lambda: [0.1, 1.0, 10.0])
    prefix_lengths: List[int] = field(default_factory=lambda: [0, 100, 1000])
    n_samples: int = 500
    t_max: int = 20
    forecast_c: float = 1.0
    forecast_horizon: int = 100
    n_sims: int = 100_000
    batch_size: int = 10_000
    tail_tol: float = 1e-12

    def __post_init__(self):
        _positive('simstudy.horizon', self.horizon)
        _positive('simstudy.forecast_c', self.forecast_c)
        _positive('simstudy.forecast_horizon', self.forecast_horizon)
        _positive('simstudy.n_sims', self.n_sims)
        _positive('simstudy.tail_tol', self.tail_tol)
        if any(m > self.horizon for m in self.prefix_lengths):
            raise ConfigError(f"simstudy.prefix_lengths exceed the horizon {self.horizon}")


@dataclass
class RunConfig:
    """
    Complete configuration of a CLI run

    ``data`` is resolved relative to the directory of the config file.
    """
    state_space: Optional[List[Any]] = None
    prior: Optional[Dict[str, Any]] = None
    data: Optional[Path] = None
    truth: Optional[str] = None
    precision_override: Optional[float] = None
    simulate: SimulateConfig = field(default_factory=SimulateConfig)
    fit: FitConfig = field(default_factory=FitConfig)
    predict: PredictConfig = field(default_factory=PredictConfig)
    urn_trace: UrnTraceConfig = field(default_factory=UrnTraceConfig)
    simstudy: SimStudyConfig = field(default_factory=SimStudyConfig)

    def __post_init__(self):
        if self.truth is not None and self.truth not in TRUTHS:
            raise ConfigError(f"truth must be one of {TRUTHS}, got '{self.truth}'")
        if self.precision_override is not None:
            _positive('precision_override', self.precision_override)
        if self.data is not None and not Path(self.data).exists():
            raise ConfigError(f"Data file not found: {self.data}")

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary"""
        return {
            'state_space': self.state_space,
            'prior': self.prior,
            'data': str(self.data) if self.data is not None else None,
            'truth': self.truth,
            'precision_override': self.precision_override,
            'simulate': asdict(self.simulate),
            'fit': asdict(self.fit),
            'predict': asdict(self.predict),
            'urn_trace': asdict(self.urn_trace),
            'simstudy': asdict(self.simstudy),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any], base_dir: Optional[Path] = None) -> 'RunConfig':
        """Create from dictionary"""
        if not isinstance(data, dict):
            raise ConfigError(f"Config must be a mapping, got {type(data).__name__}")
        sections = ('simulate', 'fit', 'predict', 'urn_trace', 'simstudy')
        top = ('state_space', 'prior', 'data', 'truth', 'precision_override')
        unknown = sorted(set(data) - set(sections) - set(top))
        if unknown:
            raise ConfigError(f"Unknown config keys: {unknown}")

        data_path = data.get('data')
        if data_path is not None:
            data_path = Path(data_path)
            if base_dir is not None and not data_path.is_absolute():
                data_path = Path(base_dir) / data_path

        return cls(
            state_space=data.get('state_space'),
            prior=data.get('prior'),
            data=data_path,
            truth=data.get('truth'),
            precision_override=data.get('precision_override'),
            simulate=_section(SimulateConfig, data.get('simulate'), 'simulate'),
            fit=_section(FitConfig, data.get('fit'), 'fit'),
            predict=_section(PredictConfig, data.get('predict'), 'predict'),
            urn_trace=_section(UrnTraceConfig, data.get('urn_trace'), 'urn_trace'),
            simstudy=_section(SimStudyConfig, data.get('simstudy'), 'simstudy'),
        )

    def save_to_file(self, filepath: Path):
        """Save configuration to YAML file"""
        with open(filepath, 'w') as f:
            yaml.safe_dump(self.to_dict(), f, default_flow_style=False, sort_keys=False)

    @classmethod
    def load_from_file(cls, filepath: Path) -> 'RunConfig':
        """
        Load configuration from a YAML or JSON file

        Raises:
            ConfigError: If the file is missing, unparsable or invalid
        """
        filepath = Path(filepath)
        if not filepath.exists():
            raise ConfigError(f"Config file not found: {filepath}")
        try:
            with open(filepath, 'r') as f:
                config_dict = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigError(f"Failed to parse config file {filepath}: {e}")
        return cls.from_dict(config_dict or {}, base_dir=filepath.parent)
