"""
Experiment configuration.

Config files are JSON (any YAML mapping also parses) carrying a ``schema_version``. Complex amplitudes are
written as ``[re, im]`` pairs and a ``null`` SNR means noiseless.
"""
import hashlib
import inspect
import json
import logging
from pathlib import Path

import numpy as np
import yaml

from src.srradar.errors import ConfigError
from src.srradar.utils.serialize import add_numpy_constructors, add_numpy_representers, pairs_to_complex

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

EXPERIMENTS = ('simulate', 'bench-srf', 'recover-grid', 'recover-an', 'certify', 'prop2', 'kernel-study')
MODELS = ('periodic', 'truncated')
MAX_SRF = 64


def _as_list(value, cast=float):
    if value is None:
        return None
    if np.isscalar(value):
        value = [value]
    return [None if v is None else cast(v) for v in value]


def _as_optional_float(value):
    return None if value is None else float(value)


def _as_amplitudes(value):
    if value is None:
        return None
    arr = np.asarray(value)
    if arr.ndim == 2 and arr.shape[-1] == 2 and not np.iscomplexobj(arr):
        return pairs_to_complex(arr)
    return np.asarray(arr, dtype=complex).reshape(-1)


class ExperimentConfig(yaml.YAMLObject):
    """
    Parameters of one experiment run.

    Every command reads the fields it needs and ignores the rest, so one schema covers all subcommands.

    Parameters
    ----------
    experiment : str
        One of ``'simulate', 'bench-srf', 'recover-grid', 'recover-an', 'certify', 'prop2', 'kernel-study'``.

    n_half : int, default 5
        Half-length N of the probe, L = 2N + 1.

    S : int, default 1
        Number of targets.

    shifts : list of [tau, nu] or None
        Fixed target shifts. When None the shifts are drawn at random.

    amplitudes : list or None
        Fixed amplitudes for ``shifts``, complex values as ``[re, im]`` pairs. Drawn from ``b_dist`` when None.

    region : [tau_max, nu_max] or None
        Scene and grid restriction. ``bench-srf`` defaults to ``[2 / sqrt(L), 2 / sqrt(L)]``.

    min_sep_factor : float, default 0
        Minimum target separation in units of ``1 / N``.

    b_dist : str, default 'unit_disc'
        Amplitude distribution of drawn scenes.

    probe_dist : str, default 'gaussian'
        Probing signal distribution.

    model : {'periodic', 'truncated'}, default 'periodic'
        Forward model of the simulated samples.

    snr_db : float or None
        Noise level of single-instance commands; None is noiseless.

    delta : float or None
        Residual budget. None derives it from the realized noise energy (zero when noiseless).

    srf : float, default 2
        Super-resolution factor of ``recover-grid``.

    srf_list, snr_db_list : list
        Sweep of ``bench-srf``.

    trials : int, default 100

    seed : int, default 0

    L_list : list of int
        Sample counts of ``prop2``.

    sep_factor : float, default 2.38
        Certificate support separation in units of ``1 / N``.

    deterministic : bool, default False
        Validate the ``Gbar`` certificate instead of the random one.

    exact_sep : bool, default False
        Certificate supports at exactly ``sep_factor / N``.

    grid_size : int or None
        Evaluation grid of dual polynomials and certificates; defaults to ``16 L``.

    tol : float, default 1e-3
        Peak tolerance of shift localization.

    max_iter : int, default 20000
        Iteration cap of the grid and SDP solvers.

    solver_tol : float, default 1e-6

    backend : {'admm', 'cvxpy'}, default 'admm'

    radius : float or None
        Half-width of the kernel study square.

    points : int, default 21

    gram_trials : int, default 0
        Trials of the Gram study run by ``kernel-study``; 0 skips it.

    input_dir : str or None
        Directory written by ``simulate`` to recover from instead of simulating.

    out_dir : str, default 'results'

    threads : int, default 1

    schema_version : int, default 1

    """
    yaml_tag = u"!ExperimentConfig"
    yaml_loader = yaml.SafeLoader
    yaml_dumper = yaml.SafeDumper

    def __init__(self,
                 experiment,
                 n_half=5,
                 S=1,
                 shifts=None,
                 amplitudes=None,
                 region=None,
                 min_sep_factor=0.0,
                 b_dist='unit_disc',
                 probe_dist='gaussian',
                 model='periodic',
                 snr_db=None,
                 delta=None,
                 srf=2.0,
                 srf_list=(1, 2, 5, 10, 20),
                 snr_db_list=(None,),
                 trials=100,
                 seed=0,
                 L_list=(63, 127, 255, 511),
                 sep_factor=2.38,
                 deterministic=False,
                 exact_sep=False,
                 grid_size=None,
                 tol=1e-3,
                 max_iter=20000,
                 solver_tol=1e-6,
                 backend='admm',
                 radius=None,
                 points=21,
                 gram_trials=0,
                 input_dir=None,
                 out_dir='results',
                 threads=1,
                 schema_version=SCHEMA_VERSION):

        self.experiment = experiment
        self.n_half = int(n_half)
        self.S = int(S)
        self.shifts = None if shifts is None else [[float(tau), float(nu)] for tau, nu in shifts]
        self.amplitudes = _as_amplitudes(amplitudes)
        self.region = _as_list(region)
        self.min_sep_factor = float(min_sep_factor)
        self.b_dist = b_dist
        self.probe_dist = probe_dist
        self.model = model
        self.snr_db = _as_optional_float(snr_db)
        self.delta = _as_optional_float(delta)
        self.srf = float(srf)
        self.srf_list = _as_list(srf_list)
        self.snr_db_list = _as_list(snr_db_list)
        self.trials = int(trials)
        self.seed = int(seed)
        self.L_list = _as_list(L_list, int)
        self.sep_factor = float(sep_factor)
        self.deterministic = bool(deterministic)
        self.exact_sep = bool(exact_sep)
        self.grid_size = None if grid_size is None else int(grid_size)
        self.tol = float(tol)
        self.max_iter = int(max_iter)
        self.solver_tol = float(solver_tol)
        self.backend = backend
        self.radius = _as_optional_float(radius)
        self.points = int(points)
        self.gram_trials = int(gram_trials)
        self.input_dir = None if input_dir is None else str(input_dir)
        self.out_dir = str(out_dir)
        self.threads = int(threads)
        self.schema_version = int(schema_version)

        self._validate()

    def _validate(self):
        if self.schema_version != SCHEMA_VERSION:
            raise ConfigError(f'Unsupported schema_version {self.schema_version}, expected {SCHEMA_VERSION}.')
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f'Unknown experiment {self.experiment!r}, expected one of {EXPERIMENTS}.')
        if self.model not in MODELS:
            raise ConfigError(f'Unknown model {self.model!r}, expected one of {MODELS}.')
        if self.n_half < 1:
            raise ConfigError(f'n_half must be at least 1, got {self.n_half}.')
        if self.S < 0:
            raise ConfigError(f'S must be non-negative, got {self.S}.')
        if self.trials < 1 or self.points < 2 or self.max_iter < 1 or self.gram_trials < 0:
            raise ConfigError('trials, points and max_iter must be positive and gram_trials non-negative.')
        if self.seed < 0:
            raise ConfigError(f'seed must be a non-negative integer, got {self.seed}.')

        for srf in self.srf_list + [self.srf]:
            if not 1 <= srf <= MAX_SRF:
                raise ConfigError(f'SRF values must lie in [1, {MAX_SRF}], got {srf}.')

        if any(L % 2 == 0 or L < 3 for L in self.L_list):
            raise ConfigError(f'L_list must hold odd lengths of at least 3, got {self.L_list}.')

        if self.region is not None and (len(self.region) != 2 or not all(0 < v <= 1 for v in self.region)):
            raise ConfigError(f'region must be [tau_max, nu_max] in (0, 1], got {self.region}.')

        if self.delta is not None and self.delta < 0:
            raise ConfigError(f'delta must be non-negative, got {self.delta}.')

        if self.shifts is not None:
            if len(self.shifts) != self.S:
                raise ConfigError(f'Got {len(self.shifts)} shifts but S={self.S}.')
            if self.amplitudes is not None and self.amplitudes.shape[0] != self.S:
                raise ConfigError(f'Got {self.amplitudes.shape[0]} amplitudes for {self.S} shifts.')
        elif self.amplitudes is not None:
            raise ConfigError('amplitudes can only be given together with shifts.')

    @property
    def L(self):
        return 2 * self.n_half + 1

    def to_dict(self):
        """
        Plain-python mapping of every parameter, complex amplitudes as ``[re, im]`` pairs.
        """
        params = inspect.signature(self.__init__).parameters
        out = {p: getattr(self, p) for p in params}
        if self.amplitudes is not None:
            out['amplitudes'] = np.stack([self.amplitudes.real, self.amplitudes.imag], axis=-1).tolist()
        return out

    @classmethod
    def from_dict(cls, param_dict):
        """
        Build a config from a mapping; unknown fields are rejected and missing ones take their defaults.
        """
        if not isinstance(param_dict, dict):
            raise ConfigError(f'Expected a mapping of config fields, got {type(param_dict).__name__}.')

        param_dict = param_dict.copy()
        cls_params = inspect.signature(cls).parameters

        cls_kwargs = {}
        missing_params, default_params = [], []

        for p_name, p_value in cls_params.items():
            try:
                cls_kwargs[p_name] = param_dict.pop(p_name)
            except KeyError:
                if p_value.default is p_value.empty:
                    missing_params.append(p_name)
                else:
                    cls_kwargs[p_name] = p_value.default
                    default_params.append(p_name)

        if param_dict:
            raise ConfigError(f'Unknown config fields {sorted(param_dict)}.')
        if missing_params:
            raise ConfigError(f'Missing config fields {missing_params} with no default values available.')
        if default_params:
            logger.debug(f'Using default values for {default_params}.')

        try:
            return cls(**cls_kwargs)
        except (TypeError, ValueError) as e:
            if isinstance(e, ConfigError):
                raise
            raise ConfigError(f'Invalid config value: {e}') from e

    def replace(self, **overrides):
        params = self.to_dict()
        unknown = set(overrides) - set(params)
        if unknown:
            raise ConfigError(f'Unknown config fields {sorted(unknown)}.')
        params.update({k: v for k, v in overrides.items() if v is not None})
        return self.from_dict(params)

    def to_json(self, path=None):
        text = json.dumps(self.to_dict(), indent=2, sort_keys=True)
        if path is None:
            return text
        Path(path).write_text(text + '\n')

    def dump(self, stream=None):
        add_numpy_representers()
        return yaml.safe_dump(self, stream=stream)

    @property
    def config_hash(self):
        """
        sha256 of the canonical JSON dump.
        """
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(',', ':'))
        return hashlib.sha256(canonical.encode()).hexdigest()

    @classmethod
    def to_yaml(cls, dumper, data):
        return dumper.represent_mapping(cls.yaml_tag, data.to_dict(), flow_style=cls.yaml_flow_style)

    @classmethod
    def from_yaml(cls, loader, node):
        add_numpy_constructors()
        return cls.from_dict(loader.construct_mapping(node, deep=True))

    def __eq__(self, other):
        if type(self) != type(other):
            return NotImplemented
        return self.config_hash == other.config_hash

    def __repr__(self):
        return f'ExperimentConfig(experiment={self.experiment!r}, n_half={self.n_half}, S={self.S}, seed={self.seed})'


def load_config(path=None, experiment=None):
    """
    Read an :class:`ExperimentConfig` from a JSON or YAML file.

    Parameters
    ----------
    path : str, path-like or None
        Config file. None gives the defaults of ``experiment``.

    experiment : str or None
        Subcommand the config is loaded for. Filled in when the file has no ``experiment`` field and checked
        against it otherwise.

    Raises
    ------
    ConfigError
        If the file cannot be parsed, has unknown fields or names another experiment.

    """
    if path is None:
        if experiment is None:
            raise ConfigError('Need a config file or an experiment name.')
        return ExperimentConfig(experiment)

    try:
        with open(path) as f:
            data = yaml.safe_load(f)
    except OSError as e:
        raise ConfigError(f'Cannot read config file {path}: {e}') from e
    except yaml.YAMLError as e:
        raise ConfigError(f'Cannot parse config file {path}: {e}') from e

    if isinstance(data, ExperimentConfig):
        config = data
    else:
        data = dict(data or {})
        if experiment is not None:
            data.setdefault('experiment', experiment)
        config = ExperimentConfig.from_dict(data)

    if experiment is not None and config.experiment != experiment:
        raise ConfigError(f'Config {path} is for {config.experiment!r}, not {experiment!r}.')

    return config
