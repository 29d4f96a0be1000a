import json
import logging
import platform
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from src.srradar.errors import ConfigError
from src.srradar.utils.serialize import read_complex_csv, write_complex_csv
from src.srradar.version import __version__

logger = logging.getLogger(__name__)

SIDECAR_SUFFIX = '.json'


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if np.isfinite(value) else None
    if isinstance(value, (np.complexfloating, complex)):
        return [_jsonable(complex(value).real), _jsonable(complex(value).imag)]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    return value


def run_metadata(config, **extra):
    """
    Provenance of a run: experiment, seed, config hash, library versions and a UTC timestamp.
    """
    return {
        'experiment': config.experiment,
        'seed': config.seed,
        'config_hash': config.config_hash,
        'schema_version': config.schema_version,
        'srradar_version': __version__,
        'numpy_version': np.__version__,
        'python_version': platform.python_version(),
        'created': pd.Timestamp.now(tz='UTC').isoformat(),
        **extra
    }


@dataclass
class ResultTable:
    """
    A result frame and its metadata.

    Written as ``<name>.csv`` (complex columns split into ``_re``/``_im`` pairs) next to a ``<name>.json`` sidecar
    holding the metadata.
    """
    name: str
    frame: pd.DataFrame
    metadata: dict = field(default_factory=dict)

    def write(self, out_dir):
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        csv_path = out_dir / f'{self.name}.csv'
        write_complex_csv(self.frame, csv_path)
        sidecar = out_dir / f'{self.name}{SIDECAR_SUFFIX}'
        sidecar.write_text(json.dumps(_jsonable(self.metadata), indent=2, sort_keys=True) + '\n')
        logger.info(f'Wrote {csv_path} ({len(self.frame)} rows).')
        return csv_path

    @classmethod
    def read(cls, path):
        """
        Read a table written by :meth:`write`, from either the ``.csv`` path or the path without suffix.
        """
        path = Path(path)
        if path.suffix == '.csv':
            path = path.with_suffix('')
        csv_path = path.with_name(f'{path.name}.csv')
        if not csv_path.exists():
            raise ConfigError(f'No result table at {csv_path}.')

        sidecar = path.with_name(f'{path.name}{SIDECAR_SUFFIX}')
        metadata = json.loads(sidecar.read_text()) if sidecar.exists() else {}
        return cls(path.name, read_complex_csv(csv_path), metadata)

    def __repr__(self):
        return f'ResultTable(name={self.name!r}, rows={len(self.frame)}, columns={list(self.frame.columns)})'
