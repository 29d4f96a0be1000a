"""
YAML/JSON and CSV encodings of numpy and complex data.

Complex numbers are written as ``[re, im]`` pairs in YAML/JSON and as paired ``<name>_re`` / ``<name>_im``
columns in CSV tables.
"""
import numpy as np
import pandas as pd
import yaml

RE_SUFFIX, IM_SUFFIX = '_re', '_im'


def add_srradar_yaml_representers():
    add_numpy_representers()
    from src.srradar.bench.config import ExperimentConfig  # noqa: F401  (registers the yaml tag)


def add_numpy_representers():
    yaml.SafeDumper.add_multi_representer(np.ndarray, _numpy_arr_representer)
    yaml.SafeDumper.add_multi_representer(np.floating, _numpy_represent_floating)
    yaml.SafeDumper.add_multi_representer(np.integer, _numpy_represent_int)
    yaml.SafeDumper.add_multi_representer(np.complexfloating, _complex_representer)
    yaml.SafeDumper.add_representer(complex, _complex_representer)


def add_numpy_constructors():
    yaml.SafeLoader.add_constructor('!NDArray', _numpy_arr_constructor)
    yaml.SafeLoader.add_constructor('!Complex', _complex_constructor)


def _numpy_represent_floating(dumper, data):
    return dumper.represent_float(data.item())


def _numpy_represent_int(dumper, data):
    return dumper.represent_int(data.item())


def _complex_representer(dumper, data):
    data = complex(data)
    return dumper.represent_sequence('!Complex', [data.real, data.imag], flow_style=True)


def _complex_constructor(loader, node):
    re, im = loader.construct_sequence(node)
    return complex(re, im)


def _numpy_arr_representer(dumper, data):
    return dumper.represent_sequence('!NDArray', complex_to_pairs(data).tolist())


def _numpy_arr_constructor(loader, node):
    return pairs_to_complex(loader.construct_sequence(node, deep=True))


def complex_to_pairs(arr):
    """
    Encode an array as nested ``[re, im]`` pairs if complex, otherwise return it as is.
    """
    arr = np.asarray(arr)
    if np.iscomplexobj(arr):
        return np.stack([arr.real, arr.imag], axis=-1)
    return arr


def pairs_to_complex(data):
    """
    Inverse of :func:`complex_to_pairs` for complex-encoded data (trailing axis of length two).
    """
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 0 or arr.shape[-1] != 2:
        raise ValueError(f'Expected trailing [re, im] axis, got shape {arr.shape}.')
    return arr[..., 0] + 1j * arr[..., 1]


def split_complex_columns(df):
    """
    Replace every complex column ``c`` of ``df`` by float columns ``c_re`` and ``c_im``.
    """
    out = {}
    for col in df.columns:
        values = df[col].to_numpy()
        if np.iscomplexobj(values):
            out[f'{col}{RE_SUFFIX}'] = values.real
            out[f'{col}{IM_SUFFIX}'] = values.imag
        else:
            out[col] = values
    return pd.DataFrame(out, index=df.index)


def join_complex_columns(df):
    """
    Inverse of :func:`split_complex_columns`: merge ``c_re``/``c_im`` column pairs into complex columns.
    """
    out = {}
    for col in df.columns:
        if col.endswith(RE_SUFFIX) and f'{col[:-len(RE_SUFFIX)]}{IM_SUFFIX}' in df.columns:
            base = col[:-len(RE_SUFFIX)]
            out[base] = df[col].to_numpy() + 1j * df[f'{base}{IM_SUFFIX}'].to_numpy()
        elif col.endswith(IM_SUFFIX) and f'{col[:-len(IM_SUFFIX)]}{RE_SUFFIX}' in df.columns:
            continue
        else:
            out[col] = df[col].to_numpy()
    return pd.DataFrame(out, index=df.index)


def write_complex_csv(df, path):
    split_complex_columns(df).to_csv(path, index=False, float_format='%.17g')


def read_complex_csv(path):
    return join_complex_columns(pd.read_csv(path, float_precision='round_trip'))
