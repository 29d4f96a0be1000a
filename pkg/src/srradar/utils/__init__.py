from .logger import ModularLogger
from .rng import make_rng
from .running_mean_std import RunningMeanStd
from .serialize import add_srradar_yaml_representers, read_complex_csv, write_complex_csv
from .parallel import map_trials, resolve_threads
