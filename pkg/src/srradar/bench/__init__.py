from .config import ExperimentConfig, load_config, SCHEMA_VERSION, EXPERIMENTS
from .results import ResultTable, run_metadata
from .experiments import (
    Instance,
    COMMANDS,
    draw_instance,
    load_artifacts,
    cmd_simulate,
    cmd_bench_srf,
    cmd_recover_grid,
    cmd_recover_an,
    cmd_certify,
    cmd_prop2,
    cmd_kernel_study,
    run_experiment
)
from .cli import main
