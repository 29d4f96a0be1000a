"""
``srr`` command line.

    srr <subcommand> [--config PATH] [--seed INT] [--out DIR] [--threads INT] [--log-level LEVEL]

Each subcommand runs one experiment and writes its tables (CSV plus JSON sidecar) and the effective config to the
output directory. ``SRR_THREADS`` overrides ``--threads``.
"""
import argparse
import logging
from pathlib import Path

from src.srradar.bench.config import load_config
from src.srradar.bench.experiments import COMMANDS, run_experiment
from src.srradar.errors import CapacityError, ConfigError, DimensionError, NumericalError, UndefinedInputError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_CAPACITY = 4

COMMAND_HELP = {
    'simulate': 'draw a scene and probe and write the samples',
    'bench-srf': 'resolution error against the super-resolution factor',
    'recover-grid': 'fine-grid basis pursuit recovery of one instance',
    'recover-an': 'atomic-norm recovery through the dual semidefinite program',
    'certify': 'dual certificate construction and validation study',
    'prop2': 'decay of the truncation model error with L',
    'kernel-study': 'random interpolation kernel against its expectation'
}

LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR')

HANDLED_ERRORS = (CapacityError, NumericalError, ConfigError, DimensionError, UndefinedInputError, OSError)


def build_parser():
    parser = argparse.ArgumentParser(prog='srr', description='Super-resolution delay-Doppler estimation.')
    subparsers = parser.add_subparsers(dest='command', required=True)

    for name in COMMANDS:
        sub = subparsers.add_parser(name, help=COMMAND_HELP[name])
        sub.add_argument('--config', type=Path, default=None,
                         help='JSON or YAML experiment config (default: built-in defaults)')
        sub.add_argument('--seed', type=int, default=None, help='override the config seed')
        sub.add_argument('--out', type=Path, default=None, help='output directory (default: config out_dir)')
        sub.add_argument('--threads', type=int, default=None, help='worker threads for Monte-Carlo trials')
        sub.add_argument('--log-level', default='INFO', choices=LOG_LEVELS)

    return parser


def exit_code(error):
    """
    Process exit code for an error raised by a command.
    """
    if isinstance(error, CapacityError):
        return EXIT_CAPACITY
    if isinstance(error, NumericalError):
        return EXIT_NUMERICAL
    return EXIT_CONFIG


def run(command, config_path=None, seed=None, out=None, threads=None):
    """
    Load the config, run ``command`` and write its outputs.

    Returns
    -------
    list of Path
        The CSV tables written.

    """
    config = load_config(config_path, experiment=command)
    config = config.replace(seed=seed, threads=threads, out_dir=None if out is None else str(out))

    tables = run_experiment(config)
    out_dir = Path(config.out_dir)
    paths = [table.write(out_dir) for table in tables]
    config.to_json(out_dir / 'config.json')
    return paths


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level, format='%(asctime)s %(levelname)s %(name)s: %(message)s')

    try:
        paths = run(args.command, args.config, seed=args.seed, out=args.out, threads=args.threads)
    except HANDLED_ERRORS as e:
        code = exit_code(e)
        logger.error(f'{args.command} failed ({type(e).__name__}): {e}')
        return code

    logger.info(f'{args.command} wrote {len(paths)} table(s).')
    return EXIT_OK
