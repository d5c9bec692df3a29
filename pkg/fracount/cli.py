# -*- coding: utf-8 -*-
# File: cli.py

"""
Command line entry point:

.. code-block:: none

    fracount run --config npp_watanabe [--threads N] [--seed S] [--out DIR]
    fracount list

``--config`` takes a scenario file or the name of a bundled scenario.
"""

import argparse
import sys

from . import libinfo
from .errors import ConfigurationError, DomainError, FracountError
from .scenario.catalog import list_scenarios, resolve_config
from .scenario.config import load_scenario
from .scenario.runner import run_scenario, validate_scenario
from .utils import logger

__all__ = ['main', 'run', 'EXIT_OK', 'EXIT_FAILED', 'EXIT_CONFIG', 'EXIT_SIMULATION']

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_SIMULATION = 3


def run(config, seed=None, threads=None, output_dir=None, progress=True):
    """
    Run one scenario.

    Returns:
        int: :data:`EXIT_OK` if every check passed, :data:`EXIT_FAILED` if some check failed,
        :data:`EXIT_CONFIG` for an invalid scenario and :data:`EXIT_SIMULATION` when
        simulation or checking raised.
    """
    try:
        scenario = load_scenario(resolve_config(config), seed=seed, threads=threads, output_dir=output_dir)
        validate_scenario(scenario)
    except (ConfigurationError, DomainError) as e:
        logger.error("Invalid scenario {}: {}".format(config, e))
        return EXIT_CONFIG
    try:
        reports = run_scenario(scenario, progress=progress)
    except FracountError as e:
        logger.error("Scenario {} aborted: {}: {}".format(scenario.name, type(e).__name__, e))
        return EXIT_SIMULATION
    for r in reports:
        print("{} {}".format('PASS' if r.passed else 'FAIL', r.label()))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


def _parser():
    parser = argparse.ArgumentParser(prog='fracount', description='Monte Carlo verification of counting processes.')
    parser.add_argument('--version', action='version', version='%(prog)s ' + libinfo.__version__)
    sub = parser.add_subparsers(dest='command')
    p = sub.add_parser('run', help='run one scenario and write its report')
    p.add_argument('--config', required=True, help='scenario JSON file, or the name of a bundled scenario')
    p.add_argument('--threads', type=int, help='worker processes, default: available CPUs')
    p.add_argument('--seed', type=int, help='override the scenario seed')
    p.add_argument('--out', help='output directory, default: $FRACOUNT_OUT or the scenario\'s output_dir')
    p.add_argument('--no-progress', action='store_true', help='hide the progress bar')
    sub.add_parser('list', help='list the bundled scenarios')
    return parser


def main(argv=None):
    parser = _parser()
    args = parser.parse_args(argv)
    if args.command == 'list':
        print(list_scenarios())
        return EXIT_OK
    if args.command == 'run':
        return run(args.config, seed=args.seed, threads=args.threads, output_dir=args.out,
                   progress=not args.no_progress)
    parser.print_help()
    return EXIT_CONFIG


if __name__ == '__main__':
    sys.exit(main())
