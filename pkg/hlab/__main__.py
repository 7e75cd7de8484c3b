import argparse
import logging
import sys

from hlab import process_folder
from hlab.commands import EXIT_USAGE, command_types, render
from hlab.errors import ConfigError
from hlab.utils import todict, write_gz_js

LEVELS = {-1: logging.WARNING, 0: logging.INFO, 1: logging.INFO, 2: logging.DEBUG}


def _configure_logging(verbose):
    logging.basicConfig(
        level=LEVELS[verbose],
        format="%(asctime)s [%(threadName)-12.12s] [%(levelname)-5.5s]  %(message)s",
        handlers=[
            logging.StreamHandler()
        ])


def _parser():
    parser = argparse.ArgumentParser(
        prog='hlab',
        usage='hlab <command> <config> [options]',
    )
    parser.add_argument(
        'command',
        choices=sorted(command_types()),
        help='The verification or query to run.'
    )
    parser.add_argument(
        'file',
        nargs='?',
        help='The JSON config file or a folder of configs.'
    )
    parser.add_argument(
        '--config', dest='config',
        help='The JSON config file or a folder of configs (same as the positional).'
    )
    parser.add_argument(
        '--ext',
        default='.json',
        help='If the config is a folder, the file extension to include'
    )
    parser.add_argument(
        '--alpha-max', dest='alpha_max', type=int,
        help='Largest |α|_∞ of the eigenvalue table.')
    parser.add_argument(
        '--tol-quad', dest='quad_tol', type=float,
        help='Absolute quadrature tolerance.')
    parser.add_argument(
        '--tol-resid', dest='resid_tol', type=float,
        help='Relative residual tolerance of the eigenvalue identity.')
    parser.add_argument(
        '--grid-n', dest='grid_n', type=int,
        help='Log-grid size of the fast convolution (a power of two).')
    parser.add_argument(
        '--seed', dest='seed', type=int,
        help='Seed of randomized test functions.')
    parser.add_argument(
        '--workers', dest='workers', type=int, default=1,
        help='Worker processes for table rows; results do not depend on it.')
    parser.add_argument(
        '--format', dest='format',
        choices=['text', 'json', 'csv'], default='text')
    parser.add_argument(
        '--output', dest='output',
        help='Write the report to this file; a .gz suffix writes gzip\'d JSON.')
    parser.add_argument(
        '--verbose', dest='verbose',
        type=int, choices=range(-1, 3), default=-1)
    return parser


def main(argv=None):
    parser = _parser()
    try:
        flags = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else 0
    _configure_logging(flags.verbose)

    f = flags.config or flags.file
    if not f:
        logging.error('You have to supply a config file or a folder.')
        return EXIT_USAGE
    overrides = {
        'alpha_max': flags.alpha_max,
        'quad_tol': flags.quad_tol,
        'resid_tol': flags.resid_tol,
        'grid_n': flags.grid_n,
        'seed': flags.seed,
    }
    try:
        reports, code = process_folder(
            flags.command, f, ext=flags.ext, overrides=overrides,
            workers=flags.workers, verbose=flags.verbose)
    except ConfigError as e:
        logging.error('%s', e)
        if flags.verbose > 1:
            raise e
        return EXIT_USAGE

    if flags.output and flags.output.endswith('.gz'):
        write_gz_js([todict(r) for r in reports], flags.output)
    else:
        text = render(reports, flags.format)
        if flags.output:
            with open(flags.output, 'w', encoding='utf-8') as wf:
                wf.write(text)
        else:
            sys.stdout.write(text)
    return code


def entry_point():
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
