import argparse
import logging
import os
import sys
from typing import List

from logging_handlers.TimedPatternFileHandler import TimedPatternFileHandler
from zariski_chambers.chambers import InvariantViolation, NotAChamberError, NotAmpleError
from zariski_chambers.delpezzo import MAX_POINTS, ModelConsistencyError
from zariski_chambers.enums import EnumerationMode, OutputFormat, SearchEngine
from zariski_chambers.exactalg import InvalidArgumentError, SingularMatrixError
from zariski_chambers.functions import cmd_delpezzo, cmd_enumerate, cmd_matrix, cmd_rep, cmd_verify, parse_config
from zariski_chambers.helpers import get_config_path

logger = logging.getLogger('zariski_chambers')
formatter = logging.Formatter(
    fmt='%(asctime)s %(levelname)-8s %(message)s',
    datefmt='%Y-%m-%d %H:%M:%S')

EXIT_FAILURE = 1
EXIT_USAGE = 2

COMMANDS = {
    'delpezzo': cmd_delpezzo,
    'enumerate': cmd_enumerate,
    'matrix': cmd_matrix,
    'verify': cmd_verify,
    'rep': cmd_rep,
}


def setup_logging(verbose: bool, level: str = 'INFO', backup_count: int = 20) -> None:
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()

    try:
        logs_folder = os.path.join(get_config_path(), 'logs')
        if not os.path.exists(logs_folder):
            os.makedirs(logs_folder)
        fh = TimedPatternFileHandler(os.path.join(logs_folder, 'zariski-%Y%m%d.log'),
                                     when='MIDNIGHT', backupCount=backup_count)
        fh.setFormatter(formatter)
        logger.addHandler(fh)
    except OSError as err:
        print(f'warning: file logging disabled ({err})', file=sys.stderr)

    logger.setLevel(logging.DEBUG if verbose else getattr(logging, level.upper(), logging.INFO))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description='Count Zariski chambers on Del Pezzo surfaces'
        )
    parser.add_argument('-v', '--verbose', action='store_true', help='verbose mode')
    subparsers = parser.add_subparsers(dest='command', required=True)

    points = list(range(1, MAX_POINTS + 1))
    formats = [f.value for f in OutputFormat]
    engines = [e.value for e in SearchEngine]

    delpezzo = subparsers.add_parser('delpezzo', help='chamber census of X_r')
    delpezzo.add_argument('r', type=int, choices=points, help='number of blown-up points')
    delpezzo.add_argument('--per-cardinality', action='store_true', help='include the support size histogram')
    delpezzo.add_argument('--format', choices=formats)
    delpezzo.add_argument('--emit-supports', metavar='PATH', help='write every chamber support (curve labels)')
    delpezzo.add_argument('--threads', type=int, help='worker processes for counting (default from config)')
    delpezzo.add_argument('--engine', choices=engines)

    enumerate_ = subparsers.add_parser('enumerate', help='definite principal submatrices of a matrix file')
    enumerate_.add_argument('matrix_file', help='n followed by n*n integers, # starts a comment')
    enumerate_.add_argument('--mode', choices=[m.value for m in EnumerationMode], default='posdef')
    enumerate_.add_argument('--count-only', action='store_true')
    enumerate_.add_argument('--format', choices=formats)
    enumerate_.add_argument('--threads', type=int, help='worker processes, used with --count-only')
    enumerate_.add_argument('--engine', choices=engines)

    matrix = subparsers.add_parser('matrix', help='intersection matrix of the negative curves of X_r')
    matrix.add_argument('r', type=int, choices=points)
    matrix.add_argument('--format', choices=formats)
    matrix.add_argument('--sidecar', metavar='PATH', help='write the curve labels, one per row')

    verify = subparsers.add_parser('verify', help='recompute the chamber table and run the consistency checks')
    verify.add_argument('--max-r', type=int, choices=points, default=MAX_POINTS)
    verify.add_argument('--oracle-limit', type=int, help='largest matrix checked against brute force')
    verify.add_argument('--threads', type=int)
    verify.add_argument('--engine', choices=engines)
    verify.add_argument('--export', metavar='PATH', help='write the report tables (.csv or .xlsx)')

    rep = subparsers.add_parser('rep', help='exact divisor in the interior of a Zariski chamber')
    rep.add_argument('r', type=int, choices=points)
    rep.add_argument('--support', required=True, help='comma-separated curve labels, e.g. E1,C1_12')
    rep.add_argument('--ample', help='ample class as d,m1,...,mr (default: anticanonical)')
    rep.add_argument('--primitive', action='store_true', help='also print the primitive integral multiple of P')

    return parser


def main(argv: List[str] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return err.code if isinstance(err.code, int) else EXIT_USAGE

    config = parse_config()
    setup_logging(args.verbose, config.get('Logging', 'level'), config.getint('Logging', 'backup_count'))
    logger.debug('Running command %s with %s', args.command, vars(args))

    try:
        return COMMANDS[args.command](args, config)
    except (NotAChamberError, NotAmpleError) as err:
        print(f'error: {err}', file=sys.stderr)
        return EXIT_FAILURE
    except InvalidArgumentError as err:
        logger.error('%s', err)
        print(f'error: {err}', file=sys.stderr)
        return EXIT_USAGE
    except OSError as err:
        logger.error('%s', err)
        print(f'error: {err}', file=sys.stderr)
        return EXIT_USAGE
    except (InvariantViolation, ModelConsistencyError, SingularMatrixError) as err:
        logger.exception('Internal consistency check failed')
        print(f'error: {err}', file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
