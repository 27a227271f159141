import argparse
import logging
import os
import sys
from typing import List, Optional

from src import commands
from src.errors import CombkitError
from src.algebra.singularity import FAMILIES

LOG_LEVEL_ENV = 'COMBKIT_LOG_LEVEL'


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument('--config', default='default', help='config name in configs/ or a path to a JSON file')
    p.add_argument('--seed', type=int, help='master seed (overrides the config)')
    p.add_argument('--workers', type=int, help='parallel worker processes')
    p.add_argument('--output-dir', help='directory for artifacts (default $COMBKIT_OUTPUT_DIR/<command>)')
    p.add_argument('--set', action='append', metavar='KEY=VALUE',
                   help='override a config key, e.g. --set evolution.steps=5000 (repeatable)')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='combkit',
        description='Singularity invariants and coupled Kerr dimer comb simulations.')
    parser.add_argument('-v', '--verbose', action='count', default=0, help='-v for INFO, -vv for DEBUG')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('invariants', help='Milnor/Tjurina numbers of one germ, as JSON')
    p.add_argument('--family', choices=FAMILIES)
    p.add_argument('--k', type=int)
    p.add_argument('--p', type=int)
    p.add_argument('--q', type=int)
    p.add_argument('--modulus', help='X9 modulus as p or p/q')
    p.add_argument('--poly', help='germ as a polynomial expression')
    p.add_argument('--vars', default='x,y', help='comma-separated variables for --poly')
    p.add_argument('--order', default='degrevlex', choices=('degrevlex', 'lex'))
    p.add_argument('--oracle', action='store_true', help='also run the brute-force oracle')
    p.add_argument('--output', help='write JSON here instead of stdout')

    p = sub.add_parser('sweep-modulus', help='invariants of the X9 family over a list of moduli')
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument('--values', help='comma-separated moduli, e.g. 0,1/2,3')
    group.add_argument('--range', help='start:stop:step, stop inclusive, e.g. 0:3:1/2')
    p.add_argument('--workers', type=int, default=1)
    p.add_argument('--output', help='write CSV here instead of stdout')

    for name, text in (
        ('simulate', 'evolve the configured dimer and write its spectrum and trajectory'),
        ('tongues', 'stability map over (detuning, modulus)'),
        ('eps', 'pump power threshold surface over (detuning, modulus)'),
        ('disorder', 'spectral fidelity against disorder strength'),
        ('pinning', 'comb tooth drift across disorder realizations'),
        ('beatnote', 'RF beat note PSD and linewidth'),
        ('teeth', 'coupling profile and its level crossings'),
    ):
        _add_run_flags(sub.add_parser(name, help=text))

    sub.add_parser('list-configs', help='names of the shipped configs')
    return parser


def _configure_logging(verbosity: int) -> None:
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        name = os.environ.get(LOG_LEVEL_ENV, 'WARNING').upper()
        level = getattr(logging, name, None)
        if not isinstance(level, int):
            level = logging.WARNING
    logging.basicConfig(level=level, format='%(asctime)s %(levelname)s %(name)s: %(message)s', force=True)


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # argparse exits with 2 on usage errors; 2 is reserved for degenerate results
        return 0 if e.code in (0, None) else commands.EXIT_USAGE
    _configure_logging(args.verbose)
    handler = commands.COMMANDS[args.command]
    try:
        return handler(args)
    except CombkitError as e:
        print(f'error: {e}', file=sys.stderr)
        return e.exit_code


if __name__ == '__main__':
    sys.exit(main())
