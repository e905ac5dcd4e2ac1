"""
CLI Controller
Argument parsing, logging setup and the mapping of failures to exit codes.
"""

import argparse
import sys

from utils.config import Config
from utils.errors import HalfSpecError, InputError, NumericalFailure
from utils.logger import set_global_level, setup_logger
from .commands import COMMAND_HANDLERS
from .run_config import FORMATS, SIGN_CHOICES, build_run_config

logger = setup_logger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERICAL = 3

COMMAND_HELP = {
    'solve-w': "Solve w+/w- and write samples (r, w, v, w') with the event table",
    'spectrum': "Write mu_k^+ and mu_k^- on the unit ball with the spectrum report",
    'annulus': "First half-eigenvalue(s) of the annulus rho < r < 1",
    'sweep': "Grid of mu_k^+- over (alpha, a), resumable",
    'validate': "Run the inequality checks and write the validation report",
    'oracle-compare': "Compare solver eigenvalues with the analytic and numerical oracles",
}


def _add_parameter_flags(parser, grids=False):
    if grids:
        parser.add_argument('--alpha', dest='alpha_grid', help="alpha grid start:stop:step or list")
        parser.add_argument('--a', dest='a_grid', help="a grid start:stop:step or list")
        parser.add_argument('--k', dest='k', type=int, help="Eigenvalue index")
    else:
        parser.add_argument('--alpha', type=float, help="Gradient exponent, > -1")
        parser.add_argument('--a', dest='a', type=float, help="Lower ellipticity constant")
    parser.add_argument('--A', dest='A', type=float, help="Upper ellipticity constant, >= a")
    parser.add_argument('--dim', type=int, help="Dimension N")


def _add_common_flags(parser, grids=False):
    _add_parameter_flags(parser, grids)
    if not grids:
        parser.add_argument('--sign', choices=SIGN_CHOICES, help="Which half-eigenfunction")
        parser.add_argument('--zeros', '-k', dest='zeros', type=int, help="Number of zeros K")
        parser.add_argument('--rho', type=float, help="Annulus inner radius")
        parser.add_argument('--r-max', dest='r_max', type=float, help="Integrate to this radius")
    parser.add_argument('--tol-ode', dest='tol_ode', type=float, help="Relative ODE tolerance")
    parser.add_argument('--tol-picard', dest='tol_picard', type=float, help="Picard sup-norm tolerance")
    parser.add_argument('--out', help="Output file (standard output when omitted)")
    parser.add_argument('--format', choices=FORMATS, help="Output format (default from --out suffix)")
    parser.add_argument('--jobs', type=int, help="Worker count")
    parser.add_argument('--config', help="key=value file with defaults for any flag")


def build_parser():
    parser = argparse.ArgumentParser(
        prog='halfspec',
        description="Radial half-eigenvalues of |Du|^alpha M_{a,A}(D^2 u)",
        allow_abbrev=False,
    )
    subparsers = parser.add_subparsers(dest='command', required=True)

    for command, help_text in COMMAND_HELP.items():
        sub = subparsers.add_parser(command, help=help_text, allow_abbrev=False)
        _add_common_flags(sub, grids=(command == 'sweep'))
        if command == 'validate':
            sub.add_argument('--checks', help="Comma-separated subset of checks")
        if command == 'oracle-compare':
            sub.add_argument('--nodes', type=int, help="Finite-difference grid intervals")

    return parser


def run_command(args):
    """
    Build the RunConfig for parsed arguments and dispatch the command.

    Args:
        args (argparse.Namespace): Parsed arguments

    Returns:
        Command result
    """
    flags = {key: value for key, value in vars(args).items() if key not in ('command', 'config')}
    config = build_run_config(args.command, flags, args.config)
    logger.debug(f"Running {config.command} with {config}")
    return COMMAND_HANDLERS[config.command](config)


def main(argv=None):
    """
    Command-line entry point.

    Args:
        argv (list): Arguments without the program name (sys.argv[1:] when None)

    Returns:
        int: Exit code 0 ok, 2 invalid input, 3 numerical failure
    """
    set_global_level(Config.LOG_LEVEL)

    settings_valid, problems = Config.validate_settings()
    if not settings_valid:
        sys.stderr.write(f"error: config: {'; '.join(problems)}\n")
        return EXIT_INPUT

    parser = build_parser()

    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_request:
        return int(exit_request.code or EXIT_OK)

    try:
        run_command(args)
    except InputError as error:
        sys.stderr.write(f"error: {error.stage}: {error}\n")
        return EXIT_INPUT
    except HalfSpecError as error:
        sys.stderr.write(f"error: {error.stage}: {error}\n")
        return EXIT_NUMERICAL
    except OSError as error:
        sys.stderr.write(f"error: output: {error}\n")
        return EXIT_INPUT
    except Exception as error:
        failure = NumericalFailure(f"{type(error).__name__}: {error}", stage=args.command)
        logger.debug(f"Unexpected failure in {args.command}", exc_info=True)
        sys.stderr.write(f"error: {failure.stage}: {failure}\n")
        return EXIT_NUMERICAL

    return EXIT_OK
