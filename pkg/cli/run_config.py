"""
Run Configuration Module
Merges command-line flags, an optional key=value config file and built-in
defaults into one validated RunConfig.
"""

import os
from dataclasses import dataclass

from radial_operator.params import Params, validate_params
from utils.config import Config, SolverSettings, load_config_file
from utils.errors import InputError, InvalidParameters
from utils.helpers import parse_grid

COMMANDS = ('solve-w', 'spectrum', 'annulus', 'sweep', 'validate', 'oracle-compare')
SIGN_CHOICES = ('plus', 'minus', 'both')
FORMATS = ('json', 'csv')

# In sweep config files the parameter names hold grids
SWEEP_ALIASES = {'alpha': 'alpha_grid', 'a': 'a_grid'}


@dataclass
class RunConfig:
    command: str
    alpha: float = 0.0
    a: float = 1.0
    A: float = 1.0
    dim: int = 3
    sign: str = 'plus'
    zeros: int = Config.DEFAULT_ZEROS
    rho: float = None
    r_max: float = None
    alpha_grid: str = None
    a_grid: str = None
    k: int = 1
    tol_ode: float = None
    tol_picard: float = None
    out: str = None
    format: str = None
    jobs: int = 1
    nodes: int = 4096
    checks: str = None

    def params(self):
        return Params(self.alpha, self.a, self.A, self.dim)

    def settings(self):
        """Solver tolerances with the command-line overrides applied."""
        defaults = SolverSettings.from_config()
        atol = None if self.tol_ode is None else min(defaults.ode_atol, 1e-2 * self.tol_ode)
        return defaults.with_overrides(ode_rtol=self.tol_ode, ode_atol=atol, picard_tol=self.tol_picard)

    def signs(self):
        return {'plus': (1,), 'minus': (-1,), 'both': (1, -1)}[self.sign]

    @property
    def output_format(self):
        if self.format:
            return self.format
        if self.out and self.out.lower().endswith('.csv'):
            return 'csv'
        return 'json'

    def grid(self):
        """Sweep nodes (alpha, a) in row-major order."""
        alphas = parse_grid(self.alpha_grid if self.alpha_grid is not None else self.alpha)
        a_values = parse_grid(self.a_grid if self.a_grid is not None else self.a)
        return [(alpha, a) for alpha in alphas for a in a_values]


def _to_int(value):
    number = float(value)
    if number != int(number):
        raise ValueError(f"expected an integer, got {value}")
    return int(number)


FIELD_TYPES = {
    'alpha': float, 'a': float, 'A': float, 'dim': _to_int,
    'sign': str, 'zeros': _to_int, 'rho': float, 'r_max': float,
    'alpha_grid': str, 'a_grid': str, 'k': _to_int,
    'tol_ode': float, 'tol_picard': float,
    'out': str, 'format': str, 'jobs': _to_int, 'nodes': _to_int, 'checks': str,
}


def _coerce(values, command):
    coerced = {}
    for key, value in values.items():
        if command == 'sweep' and key in SWEEP_ALIASES:
            key = SWEEP_ALIASES[key]
        if key == 'command':
            continue
        if key not in FIELD_TYPES:
            raise InputError(f"unknown setting '{key}'", stage="config")
        if value is None:
            continue
        try:
            coerced[key] = FIELD_TYPES[key](value)
        except (TypeError, ValueError):
            raise InputError(f"setting '{key}' has an invalid value '{value}'", stage="config")
    return coerced


def build_run_config(command, flags, config_path=None):
    """
    Build a RunConfig with precedence flags > config file > defaults.

    Args:
        command (str): Command name
        flags (dict): Values given on the command line (None means not given)
        config_path (str): Optional key=value file

    Returns:
        RunConfig: Validated configuration
    """
    if command not in COMMANDS:
        raise InputError(f"unknown command '{command}'", stage="config")

    merged = _coerce(load_config_file(config_path), command)
    merged.update(_coerce({key: value for key, value in flags.items() if value is not None}, command))
    config = RunConfig(command=command, **merged)

    is_valid, errors = validate_run_config(config)
    if not is_valid:
        raise InvalidParameters("; ".join(errors), stage="config")
    return config


def _validate_output(path, errors):
    if not path:
        return
    directory = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(directory):
        errors.append(f"output directory does not exist: {directory}")
    elif not os.access(directory, os.W_OK):
        errors.append(f"output directory is not writable: {directory}")


def validate_run_config(config):
    """
    Validate a RunConfig.

    Args:
        config (RunConfig): Configuration to check

    Returns:
        tuple: (is_valid: bool, errors: list)
    """
    errors = []

    if config.command == 'sweep':
        try:
            nodes = config.grid()
        except ValueError as error:
            errors.append(str(error))
            nodes = []
        for alpha, a in nodes:
            node_valid, node_errors = validate_params(alpha, a, config.A, config.dim)
            if not node_valid:
                errors.append(f"grid node alpha={alpha:g}, a={a:g}: " + "; ".join(node_errors))
                break
        if config.k < 1 or config.k > Config.MAX_ZEROS:
            errors.append(f"k must lie in [1, {Config.MAX_ZEROS}]")
    else:
        params_valid, params_errors = validate_params(config.alpha, config.a, config.A, config.dim)
        errors.extend(params_errors)

    if config.sign not in SIGN_CHOICES:
        errors.append(f"sign must be one of {', '.join(SIGN_CHOICES)}")
    if not 1 <= config.zeros <= Config.MAX_ZEROS:
        errors.append(f"zeros must lie in [1, {Config.MAX_ZEROS}]")
    if config.command == 'annulus':
        if config.rho is None:
            errors.append("annulus needs --rho")
        elif not 0 < config.rho < 1:
            errors.append("rho must lie in (0, 1)")
    if config.r_max is not None and not config.r_max > 0:
        errors.append("r_max must be positive")
    if config.format is not None and config.format not in FORMATS:
        errors.append(f"format must be one of {', '.join(FORMATS)}")
    if config.jobs < 1:
        errors.append("jobs must be at least 1")
    if config.nodes < 8:
        errors.append("nodes must be at least 8")
    for name in ('tol_ode', 'tol_picard'):
        value = getattr(config, name)
        if value is not None and not value > 0:
            errors.append(f"{name} must be positive")

    _validate_output(config.out, errors)
    return len(errors) == 0, errors
