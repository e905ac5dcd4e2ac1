"""
Configuration management utilities.
"""

import os
from dataclasses import dataclass, asdict, replace

from dotenv import load_dotenv, dotenv_values

from utils.errors import InputError

# Load environment variables from .env file
load_dotenv()


class Config:
    """
    Configuration class for solver and reporting settings.
    """

    # Shooting integrator
    ODE_RTOL = float(os.getenv('ODE_RTOL', '1e-10'))
    ODE_ATOL = float(os.getenv('ODE_ATOL', '1e-12'))
    HANDOFF_EPS = float(os.getenv('HANDOFF_EPS', '1e-6'))
    STITCH_TOL = float(os.getenv('STITCH_TOL', '1e-8'))
    ZERO_TOL = float(os.getenv('ZERO_TOL', '1e-12'))
    R_CAP_DOUBLINGS = int(os.getenv('R_CAP_DOUBLINGS', '10'))

    # Picard fixed point near critical points
    PICARD_TOL = float(os.getenv('PICARD_TOL', '1e-13'))
    PICARD_SAMPLES = int(os.getenv('PICARD_SAMPLES', '257'))
    PICARD_MAX_ITER = int(os.getenv('PICARD_MAX_ITER', '200'))
    PICARD_SAFETY = float(os.getenv('PICARD_SAFETY', '0.5'))
    PICARD_HANDOFF_FACTOR = float(os.getenv('PICARD_HANDOFF_FACTOR', '1e3'))

    # Spectrum settings
    DEFAULT_ZEROS = int(os.getenv('DEFAULT_ZEROS', '8'))
    MAX_ZEROS = int(os.getenv('MAX_ZEROS', '512'))
    ANNULUS_SCAN_NODES = int(os.getenv('ANNULUS_SCAN_NODES', '64'))

    # Validation and output
    STRICT_SLACK = float(os.getenv('STRICT_SLACK', '1e-9'))
    JSON_DIGITS = int(os.getenv('JSON_DIGITS', '17'))

    # Logging settings
    LOG_LEVEL = os.getenv('HALFSPEC_LOG', 'info')
    LOG_FILE = os.getenv('HALFSPEC_LOG_FILE')

    @classmethod
    def validate_settings(cls):
        """
        Validate that solver settings are usable.

        Returns:
            tuple: (is_valid: bool, problems: list)
        """
        problems = []

        positive_settings = [
            'ODE_RTOL', 'ODE_ATOL', 'HANDOFF_EPS', 'STITCH_TOL', 'ZERO_TOL',
            'PICARD_TOL', 'PICARD_SAFETY', 'PICARD_HANDOFF_FACTOR', 'STRICT_SLACK',
        ]
        for setting in positive_settings:
            if not getattr(cls, setting) > 0:
                problems.append(f"{setting} must be positive")

        if not 0 < cls.PICARD_SAFETY < 1:
            problems.append("PICARD_SAFETY must lie in (0, 1)")
        if cls.PICARD_SAMPLES < 3:
            problems.append("PICARD_SAMPLES must be at least 3")
        if not 1 <= cls.DEFAULT_ZEROS <= cls.MAX_ZEROS:
            problems.append("DEFAULT_ZEROS must lie in [1, MAX_ZEROS]")
        if cls.LOG_LEVEL.lower() not in ('error', 'info', 'debug'):
            problems.append("HALFSPEC_LOG must be one of error, info, debug")

        return len(problems) == 0, problems

    @classmethod
    def solver_settings(cls):
        """
        Get a snapshot of the solver tolerances for report metadata.

        Returns:
            dict: Solver settings keyed by lower-case name
        """
        return asdict(SolverSettings.from_config())


@dataclass(frozen=True)
class SolverSettings:
    """Tolerances actually used by one run."""

    ode_rtol: float = 1e-10
    ode_atol: float = 1e-12
    handoff_eps: float = 1e-6
    stitch_tol: float = 1e-8
    zero_tol: float = 1e-12
    r_cap_doublings: int = 10
    picard_tol: float = 1e-13
    picard_samples: int = 257
    picard_max_iter: int = 200
    picard_safety: float = 0.5
    picard_handoff_factor: float = 1e3

    @classmethod
    def from_config(cls):
        return cls(
            ode_rtol=Config.ODE_RTOL,
            ode_atol=Config.ODE_ATOL,
            handoff_eps=Config.HANDOFF_EPS,
            stitch_tol=Config.STITCH_TOL,
            zero_tol=Config.ZERO_TOL,
            r_cap_doublings=Config.R_CAP_DOUBLINGS,
            picard_tol=Config.PICARD_TOL,
            picard_samples=Config.PICARD_SAMPLES,
            picard_max_iter=Config.PICARD_MAX_ITER,
            picard_safety=Config.PICARD_SAFETY,
            picard_handoff_factor=Config.PICARD_HANDOFF_FACTOR,
        )

    def with_overrides(self, **overrides):
        """Copy with the non-None overrides applied."""
        changes = {key: value for key, value in overrides.items() if value is not None}
        return replace(self, **changes) if changes else self


def load_config_file(path):
    """
    Read a key=value configuration file.

    Dashes in keys become underscores so that they line up with
    command-line option names. Case is kept: `a` and `A` are different keys.

    Args:
        path (str): Path to the configuration file

    Returns:
        dict: Parsed settings (values are strings)
    """
    if not path:
        return {}

    if not os.path.exists(path):
        raise InputError(f"config file not found: {path}", stage="config")

    raw_values = dotenv_values(path)
    return {
        key.strip().lstrip('-').replace('-', '_'): value
        for key, value in raw_values.items()
        if value is not None
    }
