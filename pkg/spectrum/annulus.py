"""
Annulus Module
First half-eigenvalue of the annulus rho < r < 1 by shooting in lambda: the
solution leaving r = rho with u = 0, v = +-1 must reach its next zero at r = 1.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from oracles.rayleigh import parabola_bound
from radial_operator.params import FluxState
from shooting.shooting_controller import parse_sign, shoot
from utils.config import Config, SolverSettings
from utils.errors import BracketFailure, InvalidParameters
from utils.logger import setup_logger
from .ball import eigenvalues_ball

logger = setup_logger(__name__)

R_CAP = 2.0
UPPER_INFLATION = 2.0
MAX_EXPANSIONS = 30


@dataclass(frozen=True)
class AnnulusProblem:
    rho: float
    params: object
    sign: int

    def __post_init__(self):
        if not 0 < self.rho < 1:
            raise InvalidParameters(f"rho must lie in (0, 1), got {self.rho}", stage="annulus")
        object.__setattr__(self, 'sign', parse_sign(self.sign))

    @property
    def start_state(self):
        return FluxState(self.rho, 0.0, float(self.sign))


@dataclass(frozen=True, eq=False)
class AnnulusSolution:
    problem: AnnulusProblem
    lam: float
    bracket: tuple
    evaluations: int
    trajectory: object


class _ZeroRadiusMap:
    """lambda -> (first zero after rho) - 1, counting evaluations."""

    def __init__(self, problem, settings):
        self.problem = problem
        self.settings = settings
        self.evaluations = 0

    def trajectory(self, lam):
        return shoot(
            self.problem.params,
            self.problem.start_state,
            self.problem.sign,
            mu=lam,
            zeros=1,
            r_max=R_CAP,
            settings=self.settings,
        )

    def __call__(self, lam):
        self.evaluations += 1
        zeros = self.trajectory(lam).zeros
        zeta = zeros[0] if len(zeros) else R_CAP
        return min(zeta, R_CAP) - 1.0


def _scan_for_bracket(func, low, high, nodes):
    grid = np.linspace(low, high, nodes)
    values = [func(lam) for lam in grid]
    for left, right, g_left, g_right in zip(grid, grid[1:], values, values[1:]):
        if g_left > 0 >= g_right:
            return left, right
    return None


def solve_annulus(problem, settings=None):
    """
    Shoot in lambda for the first half-eigenvalue of an annulus.

    The bracket starts at the ball eigenvalue of the same sign (a lower
    bound by domain monotonicity) and at an inflated parabola bound above;
    it is widened by doubling, and a uniform scan takes over when the end
    values do not bracket a sign change.

    Args:
        problem (AnnulusProblem): Annulus and sign
        settings (SolverSettings): Tolerances

    Returns:
        AnnulusSolution: lambda with the bracket used and the eigenfunction trajectory
    """
    settings = settings or SolverSettings.from_config()
    params = problem.params
    func = _ZeroRadiusMap(problem, settings)

    low = float(eigenvalues_ball(params, problem.sign, 1, settings).mus[0])
    high = UPPER_INFLATION * params.A * parabola_bound(params.alpha, params.dim, problem.rho, 1.0).value
    high = max(high, 2.0 * low)

    g_low = func(low)
    for _ in range(MAX_EXPANSIONS):
        if g_low > 0:
            break
        low *= 0.5
        g_low = func(low)

    g_high = func(high)
    for _ in range(MAX_EXPANSIONS):
        if g_high < 0:
            break
        high *= 2.0
        g_high = func(high)

    if not (g_low > 0 > g_high):
        bracket = _scan_for_bracket(func, low, high, Config.ANNULUS_SCAN_NODES)
        if bracket is None:
            raise BracketFailure(
                f"no sign change of the zero-radius map in [{low:.6g}, {high:.6g}] "
                f"(rho={problem.rho}, sign={problem.sign:+d})"
            )
        low, high = bracket

    lam = brentq(func, low, high, xtol=1e-13, rtol=1e-12)
    logger.debug(
        f"Annulus rho={problem.rho} sign={problem.sign:+d}: lambda={lam:.12g} "
        f"after {func.evaluations} shots"
    )
    return AnnulusSolution(
        problem=problem,
        lam=float(lam),
        bracket=(float(low), float(high)),
        evaluations=func.evaluations,
        trajectory=func.trajectory(lam),
    )


def annulus_first_eigenvalue(problem, settings=None):
    """
    First half-eigenvalue lambda+ or lambda- of the annulus rho < r < 1.

    Args:
        problem (AnnulusProblem): Annulus and sign
        settings (SolverSettings): Tolerances

    Returns:
        float: lambda
    """
    return solve_annulus(problem, settings).lam
