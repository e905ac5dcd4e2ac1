"""
Local Problem Module
Regime table, local problem/solution types and the explicit radius bounds used
around critical points of the radial solution.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from radial_operator.params import FluxState
from utils.errors import InvalidParameters, ZeroValueAtCritical


class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"

    @property
    def direction(self):
        return 1.0 if self is Side.RIGHT else -1.0


class Regime(str, Enum):
    """
    Sign pattern of (w', w'') on one side of a critical point.

    EQ2: w' < 0, w'' < 0 (right of a positive maximum)
    EQ3: w' > 0, w'' < 0 (left of a positive maximum)
    EQ4: w' > 0, w'' > 0 (right of a negative minimum)
    EQ5: w' < 0, w'' > 0 (left of a negative minimum)
    """

    EQ2 = "EQ2"
    EQ3 = "EQ3"
    EQ4 = "EQ4"
    EQ5 = "EQ5"

    def coeff(self, params):
        """Leading coefficient: a for EQ2/EQ3, A for EQ4/EQ5."""
        return params.a if self in (Regime.EQ2, Regime.EQ3) else params.A

    def weight(self, params):
        """Weight exponent: N0 for EQ2/EQ4, N+ for EQ3, N- for EQ5."""
        if self is Regime.EQ3:
            return params.n_plus
        if self is Regime.EQ5:
            return params.n_minus
        return params.n_zero

    @property
    def value_sign(self):
        """Sign of w on the regime's interval."""
        return 1.0 if self in (Regime.EQ2, Regime.EQ3) else -1.0

    @property
    def flux_sign(self):
        """Sign of v = |w'|^alpha w' away from the critical point."""
        return -1.0 if self in (Regime.EQ2, Regime.EQ5) else 1.0


def select_regime(w_at_critical, side):
    """
    Pick the regime equation on one side of a critical point.

    Args:
        w_at_critical (float): Value of w at the critical point
        side (Side): RIGHT for continuation, LEFT for verification reruns

    Returns:
        Regime: Selected regime
    """
    side = Side(side)
    if w_at_critical == 0 or not np.isfinite(w_at_critical):
        raise ZeroValueAtCritical(
            f"w vanishes at a critical point (w={w_at_critical}); a solution "
            "vanishing with zero slope must change sign"
        )

    if side is Side.RIGHT:
        return Regime.EQ2 if w_at_critical > 0 else Regime.EQ4
    return Regime.EQ3 if w_at_critical > 0 else Regime.EQ5


@dataclass(frozen=True)
class LocalProblem:
    """Integral equation on [r_o, r_o + delta] (right) or [r_o - delta, r_o] (left)."""

    r_o: float
    k_o: float
    regime: Regime
    side: Side
    delta: float
    mu: float = 1.0

    def __post_init__(self):
        errors = []
        if not self.r_o >= 0:
            errors.append("r_o must be non-negative")
        if self.k_o == 0 or not np.isfinite(self.k_o):
            errors.append("k_o must be a finite non-zero value")
        if not self.delta > 0:
            errors.append("delta must be positive")
        if not self.mu > 0:
            errors.append("mu must be positive")
        if Side(self.side) is Side.LEFT and self.delta >= self.r_o:
            errors.append("left interval must stay inside r > 0")
        if errors:
            raise InvalidParameters("; ".join(errors), stage="picard")
        object.__setattr__(self, 'regime', Regime(self.regime))
        object.__setattr__(self, 'side', Side(self.side))

    @property
    def r_end(self):
        return self.r_o + self.side.direction * self.delta

    def grid(self, samples):
        """Uniform grid from r_o outward, first node exactly r_o."""
        offsets = np.linspace(0.0, self.delta, samples)
        grid = self.r_o + self.side.direction * offsets
        grid[0] = self.r_o
        return grid


@dataclass(frozen=True)
class LocalSolution:
    """Accepted Picard fixed point sampled on the local grid (ordered from r_o outward)."""

    problem: LocalProblem
    r: np.ndarray
    k: np.ndarray
    v: np.ndarray
    iterations: int
    sup_change: float
    contraction: float

    @property
    def endpoint(self):
        return FluxState(float(self.r[-1]), float(self.k[-1]), float(self.v[-1]))

    @property
    def delta(self):
        return self.problem.delta

    def ordered(self):
        """Samples sorted by increasing radius."""
        if self.problem.side is Side.RIGHT:
            return self.r, self.k, self.v
        return self.r[::-1], self.k[::-1], self.v[::-1]


def picard_bound(params, regime=Regime.EQ2, mu=1.0):
    """
    Radius below which the Picard operator contracts with factor 1/3.

    The equation is homogeneous of degree alpha+1 in w on both sides, so the
    bound does not depend on |k_o|.

    Args:
        params (Params): Problem parameters
        regime (Regime): Regime equation
        mu (float): Eigenvalue multiplying the right-hand side

    Returns:
        float: (1 / (3^{|alpha|+1} c1))^{1/p'}
    """
    regime = Regime(regime)
    alpha = params.alpha
    c1 = ((alpha + 1.0) * mu / (regime.coeff(params) * (regime.weight(params) + 1.0))) ** (
        1.0 / (alpha + 1.0))
    return (1.0 / (3.0 ** (abs(alpha) + 1.0) * c1)) ** (1.0 / params.p_prime)


def picard_delta(params, k_o=1.0, regime=Regime.EQ2, mu=1.0, safety=0.5):
    """
    Safe half-length of a Picard interval.

    Args:
        params (Params): Problem parameters
        k_o (float): Value at the critical point (any non-zero value)
        regime (Regime): Regime equation
        mu (float): Eigenvalue
        safety (float): Factor in (0, 1) applied to the contraction bound

    Returns:
        float: delta
    """
    if k_o == 0:
        raise ZeroValueAtCritical("k_o must be non-zero")
    return safety * picard_bound(params, regime, mu)


def initial_flux_slope(params, regime=Regime.EQ2, mu=1.0):
    """
    Limit of v(r)/r at r = 0 for the solution starting from k_o = +-1.

    Returns:
        float: -(1+alpha) mu / (coeff (weight+1)) times sign(k_o)
    """
    regime = Regime(regime)
    slope = (1.0 + params.alpha) * mu / (regime.coeff(params) * (regime.weight(params) + 1.0))
    return -regime.value_sign * slope


def initial_decay_radius(params):
    """
    Radius r1 up to which the solution from r = 0, w(0) = 1 has v' < 0.

    Args:
        params (Params): Problem parameters

    Returns:
        float: min(r1, delta) with delta the Picard bound of EQ2
    """
    alpha = params.alpha
    n0 = params.n_zero
    delta = picard_bound(params, Regime.EQ2)

    c2 = ((1.0 + alpha) / (params.a * (n0 + 1.0)) * 1.5 ** (alpha + 1.0) * delta) ** (
        1.0 / (alpha + 1.0))
    c3 = (1.0 + alpha) * max(1.5 ** alpha, 0.5 ** alpha) * c2
    r1 = (n0 + 2.0) / (2.0 * (n0 + 1.0) ** 2 * c3)
    return min(r1, delta)
