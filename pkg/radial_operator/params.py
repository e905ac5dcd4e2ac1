"""
Problem Parameters Module
Defines the parameter set, point states and coefficient selections of the radial operator.
"""

from dataclasses import dataclass

import numpy as np

from utils.errors import InvalidParameters


def validate_params(alpha, a, A, dim):
    """
    Validate raw problem parameters.

    Args:
        alpha (float): Gradient exponent
        a (float): Lower ellipticity constant
        A (float): Upper ellipticity constant
        dim (int): Spatial dimension N

    Returns:
        tuple: (is_valid: bool, errors: list)
    """
    errors = []

    for name, value in (('alpha', alpha), ('a', a), ('A', A)):
        if not np.isfinite(value):
            errors.append(f"{name} must be finite")

    if not errors:
        if not alpha > -1:
            errors.append("alpha must exceed -1")
        if not a > 0:
            errors.append("a must be positive")
        if not A >= a:
            errors.append("A must be at least a")

    if int(dim) != dim or dim < 1:
        errors.append("dim must be an integer >= 1")

    return len(errors) == 0, errors


@dataclass(frozen=True)
class Params:
    """Exponent alpha, ellipticity constants a <= A and dimension N."""

    alpha: float
    a: float
    A: float
    dim: int

    def __post_init__(self):
        is_valid, errors = validate_params(self.alpha, self.a, self.A, self.dim)
        if not is_valid:
            raise InvalidParameters("; ".join(errors))
        object.__setattr__(self, 'alpha', float(self.alpha))
        object.__setattr__(self, 'a', float(self.a))
        object.__setattr__(self, 'A', float(self.A))
        object.__setattr__(self, 'dim', int(self.dim))

    @property
    def p_prime(self):
        return (self.alpha + 2.0) / (self.alpha + 1.0)

    @property
    def n_zero(self):
        """Weight exponent (N-1)(1+alpha) of the divergence form."""
        return (self.dim - 1) * (1.0 + self.alpha)

    @property
    def n_plus(self):
        return self.n_zero * self.A / self.a

    @property
    def n_minus(self):
        return self.n_zero * self.a / self.A

    @property
    def is_symmetric(self):
        """a = A: the equation is odd under w -> -w."""
        return self.a == self.A

    @property
    def oracle_mode(self):
        """N = 1 carries no geometric meaning and only feeds the 1-D oracles."""
        return self.dim == 1

    def as_dict(self):
        return {'alpha': self.alpha, 'a': self.a, 'A': self.A, 'dim': self.dim}

    def perturbed(self, alpha_shift=0.0, a_shift=0.0):
        return Params(self.alpha + alpha_shift, self.a + a_shift, self.A, self.dim)


@dataclass(frozen=True)
class FluxState:
    """Point state (r, w, v) with v = |w'|^alpha w'."""

    r: float
    w: float
    v: float

    def as_tuple(self):
        return (self.r, self.w, self.v)


@dataclass(frozen=True)
class RegimeCoeffs:
    """Pucci coefficients: gamma1 multiplies w'', gamma2 multiplies (N-1)w'/r."""

    gamma1: float
    gamma2: float

    @classmethod
    def from_signs(cls, slope, curvature, params):
        """
        Select the coefficients from the signs of w' and w''.

        At a zero slope or curvature the selector is multivalued; the lower
        constant is returned there since it only ever multiplies zero.
        """
        gamma1 = params.A if curvature > 0 else params.a
        gamma2 = params.A if slope > 0 else params.a
        return cls(gamma1, gamma2)

    @classmethod
    def options(cls, slope, curvature, params):
        """
        All admissible coefficient pairs, one per branch of the multivalued selectors.

        Returns:
            tuple: RegimeCoeffs candidates (1, 2 or 4 entries)
        """
        gamma1_choices = (params.a, params.A) if curvature == 0 else (
            (params.A,) if curvature > 0 else (params.a,))
        gamma2_choices = (params.a, params.A) if slope == 0 else (
            (params.A,) if slope > 0 else (params.a,))
        return tuple(cls(g1, g2) for g1 in gamma1_choices for g2 in gamma2_choices)
