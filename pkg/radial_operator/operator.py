"""
Radial Operator Module
Flux/slope transforms, the M/m switching functions and pointwise evaluation of
the radial operator |w'|^alpha (gamma1 w'' + gamma2 (N-1) w'/r).
"""

import numpy as np

from utils.errors import InvalidParameters, SingularSlope
from .params import RegimeCoeffs


def flux_to_slope(v, alpha):
    """
    Recover the slope w' from the flux v = |w'|^alpha w'.

    This is phi_{p'}(v) = |v|^{p'-2} v with p' = (alpha+2)/(alpha+1), written
    as sign(v)|v|^{1/(alpha+1)} so that v = 0 maps to 0 for every alpha.

    Args:
        v (float or ndarray): Flux
        alpha (float): Gradient exponent (> -1)

    Returns:
        float or ndarray: Slope
    """
    return np.sign(v) * np.abs(v) ** (1.0 / (alpha + 1.0))


def slope_to_flux(s, alpha):
    """
    Flux |s|^alpha s of a slope s; inverse of flux_to_slope.

    Args:
        s (float or ndarray): Slope
        alpha (float): Gradient exponent (> -1)

    Returns:
        float or ndarray: Flux
    """
    return np.sign(s) * np.abs(s) ** (alpha + 1.0)


def signed_power(x, alpha):
    """|x|^alpha x, the right-hand side nonlinearity."""
    return np.sign(x) * np.abs(x) ** (alpha + 1.0)


def big_M(x, params):
    """
    x/A for x > 0, x/a for x < 0 (Lipschitz with constant 1/a).

    Args:
        x (float or ndarray): Argument
        params (Params): Problem parameters

    Returns:
        float or ndarray: M(x)
    """
    return np.where(x > 0, x / params.A, x / params.a) if np.ndim(x) else (
        x / params.A if x > 0 else x / params.a)


def small_m(x, params):
    """
    A x for x > 0, a x for x < 0 (Lipschitz with constant A).

    Args:
        x (float or ndarray): Argument
        params (Params): Problem parameters

    Returns:
        float or ndarray: m(x)
    """
    return np.where(x > 0, params.A * x, params.a * x) if np.ndim(x) else (
        params.A * x if x > 0 else params.a * x)


def eval_operator(r, s, c, params):
    """
    Evaluate the radial operator at radius r for slope s and curvature c.

    Diagnostic only: solvers never evaluate the operator pointwise, they work
    with the flux formulation instead.

    Args:
        r (float): Radius (> 0)
        s (float): Slope w'
        c (float): Curvature w''
        params (Params): Problem parameters

    Returns:
        float: |s|^alpha (gamma1 c + gamma2 (N-1) s / r)
    """
    if not r > 0:
        raise InvalidParameters(f"radius must be positive, got {r}", stage="operator")

    coeffs = RegimeCoeffs.from_signs(s, c, params)
    bracket = coeffs.gamma1 * c + coeffs.gamma2 * (params.dim - 1) * s / r

    if s == 0:
        if params.alpha < 0:
            raise SingularSlope(
                "slope vanishes with alpha < 0; use the flux formulation"
            )
        if params.alpha > 0:
            return 0.0
        return coeffs.gamma1 * c

    return abs(s) ** params.alpha * bracket


def operator_range(r, s, c, params):
    """
    Lowest and highest value of the operator over every admissible branch.

    At points where the slope or the curvature vanishes the coefficient
    selectors are multivalued; both one-sided values are reported.

    Returns:
        tuple: (low, high)
    """
    if not r > 0:
        raise InvalidParameters(f"radius must be positive, got {r}", stage="operator")
    if s == 0 and params.alpha < 0:
        raise SingularSlope("slope vanishes with alpha < 0; use the flux formulation")

    weight = 0.0 if (s == 0 and params.alpha > 0) else abs(s) ** params.alpha
    values = [
        weight * (coeffs.gamma1 * c + coeffs.gamma2 * (params.dim - 1) * s / r)
        for coeffs in RegimeCoeffs.options(s, c, params)
    ]
    return min(values), max(values)


def residual(state, curvature, mu, params):
    """
    Residual F(r, w', w'') + mu |w|^alpha w of the eigen-equation at a state.

    Args:
        state (FluxState): Point state, slope recovered from the flux
        curvature (float): w'' at the state
        mu (float): Eigenvalue
        params (Params): Problem parameters

    Returns:
        float: Residual, zero on exact solutions
    """
    slope = float(flux_to_slope(state.v, params.alpha))
    value = eval_operator(state.r, slope, curvature, params)
    return value + mu * float(signed_power(state.w, params.alpha))
