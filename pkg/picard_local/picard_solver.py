"""
Picard Solver Module
Fixed-point iteration of the regime integral equations on a small interval
next to a critical point.
"""

from dataclasses import replace

import numpy as np
from scipy.integrate import cumulative_trapezoid

from radial_operator.operator import flux_to_slope, signed_power
from utils.config import SolverSettings
from utils.errors import NoConvergence, QuadratureFailure
from utils.logger import setup_logger
from .local_problem import LocalSolution

logger = setup_logger(__name__)

MAX_SHRINKS = 8
SHRINK_RATIO = 0.5


def _picard_image(k, grid, prob, params):
    """
    Apply the Picard operator and return the image together with its flux.

    The inner integral runs from r_o to s (signed, so the left side works the
    same way) and the flux is read from it directly.
    """
    alpha = params.alpha
    coeff = prob.regime.coeff(params)
    weight = prob.regime.weight(params)

    with np.errstate(over='ignore', invalid='ignore', divide='ignore'):
        integrand = grid ** weight * signed_power(k, alpha)
        inner = cumulative_trapezoid(integrand, grid, initial=0.0)

        v = np.zeros_like(grid)
        v[1:] = -(alpha + 1.0) * prob.mu / (coeff * grid[1:] ** weight) * inner[1:]

        slope = flux_to_slope(v, alpha)
        image = prob.k_o + cumulative_trapezoid(slope, grid, initial=0.0)

    if not (np.all(np.isfinite(image)) and np.all(np.isfinite(v))):
        raise QuadratureFailure(
            f"non-finite values in Picard image (regime {prob.regime.value}, "
            f"r_o={prob.r_o:.6g}, delta={prob.delta:.3g})"
        )

    image[0] = prob.k_o
    return image, v


def apply_T(k, prob, params, grid=None):
    """
    Apply the regime's Picard operator to a sampled function.

    Args:
        k (ndarray): Samples of k on the local grid, ordered from r_o outward
        prob (LocalProblem): Local problem
        params (Params): Problem parameters
        grid (ndarray): Radii of the samples; uniform grid of len(k) when unset

    Returns:
        ndarray: T(k) on the same grid
    """
    k = np.asarray(k, dtype=float)
    if grid is None:
        grid = prob.grid(len(k))
    image, _ = _picard_image(k, np.asarray(grid, dtype=float), prob, params)
    return image


def _iterate(prob, params, tol, samples, max_iter):
    grid = prob.grid(samples)
    k = np.full(samples, prob.k_o, dtype=float)
    floor = 64.0 * np.finfo(float).eps * max(1.0, abs(prob.k_o))

    previous_change = None
    contraction = 0.0

    for iteration in range(1, max_iter + 1):
        image, v = _picard_image(k, grid, prob, params)
        change = float(np.max(np.abs(image - k)))
        k = image

        if previous_change is not None and previous_change > floor:
            contraction = max(contraction, change / previous_change)
        previous_change = change

        if change < tol:
            return grid, k, v, iteration, change, contraction, True
        if iteration >= 3 and contraction > SHRINK_RATIO and change > floor:
            return grid, k, v, iteration, change, contraction, False

    return grid, k, v, max_iter, change, contraction, None


def _regime_consistent(prob, k, v):
    """Values keep the sign of k_o and the flux the regime's sign."""
    if np.any(np.sign(k) != np.sign(prob.k_o)):
        return False
    return not np.any(np.sign(v[1:]) == -prob.regime.flux_sign)


def solve_local(prob, params, tol=None, settings=None):
    """
    Solve a local problem by Picard iteration from the constant k_o.

    When the measured contraction factor exceeds 1/2, or the fixed point
    leaves the regime's sign pattern, the interval is halved and the
    iteration restarted.

    Args:
        prob (LocalProblem): Local problem
        params (Params): Problem parameters
        tol (float): Sup-norm tolerance on successive iterates
        settings (SolverSettings): Sample count and iteration limit

    Returns:
        LocalSolution: Accepted fixed point (its problem carries the delta used)
    """
    settings = settings or SolverSettings.from_config()
    tol = tol if tol is not None else settings.picard_tol
    if not tol > 0:
        raise ValueError("tol must be positive")

    for _ in range(MAX_SHRINKS + 1):
        grid, k, v, iterations, change, contraction, converged = _iterate(
            prob, params, tol, settings.picard_samples, settings.picard_max_iter
        )

        if converged is None:
            raise NoConvergence(
                f"Picard iteration did not reach {tol:.1e} in {iterations} iterations "
                f"(regime {prob.regime.value}, delta={prob.delta:.3g}, last change {change:.2e})"
            )

        if converged and _regime_consistent(prob, k, v):
            logger.debug(
                f"Picard accepted: regime={prob.regime.value} side={prob.side.value} "
                f"r_o={prob.r_o:.10g} delta={prob.delta:.3e} iterations={iterations} "
                f"contraction={contraction:.3f}"
            )
            return LocalSolution(
                problem=prob,
                r=grid,
                k=k,
                v=v,
                iterations=iterations,
                sup_change=change,
                contraction=contraction,
            )

        logger.debug(
            f"Shrinking Picard interval at r_o={prob.r_o:.6g}: delta={prob.delta:.3e} "
            f"contraction={contraction:.3f}"
        )
        prob = replace(prob, delta=prob.delta * 0.5)

    raise NoConvergence(
        f"Picard interval at r_o={prob.r_o:.6g} still fails after {MAX_SHRINKS} halvings"
    )
