"""
Rayleigh Oracle Module
lambda_eq, the first radial eigenvalue of |u'|^alpha (u'' + (N-1) u'/r), from
the weighted Rayleigh quotient

    R(u) = int |u'|^{2+alpha} r^{N0} dr / int |u|^{2+alpha} r^{N0} dr,

with lambda_eq = inf R / (1 + alpha) in the normalization of the eigen-equation.
"""

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad
from scipy.optimize import minimize

from utils.errors import InvalidParameters, NonConvergence
from utils.logger import setup_logger
from .oracle_result import OracleResult

logger = setup_logger(__name__)

GAUSS_POINTS = 4
DEFAULT_CELLS = 200
WARM_START_DIVISOR = 4
MIN_CELLS = 4
MAX_ITERATIONS = 20000
STATIONARITY_TOL = 1e-6


def _validate_domain(alpha, dim, inner, outer):
    errors = []
    if not alpha > -1:
        errors.append("alpha must exceed -1")
    if int(dim) != dim or dim < 1:
        errors.append("dim must be an integer >= 1")
    if not 0 <= inner < outer:
        errors.append("domain must satisfy 0 <= inner < outer")
    if errors:
        raise InvalidParameters("; ".join(errors), stage="oracle")


class DiscreteRayleighQuotient:
    """
    Rayleigh quotient of continuous piecewise-linear functions on a uniform grid.

    On a ball (inner = 0) the value at the origin is free; otherwise both
    endpoint values are zero. The unknowns are the cell slopes scaled by
    (cell weight)^(1/q), so the numerator is sum |t_j|^q and the quotient is
    about as well conditioned on fine grids as on coarse ones. On an annulus
    the last slope is fixed by u(outer) = 0. The numerator is integrated
    exactly cell by cell and the denominator with Gauss-Legendre nodes.
    """

    def __init__(self, alpha, dim, inner, outer, cells):
        self.q = alpha + 2.0
        self.weight = (dim - 1) * (1.0 + alpha)
        self.nodes = np.linspace(inner, outer, cells + 1)
        self.h = (outer - inner) / cells
        self.free_origin = inner == 0

        left, right = self.nodes[:-1], self.nodes[1:]
        self.cell_weights = (right ** (self.weight + 1) - left ** (self.weight + 1)) / (self.weight + 1)
        scale = self.cell_weights ** (-1.0 / self.q)
        self.scale = scale if self.free_origin else scale[:-1]

        xi, wq = leggauss(GAUSS_POINTS)
        self.shape_right = 0.5 * (xi + 1.0)
        points = left[:, None] + self.h * self.shape_right[None, :]
        self.gauss_weights = 0.5 * self.h * wq[None, :] * points ** self.weight

    def slopes(self, unknowns):
        free = unknowns * self.scale
        if self.free_origin:
            return free
        return np.append(free, -np.sum(free))

    def expand(self, unknowns):
        """Full nodal vector from the unknowns."""
        slopes = self.slopes(unknowns)
        values = np.zeros(len(self.nodes))
        if self.free_origin:
            values[:-1] = -self.h * np.cumsum(slopes[::-1])[::-1]
        else:
            values[1:-1] = self.h * np.cumsum(slopes[:-1])
        return values

    def from_nodal(self, values):
        """Unknowns of the function with these nodal values (boundary values ignored)."""
        values = np.array(values, dtype=float)
        values[-1] = 0.0
        if not self.free_origin:
            values[0] = 0.0
        slopes = np.diff(values) / self.h
        if not self.free_origin:
            slopes = slopes[:-1]
        unknowns = slopes / self.scale
        return unknowns / np.sum(np.abs(unknowns) ** self.q) ** (1.0 / self.q)

    def initial_guess(self):
        inner, outer = self.nodes[0], self.nodes[-1]
        if self.free_origin:
            profile = 1.0 - (self.nodes / outer) ** 2
        else:
            profile = (self.nodes - inner) * (outer - self.nodes)
        return self.from_nodal(profile)

    def value_and_gradient(self, unknowns):
        q = self.q
        slopes = self.slopes(unknowns)
        values = self.expand(unknowns)

        numerator = np.sum(np.abs(slopes) ** q * self.cell_weights)
        grad_num = q * np.sign(slopes) * np.abs(slopes) ** (q - 1.0) * self.cell_weights

        at_points = (values[:-1, None] * (1.0 - self.shape_right[None, :])
                     + values[1:, None] * self.shape_right[None, :])
        denominator = np.sum(np.abs(at_points) ** q * self.gauss_weights)
        d_points = q * np.sign(at_points) * np.abs(at_points) ** (q - 1.0) * self.gauss_weights
        nodal = np.zeros(len(self.nodes))
        nodal[:-1] += np.sum(d_points * (1.0 - self.shape_right[None, :]), axis=1)
        nodal[1:] += np.sum(d_points * self.shape_right[None, :], axis=1)

        if self.free_origin:
            grad_den = -self.h * np.cumsum(nodal[:-1])
        else:
            grad_den = self.h * np.cumsum(nodal[1:-1][::-1])[::-1]
            grad_num = grad_num[:-1] - grad_num[-1]

        quotient = numerator / denominator
        gradient = (grad_num - quotient * grad_den) / denominator
        return quotient, gradient * self.scale


def _minimize_quotient(alpha, dim, inner, outer, cells, start=None):
    """
    Minimize the discrete quotient on `cells` cells.

    Args:
        start (tuple): (nodes, values) of a coarser minimizer used as the first iterate

    Returns:
        tuple: (minimum, iterations, (nodes, values) of the minimizer)
    """
    problem = DiscreteRayleighQuotient(alpha, dim, inner, outer, cells)
    if start is None:
        x0 = problem.initial_guess()
    else:
        x0 = problem.from_nodal(np.interp(problem.nodes, *start))

    result = minimize(
        problem.value_and_gradient,
        x0,
        jac=True,
        method='L-BFGS-B',
        options={'maxiter': MAX_ITERATIONS, 'maxfun': 2 * MAX_ITERATIONS, 'ftol': 1e-15, 'gtol': 1e-12},
    )
    # the quotient is 0-homogeneous, so |grad| * |x| / R is scale free
    stationarity = np.max(np.abs(result.jac)) * np.max(np.abs(result.x)) / abs(result.fun)
    if not np.isfinite(result.fun) or (not result.success and stationarity > STATIONARITY_TOL):
        raise NonConvergence(
            f"Rayleigh quotient minimization stopped on {cells} cells: {result.message} "
            f"(stationarity {stationarity:.2e})"
        )
    logger.debug(
        f"Rayleigh quotient on {cells} cells: R={result.fun:.12g} after {result.nit} iterations "
        f"(stationarity {stationarity:.2e})"
    )
    return float(result.fun), int(result.nit), (problem.nodes, problem.expand(result.x))


def rayleigh_lambda_eq(alpha, dim, domain=(0.0, 1.0), cells=DEFAULT_CELLS):
    """
    Estimate lambda_eq on a ball (inner = 0) or an annulus (inner > 0).

    Every discrete minimizer is an admissible function, so the finer run is an
    upper bound; the reported estimate extrapolates the two runs assuming
    second-order convergence.

    Args:
        alpha (float): Gradient exponent
        dim (int): Dimension N
        domain (tuple): (inner, outer) radii
        cells (int): Cells of the coarse grid; the fine grid has twice as many and a
            grid with a quarter as many supplies the first iterate

    Returns:
        OracleResult: value = extrapolated lambda_eq, details carry the upper bound
    """
    inner, outer = float(domain[0]), float(domain[1])
    _validate_domain(alpha, dim, inner, outer)
    if int(cells) != cells or cells < MIN_CELLS:
        raise InvalidParameters(f"cells must be an integer >= {MIN_CELLS}", stage="oracle")
    cells = int(cells)

    start, warm_iterations = None, 0
    if cells // WARM_START_DIVISOR >= MIN_CELLS:
        _, warm_iterations, start = _minimize_quotient(alpha, dim, inner, outer, cells // WARM_START_DIVISOR)
    coarse, coarse_iterations, start = _minimize_quotient(alpha, dim, inner, outer, cells, start)
    fine, fine_iterations, _ = _minimize_quotient(alpha, dim, inner, outer, 2 * cells, start)

    coarse /= (1.0 + alpha)
    fine /= (1.0 + alpha)
    estimate = fine - (coarse - fine) / 3.0

    return OracleResult(
        value=float(estimate),
        method='rayleigh-p1',
        certified_error=None,
        details={
            'upper_bound': float(fine),
            'coarse': float(coarse),
            'cells': int(cells),
            'iterations': warm_iterations + coarse_iterations + fine_iterations,
        },
    )


def parabola_bound(alpha, dim, inner, outer):
    """
    Rayleigh quotient of u = (r - inner)(outer - r), an upper bound of lambda_eq(]inner, outer[).

    Args:
        alpha (float): Gradient exponent
        dim (int): Dimension N
        inner (float): Inner radius c
        outer (float): Outer radius b

    Returns:
        OracleResult: value = bound, details carry phi_hat = bound (b - c)^{2+alpha}
    """
    _validate_domain(alpha, dim, inner, outer)
    q = alpha + 2.0
    weight = (dim - 1) * (1.0 + alpha)
    middle = 0.5 * (inner + outer)

    def gradient_term(r):
        return abs(inner + outer - 2.0 * r) ** q * r ** weight

    def value_term(r):
        return abs((r - inner) * (outer - r)) ** q * r ** weight

    numerator = (quad(gradient_term, inner, middle, epsrel=1e-13)[0]
                 + quad(gradient_term, middle, outer, epsrel=1e-13)[0])
    denominator = quad(value_term, inner, outer, epsrel=1e-13)[0]

    bound = numerator / denominator / (1.0 + alpha)
    return OracleResult(
        value=float(bound),
        method='parabola-test-function',
        certified_error=None,
        details={'phi_hat': float(bound * (outer - inner) ** q)},
    )
