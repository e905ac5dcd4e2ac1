"""
Bessel Oracle Module
Eigenvalues of the radial Laplacian on the unit ball (alpha = 0, a = A = 1):
mu_k is the square of the k-th positive zero of J_{N/2-1}.
"""

import numpy as np
from scipy.optimize import brentq
from scipy.special import jv

from utils.errors import InvalidParameters
from .oracle_result import OracleResult

SCAN_STEP = 0.05
ZERO_XTOL = 1e-14
ZERO_RTOL = 1e-15


def bessel_zeros(order, count):
    """
    First `count` positive zeros of J_order.

    Sign changes are located on a uniform scan out past the McMahon estimate
    of the last zero and refined with brentq.

    Args:
        order (float): Bessel order nu > -1
        count (int): Number of zeros

    Returns:
        ndarray: Zeros in increasing order
    """
    if count < 1:
        raise InvalidParameters("count must be at least 1", stage="oracle")

    upper = (count + 0.5 * order + 1.0) * np.pi + 1.0
    grid = np.arange(SCAN_STEP, upper + SCAN_STEP, SCAN_STEP)
    values = jv(order, grid)

    zeros = []
    for left, right, f_left, f_right in zip(grid, grid[1:], values, values[1:]):
        if f_left == 0:
            zeros.append(float(left))
        elif f_left * f_right < 0:
            zeros.append(brentq(lambda x: jv(order, x), left, right, xtol=ZERO_XTOL, rtol=ZERO_RTOL))
        if len(zeros) == count:
            break

    if len(zeros) < count:
        raise InvalidParameters(f"found only {len(zeros)} zeros of J_{order}", stage="oracle")
    return np.array(zeros)


def bessel_mu(dim, k):
    """
    k-th radial Dirichlet eigenvalue of the Laplacian on the unit ball in R^dim.

    Args:
        dim (int): Dimension N >= 1
        k (int): Index, 1-based

    Returns:
        OracleResult: mu_k = j_{N/2-1,k}^2 with the bracketing error propagated
    """
    if int(dim) != dim or dim < 1:
        raise InvalidParameters("dim must be an integer >= 1", stage="oracle")
    if int(k) != k or k < 1:
        raise InvalidParameters("k must be a positive integer", stage="oracle")

    zero = bessel_zeros(0.5 * dim - 1.0, int(k))[-1]
    bound = ZERO_XTOL + ZERO_RTOL * zero
    error = 2.0 * zero * bound + bound ** 2
    return OracleResult(
        value=float(zero ** 2),
        method='bessel-zero',
        certified_error=float(error),
        details={'zero': float(zero)},
    )
