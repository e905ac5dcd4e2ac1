"""
Finite-Difference Pucci Oracle Module
First half-eigenvalue of the radial Pucci operator (alpha = 0) on the unit ball
by inverse power iteration, each step solving the monotone discrete Bellman
equation with Howard's policy iteration.
"""

import numpy as np
import scipy.sparse as sparse
from scipy.sparse.linalg import spsolve

from shooting.shooting_controller import parse_sign
from utils.errors import InvalidParameters, NonConvergence, PolicyCycleDetected
from utils.logger import setup_logger
from .oracle_result import OracleResult

logger = setup_logger(__name__)

DEFAULT_NODES = 4096
DAMPING = 0.5
MAX_POLICY_STEPS = 100


class RadialPucciScheme:
    """
    Monotone three-point scheme for gamma1 u'' + gamma2 (N-1) u'/r on r_i = i h.

    Central first differences are used where they keep the scheme monotone
    and forward differences elsewhere. At the origin the operator is
    gamma1 N u''(0) with the symmetric ghost value u_{-1} = u_1. The value at
    r = 1 is zero.
    """

    def __init__(self, params, nodes):
        self.params = params
        self.n = int(nodes)
        self.h = 1.0 / self.n
        self.r = np.arange(self.n) * self.h
        self.choices = [(g1, g2) for g1 in (params.a, params.A) for g2 in (params.a, params.A)]
        self.bands = [self._bands(g1, g2) for g1, g2 in self.choices]

    def _bands(self, gamma1, gamma2):
        n, h, dim = self.n, self.h, self.params.dim
        lower = np.zeros(n)
        diag = np.zeros(n)
        upper = np.zeros(n)

        diag[0] = -2.0 * dim * gamma1 / h ** 2
        upper[0] = 2.0 * dim * gamma1 / h ** 2

        drift = gamma2 * (dim - 1) / self.r[1:]
        central = gamma1 >= 0.5 * drift * h
        lower[1:] = np.where(central, gamma1 / h ** 2 - 0.5 * drift / h, gamma1 / h ** 2)
        diag[1:] = np.where(central, -2.0 * gamma1 / h ** 2, -2.0 * gamma1 / h ** 2 - drift / h)
        upper[1:] = np.where(central, gamma1 / h ** 2 + 0.5 * drift / h, gamma1 / h ** 2 + drift / h)
        return lower, diag, upper

    def apply(self, choice, u):
        lower, diag, upper = self.bands[choice]
        shifted_down = np.concatenate(([0.0], u[:-1]))
        shifted_up = np.concatenate((u[1:], [0.0]))
        return lower * shifted_down + diag * u + upper * shifted_up

    def matrix(self, policy):
        """Sparse matrix of -L for a per-node policy (indices into choices)."""
        stacked = np.array([self.bands[c] for c in range(len(self.choices))])
        rows = np.arange(self.n)
        lower = stacked[policy, 0, rows]
        diag = stacked[policy, 1, rows]
        upper = stacked[policy, 2, rows]
        return -sparse.diags([lower[1:], diag, upper[:-1]], [-1, 0, 1], format='csc')

    def improve(self, u, maximize, current=None):
        """Greedy policy; ties within rounding keep the current choice."""
        values = np.array([self.apply(c, u) for c in range(len(self.choices))])
        best = np.argmax(values, axis=0) if maximize else np.argmin(values, axis=0)
        if current is None:
            return best
        columns = np.arange(self.n)
        slack = 1e-12 * np.max(np.abs(values), axis=0)
        keep = np.abs(values[best, columns] - values[current, columns]) <= slack
        return np.where(keep, current, best)


def _solve_bellman(scheme, rhs, policy, maximize):
    """Solve -max_pi L_pi u = rhs (or -min) by policy iteration from policy."""
    seen = {policy.tobytes()}
    for _ in range(MAX_POLICY_STEPS):
        u = spsolve(scheme.matrix(policy), rhs)
        improved = scheme.improve(u, maximize, policy)
        if np.array_equal(improved, policy):
            return u, policy
        key = improved.tobytes()
        if key in seen:
            raise PolicyCycleDetected("policy iteration revisited an earlier policy")
        seen.add(key)
        policy = improved
    raise NonConvergence(f"policy iteration did not settle in {MAX_POLICY_STEPS} steps", stage="fd_pucci")


def _inverse_power(params, sign, nodes, tol, max_outer):
    scheme = RadialPucciScheme(params, nodes)
    maximize = sign > 0

    phi = 1.0 - scheme.r ** 2
    policy = scheme.improve(phi, maximize)
    mu_previous = None

    for outer in range(1, max_outer + 1):
        u, new_policy = _solve_bellman(scheme, phi, policy, maximize)
        mu = np.max(phi) / np.max(u)
        candidate = u / np.max(u)
        if not np.array_equal(new_policy, policy):
            candidate = DAMPING * candidate + (1.0 - DAMPING) * phi
            candidate = candidate / np.max(candidate)
        change = np.max(np.abs(candidate - phi))
        phi, policy = candidate, new_policy

        if mu_previous is not None and abs(mu - mu_previous) <= tol * mu and change <= np.sqrt(tol):
            return float(mu), outer
        mu_previous = mu

    raise NonConvergence(
        f"inverse power iteration did not converge in {max_outer} steps on {nodes} nodes",
        stage="fd_pucci",
    )


def fd_pucci_mu1(params, sign, nodes=DEFAULT_NODES, tol=1e-11, max_outer=500):
    """
    First half-eigenvalue of the radial Pucci problem on the unit ball (alpha = 0).

    Args:
        params (Params): Problem parameters with alpha = 0
        sign: '+'/'plus' for the positive eigenfunction, '-'/'minus' for the negative
        nodes (int): Grid intervals on [0, 1]
        tol (float): Relative change of mu accepted as converged
        max_outer (int): Maximum inverse power iterations

    Returns:
        OracleResult: mu_1 on the grid, details carry the half-grid value
    """
    if params.alpha != 0:
        raise InvalidParameters("the finite-difference Pucci oracle needs alpha = 0", stage="fd_pucci")
    if int(nodes) != nodes or nodes < 8:
        raise InvalidParameters("nodes must be an integer >= 8", stage="fd_pucci")

    sign = parse_sign(sign)
    mu, iterations = _inverse_power(params, sign, int(nodes), tol, max_outer)
    coarse, _ = _inverse_power(params, sign, int(nodes) // 2, tol, max_outer)

    logger.debug(f"FD Pucci mu1 ({'+' if sign > 0 else '-'}) on {nodes} nodes: {mu:.10g}")
    return OracleResult(
        value=mu,
        method='fd-policy-iteration',
        certified_error=None,
        details={
            'coarse': coarse,
            'mesh_delta': abs(mu - coarse),
            'nodes': int(nodes),
            'outer_iterations': iterations,
        },
    )
