"""
Integrator Module
Flux-form right-hand side of the regime-switching radial ODE and the adaptive
Runge-Kutta integration between critical points, with event detection.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from radial_operator.operator import big_M, flux_to_slope, signed_power, small_m
from radial_operator.params import FluxState
from utils.config import SolverSettings
from utils.errors import CriticalProximity, InvalidParameters, StepFailure
from utils.logger import setup_logger
from .trajectory import Segment

logger = setup_logger(__name__)

MAX_RESTARTS = 100000


class Termination(str, Enum):
    CRITICAL_PROXIMITY = "critical_proximity"
    LIMIT = "limit"
    ZERO_COUNT = "zero_count"


@dataclass(frozen=True, eq=False)
class ArcResult:
    """Outcome of one integrator run between critical points."""

    segment: object
    zeros: tuple
    switches: tuple
    termination: Termination
    end_state: FluxState


def handoff_threshold(w, alpha, eps):
    """Flux level below which the Picard solver takes over."""
    return eps * np.maximum(1.0, np.abs(w) ** (alpha + 1.0))


def switching_bracket(r, w, v, params, mu=1.0):
    """Argument of M in the flux ODE; its sign selects gamma1."""
    return -small_m(v, params) * (params.dim - 1) / r - mu * signed_power(w, params.alpha)


def rhs(state, params, mu=1.0, eps=None):
    """
    Derivatives (dw/dr, dv/dr) from the curvature form of the switching ODE.

    w'' = M(-m(w')(N-1)/r - mu |w|^alpha w / |w'|^alpha) and dv/dr = (1+alpha)|w'|^alpha w''.

    Args:
        state (FluxState): Point with r > 0
        params (Params): Problem parameters
        mu (float): Eigenvalue
        eps (float): Handoff level, configured value when unset

    Returns:
        tuple: (dw/dr, dv/dr)
    """
    eps = eps if eps is not None else SolverSettings.from_config().handoff_eps
    if not state.r > 0:
        raise InvalidParameters(f"radius must be positive, got {state.r}", stage="integrator")

    threshold = handoff_threshold(state.w, params.alpha, eps)
    if abs(state.v) < threshold:
        raise CriticalProximity(
            f"|v|={abs(state.v):.3e} below handoff threshold {threshold:.3e} at r={state.r:.10g}",
            state=state,
        )

    alpha = params.alpha
    slope = float(flux_to_slope(state.v, alpha))
    weight = abs(slope) ** alpha
    curvature = big_M(
        -small_m(slope, params) * (params.dim - 1) / state.r
        - mu * float(signed_power(state.w, alpha)) / weight,
        params,
    )
    return slope, (1.0 + alpha) * weight * curvature


def rhs_flux(state, params, mu=1.0):
    """
    Derivatives from the explicit coefficient form of the flux ODE.

    dv/dr = -gamma2 (N-1)(1+alpha) v / (gamma1 r) - (1+alpha) mu |w|^alpha w / gamma1,
    gamma1 chosen by the sign of the switching bracket and gamma2 by the sign of v.

    Returns:
        tuple: (dw/dr, dv/dr)
    """
    alpha = params.alpha
    bracket = switching_bracket(state.r, state.w, state.v, params, mu)
    gamma1 = params.A if bracket > 0 else params.a
    gamma2 = params.A if state.v > 0 else params.a

    dv = (
        -gamma2 * (params.dim - 1) * (1.0 + alpha) * state.v / (gamma1 * state.r)
        - (1.0 + alpha) * mu * float(signed_power(state.w, alpha)) / gamma1
    )
    return float(flux_to_slope(state.v, alpha)), dv


def _flux_field(params, mu):
    alpha = params.alpha

    def field(r, y):
        w, v = y
        bracket = switching_bracket(r, w, v, params, mu)
        return [flux_to_slope(v, alpha), (1.0 + alpha) * big_M(bracket, params)]

    return field


def _event_functions(state, params, mu, eps):
    alpha = params.alpha
    w_sign = np.sign(state.w) if state.w != 0 else np.sign(state.v)

    def zero_event(r, y):
        return y[0]

    zero_event.terminal = True
    zero_event.direction = -w_sign

    def handoff_event(r, y):
        return abs(y[1]) - handoff_threshold(y[0], alpha, eps)

    handoff_event.terminal = True
    handoff_event.direction = -1

    def flux_sign_event(r, y):
        return y[1]

    flux_sign_event.terminal = True
    flux_sign_event.direction = -np.sign(state.v)

    return [zero_event, handoff_event, flux_sign_event]


def _bracket_sign_changes(t, y, sol, params, mu, xtol, carried=None):
    """
    Radii where the switching bracket changes sign along one solve_ivp run.

    Sign changes are located between accepted steps and refined to xtol on the
    dense output through sign(b)|b|^(1/(alpha+1)), which crosses zero
    transversally even where b vanishes to order alpha+1 (at the zeros of w
    when N = 1). A change spanning the restart radius t[0], where the bracket
    vanishes, is recorded at t[0].

    Args:
        t (ndarray): Step radii of the run
        y (ndarray): States (w, v) at t
        sol (callable): Dense output of the run
        params (Params): Problem parameters
        mu (float): Eigenvalue
        xtol (float): Root tolerance
        carried (tuple): (r, sign) of the last nonzero bracket before this run

    Returns:
        tuple: (radii, carried) with carried updated to the end of this run
    """
    exponent = 1.0 / (params.alpha + 1.0) - 1.0

    def transformed(r):
        w, v = sol(r)
        return float(signed_power(switching_bracket(r, w, v, params, mu), exponent))

    signs = np.sign(switching_bracket(t, y[0], y[1], params, mu))
    last_r, last_sign = carried if carried is not None else (None, 0.0)
    radii = []
    for r, current in zip(t, signs):
        if current == 0:
            continue
        if last_sign and current != last_sign:
            if last_r < t[0]:
                radii.append(float(t[0]))
            else:
                try:
                    radii.append(float(brentq(transformed, last_r, r, xtol=xtol, rtol=1e-12)))
                except ValueError:
                    radii.append(float(0.5 * (last_r + r)))
        last_r, last_sign = float(r), current
    return radii, (last_r, last_sign)


def integrate_until_event(start, params, r_limit, mu=1.0, max_zeros=None, settings=None,
                          allow_band_start=False):
    """
    Integrate the flux ODE from start until a critical point approaches or r_limit.

    Zeros of w are localized by the event root finder on the dense output and
    recorded; integration restarts from each zero with w set to 0 exactly.
    Sign changes of the switching bracket are recorded without stopping; a
    failure of the event root finder is reported as StepFailure.

    Args:
        start (FluxState): Initial state with r > 0 and |v| above the handoff level
        params (Params): Problem parameters
        r_limit (float): Largest radius to integrate to
        mu (float): Eigenvalue
        max_zeros (int): Stop at this many zeros when set
        settings (SolverSettings): Tolerances
        allow_band_start (bool): Start even when |v| is inside the handoff band,
            as happens at the end of a Picard segment; a later sign change of v
            still stops the run

    Returns:
        ArcResult: Segment (None when nothing was integrated), events and termination
    """
    settings = settings or SolverSettings.from_config()
    eps = settings.handoff_eps
    alpha = params.alpha

    if not start.r > 0:
        raise InvalidParameters(f"integration must start at r > 0, got {start.r}", stage="integrator")

    if not allow_band_start and abs(start.v) < handoff_threshold(start.w, alpha, eps):
        return ArcResult(None, (), (), Termination.CRITICAL_PROXIMITY, start)
    if start.r >= r_limit:
        return ArcResult(None, (), (), Termination.LIMIT, start)

    field = _flux_field(params, mu)
    pieces, radii, values = [], [np.array([start.r])], [np.array([[start.w], [start.v]])]
    zeros, switches = [], []
    carried = None
    state = start
    termination = None

    for _ in range(MAX_RESTARTS):
        events = _event_functions(state, params, mu, eps)
        try:
            solution = solve_ivp(
                field,
                (state.r, r_limit),
                [state.w, state.v],
                method='RK45',
                rtol=settings.ode_rtol,
                atol=settings.ode_atol,
                dense_output=True,
                events=events,
            )
        except RuntimeError as error:
            raise StepFailure(f"event location failed after r={state.r:.10g}: {error}") from error
        if solution.status == -1:
            raise StepFailure(f"integration failed at r>{state.r:.10g}: {solution.message}")

        hit_zero = solution.status == 1 and len(solution.t_events[0]) > 0
        if hit_zero:
            solution.y[0, -1] = 0.0
        pieces.append(solution.sol)
        radii.append(solution.t[1:])
        values.append(solution.y[:, 1:])
        if len(solution.t) > 1:
            found, carried = _bracket_sign_changes(
                solution.t, solution.y, solution.sol, params, mu, settings.zero_tol, carried,
            )
            switches.extend(found)

        end_r = float(solution.t[-1])
        end_w, end_v = (float(x) for x in solution.y[:, -1])

        if solution.status == 0:
            termination = Termination.LIMIT
            state = FluxState(end_r, end_w, end_v)
            break

        if hit_zero:
            zeros.append(end_r)
            state = FluxState(end_r, 0.0, end_v)
            logger.debug(f"Zero of w at r={end_r:.12g}")
            if max_zeros is not None and len(zeros) >= max_zeros:
                termination = Termination.ZERO_COUNT
                break
            continue

        termination = Termination.CRITICAL_PROXIMITY
        state = FluxState(end_r, end_w, end_v)
        break
    else:
        raise StepFailure(f"integration restarted {MAX_RESTARTS} times without finishing")

    r = np.concatenate(radii)
    y = np.concatenate(values, axis=1)
    segment = Segment.from_integrator(pieces, r, y[0], y[1], alpha)
    return ArcResult(segment, tuple(zeros), tuple(switches), termination, state)
