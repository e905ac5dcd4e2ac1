"""
Shooting Controller
Builds the global radial solutions w+ and w- by alternating the Runge-Kutta
integrator between critical points with Picard segments through them.
"""

import numpy as np

from picard_local.local_problem import (
    LocalProblem, Regime, Side, initial_flux_slope, picard_delta, select_regime,
)
from picard_local.picard_solver import solve_local
from radial_operator.operator import big_M, flux_to_slope
from radial_operator.params import FluxState
from utils.config import SolverSettings
from utils.errors import (
    InvalidParameters, OscillationTimeout, StepFailure, StitchMismatch,
)
from utils.helpers import measure_execution_time
from utils.logger import setup_logger
from .integrator import (
    Termination, handoff_threshold, integrate_until_event, switching_bracket,
)
from .trajectory import Event, EventKind, Segment, SegmentKind, Trajectory, audit_trajectory

logger = setup_logger(__name__)

SPACING_FRACTION = 0.1
MIN_SPAN = 1e-9


def parse_sign(sign):
    """Normalize '+', 'plus', 1 (and the negative spellings) to +1 / -1."""
    aliases = {'+': 1, 'plus': 1, '1': 1, '+1': 1, '-': -1, 'minus': -1, '-1': -1}
    key = str(sign).strip().lower()
    if key not in aliases:
        raise InvalidParameters(f"sign must be plus or minus, got {sign!r}", stage="shooting")
    return aliases[key]


def first_zero_estimate(params, mu=1.0):
    """Rough radius of the first zero, only used to size the integration cap."""
    scale = (params.A * (1.0 + params.alpha) / mu) ** (1.0 / (params.alpha + 2.0))
    return scale * (0.5 * np.pi + 0.8 * (params.dim - 1))


def _critical_radius(segment, params, mu):
    """Extrapolate v to zero from the end of an integrator segment."""
    end = segment.end_state
    if end.v == 0:
        return end.r

    dv = (1.0 + params.alpha) * big_M(
        switching_bracket(end.r, end.w, end.v, params, mu), params)
    newton = end.r - end.v / dv if dv != 0 else np.inf

    gap_guess = abs(end.v / dv) if dv != 0 else end.r - segment.r_start
    r_prev = max(segment.r_start, end.r - gap_guess)
    if r_prev < end.r:
        _, v_prev = segment.evaluate([r_prev])
        v_prev = float(v_prev[0])
        if v_prev != end.v:
            secant = end.r - end.v * (end.r - r_prev) / (end.v - v_prev)
            if np.isfinite(secant) and secant >= end.r:
                return secant

    if np.isfinite(newton) and newton >= end.r:
        return newton
    return end.r


def _landmark_spacing(traj):
    zeros = traj.zeros
    if len(zeros) >= 2:
        return zeros[-1] - zeros[-2]
    if len(zeros) == 1:
        return zeros[0] - traj.r_start
    return traj.r_end - traj.r_start


def _handoff_span(w_star, regime, params, mu, settings, r_o):
    """Distance from a critical point at which |v| reaches the handoff multiple."""
    threshold = handoff_threshold(w_star, params.alpha, settings.handoff_eps)
    target = settings.picard_handoff_factor * threshold
    if r_o == 0:
        return target / abs(initial_flux_slope(params, regime, mu))
    rate = (1.0 + params.alpha) * mu * abs(w_star) ** (params.alpha + 1.0) / regime.coeff(params)
    return target / rate


def extend_through_critical(traj, params, r_limit=np.inf, settings=None):
    """
    Continue a trajectory whose integrator stopped next to a critical point.

    The critical radius is extrapolated from the flux, the mirrored left regime
    is re-solved back to the last integrator sample as a stitching check, and
    the right regime is solved by Picard iteration past the critical point.

    Args:
        traj (Trajectory): Trajectory ending with an integrator segment
        params (Params): Problem parameters
        r_limit (float): Radius the right Picard interval must not pass
        settings (SolverSettings): Tolerances

    Returns:
        Trajectory: Trajectory with the Picard segment and CriticalPoint event appended
    """
    settings = settings or SolverSettings.from_config()
    segment = traj.segments[-1]
    if segment.kind is not SegmentKind.INTEGRATOR:
        raise StepFailure("a critical point must be approached by the integrator", stage="stitching")

    alpha = params.alpha
    mu = traj.mu
    end = segment.end_state

    r_star = _critical_radius(segment, params, mu)
    resolution = MIN_SPAN * max(1.0, r_star)
    if r_star - end.r < resolution:
        r_star = end.r
    gap = r_star - end.r
    w_star = end.w + float(flux_to_slope(end.v, alpha)) * gap * (alpha + 1.0) / (alpha + 2.0)

    right_regime = select_regime(w_star, Side.RIGHT)
    room = r_limit - r_star
    if room < resolution:
        return traj
    scale = max(1.0, abs(w_star) ** (alpha + 1.0))

    pieces_r, pieces_w, pieces_v = [], [], []
    if gap > 0:
        left = solve_local(
            LocalProblem(r_star, w_star, select_regime(w_star, Side.LEFT), Side.LEFT, gap, mu),
            params, settings=settings,
        )
        mismatch = max(abs(left.k[-1] - end.w), abs(left.v[-1] - end.v))
        if mismatch > settings.stitch_tol * scale or left.delta != gap:
            raise StitchMismatch(
                f"left rerun from r*={r_star:.12g} misses the integrator state at "
                f"r={end.r:.12g} by {mismatch:.2e}"
            )
        r_left, k_left, v_left = left.ordered()
        r_left = r_left.copy()
        r_left[0] = end.r
        pieces_r.append(r_left)
        pieces_w.append(k_left)
        pieces_v.append(v_left)

    delta = min(
        picard_delta(params, w_star, right_regime, mu, settings.picard_safety),
        _handoff_span(w_star, right_regime, params, mu, settings, r_star),
        SPACING_FRACTION * _landmark_spacing(traj),
        room,
    )
    right = solve_local(
        LocalProblem(r_star, w_star, right_regime, Side.RIGHT, delta, mu),
        params, settings=settings,
    )
    start = 1 if pieces_r else 0
    pieces_r.append(right.r[start:])
    pieces_w.append(right.k[start:])
    pieces_v.append(right.v[start:])
    logger.debug(
        f"Through critical point r*={r_star:.12g} w*={w_star:.6g} "
        f"regime={right_regime.value} delta={right.delta:.3e}"
    )

    picard_segment = Segment.from_picard(
        np.concatenate(pieces_r), np.concatenate(pieces_w), np.concatenate(pieces_v), alpha,
    )
    event = Event(EventKind.CRITICAL_POINT, float(r_star), float(w_star))
    return traj.appended(picard_segment, [event])


def _advance(traj, params, start, r_limit, max_zeros, settings, skip_band_check):
    """
    Alternate integrator arcs and critical-point continuations up to r_limit.

    Returns:
        tuple: (Trajectory, Termination)
    """
    while True:
        remaining = None if max_zeros is None else max_zeros - len(traj.zeros)
        state = start if start is not None else traj.end_state
        start = None

        arc = integrate_until_event(
            state, params, r_limit, traj.mu, remaining, settings, allow_band_start=skip_band_check,
        )

        if arc.segment is None and arc.termination is Termination.CRITICAL_PROXIMITY:
            raise StepFailure(
                f"integration cannot leave the handoff band at r={state.r:.10g}", stage="shooting"
            )

        zero_events = [Event(EventKind.ZERO, r, 0.0) for r in arc.zeros]
        traj = traj.appended(arc.segment, zero_events, arc.switches)

        if arc.termination is not Termination.CRITICAL_PROXIMITY:
            return traj, arc.termination

        extended = extend_through_critical(traj, params, r_limit, settings)
        if extended is traj or extended.r_end >= r_limit:
            return extended, Termination.LIMIT
        traj = extended
        skip_band_check = True


def shoot(params, start, sign, mu=1.0, zeros=None, r_max=None, settings=None):
    """
    Integrate from a general state (w and v not both zero) with eigenvalue mu.

    Used for annuli, where the solution starts at the inner radius with w = 0.

    Args:
        params (Params): Problem parameters
        start (FluxState): Initial state, r > 0
        sign (int): +1 or -1, the sign the solution takes first
        mu (float): Eigenvalue
        zeros (int): Stop after this many zeros when set
        r_max (float): Largest radius
        settings (SolverSettings): Tolerances

    Returns:
        Trajectory: Solution up to the stop condition or r_max
    """
    settings = settings or SolverSettings.from_config()
    if r_max is None or not r_max > start.r:
        raise InvalidParameters("r_max must exceed the starting radius", stage="shooting")

    traj = Trajectory(params=params, sign=parse_sign(sign), mu=mu)
    traj, _ = _advance(traj, params, start, r_max, zeros, settings, skip_band_check=False)
    return traj


def _initial_segment(params, sign, mu, r_max, settings):
    regime = Regime.EQ2 if sign > 0 else Regime.EQ4
    delta = min(
        picard_delta(params, float(sign), regime, mu, settings.picard_safety),
        _handoff_span(float(sign), regime, params, mu, settings, 0.0),
        r_max if r_max is not None else np.inf,
    )
    solution = solve_local(
        LocalProblem(0.0, float(sign), regime, Side.RIGHT, delta, mu), params, settings=settings,
    )
    return Segment.from_picard(solution.r, solution.k, solution.v, params.alpha)


@measure_execution_time(logger)
def solve_w(params, sign, zeros=None, r_max=None, mu=1.0, settings=None):
    """
    Solve the radial IVP w(0) = +-1, w'(0) = 0 with eigenvalue mu.

    Args:
        params (Params): Problem parameters
        sign: '+'/'plus'/1 for w+, '-'/'minus'/-1 for w-
        zeros (int): Number of zeros K to reach
        r_max (float): Radius to integrate to (used when zeros is unset)
        mu (float): Eigenvalue, 1 for the normalized problem
        settings (SolverSettings): Tolerances

    Returns:
        Trajectory: Solution with all zero and critical-point events

    Raises:
        StitchMismatch: The assembled trajectory fails audit_trajectory
    """
    settings = settings or SolverSettings.from_config()
    sign = parse_sign(sign)

    if zeros is None and r_max is None:
        raise InvalidParameters("give a zero count or a maximum radius", stage="shooting")
    if zeros is not None and (int(zeros) != zeros or zeros < 1):
        raise InvalidParameters(f"zero count must be a positive integer, got {zeros}", stage="shooting")
    if r_max is not None and not r_max > 0:
        raise InvalidParameters(f"r_max must be positive, got {r_max}", stage="shooting")

    traj = Trajectory(params=params, sign=sign, mu=mu,
                      segments=(_initial_segment(params, sign, mu, r_max, settings),))

    if zeros is None:
        traj, _ = _advance(traj, params, None, r_max, None, settings, skip_band_check=True)
    else:
        cap = 4.0 * (zeros + 1) * first_zero_estimate(params, mu)
        if r_max is not None:
            cap = min(cap, r_max)
        doublings = 0
        while True:
            traj, termination = _advance(traj, params, None, cap, zeros, settings, skip_band_check=True)
            if termination is Termination.ZERO_COUNT:
                break
            if (r_max is not None and cap >= r_max) or doublings >= settings.r_cap_doublings:
                raise OscillationTimeout(
                    f"only {len(traj.zeros)} of {zeros} zeros found before r={cap:.6g}"
                )
            doublings += 1
            cap = cap * 2.0 if r_max is None else min(cap * 2.0, r_max)
            logger.debug(f"Raising integration cap to r={cap:.6g}")

    problems = audit_trajectory(traj, settings.stitch_tol)
    if problems:
        raise StitchMismatch(f"trajectory audit failed: {'; '.join(problems)}", stage="shooting")

    logger.debug(
        f"solve_w sign={'+' if sign > 0 else '-'} zeros={len(traj.zeros)} "
        f"critical_points={len(traj.critical_points)} r_end={traj.r_end:.6g}"
    )
    return traj
