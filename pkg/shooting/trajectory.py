"""
Trajectory Module
Immutable record of a shooting solve: sampled segments with dense output,
zero and critical-point events, and the diagnostics read off them.
"""

from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from radial_operator.operator import flux_to_slope, signed_power
from radial_operator.params import FluxState


class SegmentKind(str, Enum):
    PICARD = "picard"
    INTEGRATOR = "integrator"


class EventKind(str, Enum):
    ZERO = "zero"
    CRITICAL_POINT = "critical_point"


@dataclass(frozen=True)
class Event:
    kind: EventKind
    r: float
    w: float

    def as_dict(self):
        return {'kind': self.kind.value, 'r': self.r, 'w': self.w}


@dataclass(frozen=True, eq=False)
class Segment:
    """
    Sampled (r, w, v) arc with dense output.

    Integrator segments evaluate the solver's own interpolants; Picard
    segments use a cubic Hermite spline for w (slopes from the flux) and
    linear interpolation for v.
    """

    kind: SegmentKind
    r: np.ndarray
    w: np.ndarray
    v: np.ndarray
    interpolants: tuple = ()
    alpha: float = 0.0

    @classmethod
    def from_integrator(cls, pieces, r, w, v, alpha):
        return cls(SegmentKind.INTEGRATOR, np.asarray(r), np.asarray(w), np.asarray(v),
                   tuple(pieces), alpha)

    @classmethod
    def from_picard(cls, r, w, v, alpha):
        r = np.asarray(r, dtype=float)
        w = np.asarray(w, dtype=float)
        v = np.asarray(v, dtype=float)
        spline = CubicHermiteSpline(r, w, flux_to_slope(v, alpha))
        return cls(SegmentKind.PICARD, r, w, v, (spline,), alpha)

    @property
    def r_start(self):
        return float(self.r[0])

    @property
    def r_end(self):
        return float(self.r[-1])

    @property
    def start_state(self):
        return FluxState(self.r_start, float(self.w[0]), float(self.v[0]))

    @property
    def end_state(self):
        return FluxState(self.r_end, float(self.w[-1]), float(self.v[-1]))

    def evaluate(self, radii):
        """
        Dense output at radii inside the segment.

        Args:
            radii (ndarray): Radii in [r_start, r_end]

        Returns:
            tuple: (w, v) arrays
        """
        radii = np.atleast_1d(np.asarray(radii, dtype=float))

        if self.kind is SegmentKind.PICARD:
            spline = self.interpolants[0]
            return spline(radii), np.interp(radii, self.r, self.v)

        w = np.empty_like(radii)
        v = np.empty_like(radii)
        ends = np.array([piece.t_max for piece in self.interpolants])
        index = np.minimum(np.searchsorted(ends, radii), len(ends) - 1)
        for piece_index in np.unique(index):
            mask = index == piece_index
            values = self.interpolants[piece_index](radii[mask])
            w[mask] = values[0]
            v[mask] = values[1]
        return w, v


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Global solution w+ or w- assembled from abutting segments."""

    params: object
    sign: int
    mu: float = 1.0
    segments: tuple = ()
    events: tuple = ()
    switches: tuple = ()
    notes: dict = field(default_factory=dict)

    @property
    def r_start(self):
        return self.segments[0].r_start

    @property
    def r_end(self):
        return self.segments[-1].r_end

    @property
    def end_state(self):
        return self.segments[-1].end_state

    @property
    def zeros(self):
        return np.array([event.r for event in self.events if event.kind is EventKind.ZERO])

    @property
    def critical_points(self):
        return tuple(event for event in self.events if event.kind is EventKind.CRITICAL_POINT)

    def appended(self, segment=None, events=(), switches=()):
        """New trajectory with a segment and events added at the end."""
        segments = self.segments + ((segment,) if segment is not None else ())
        return replace(
            self,
            segments=segments,
            events=self.events + tuple(events),
            switches=self.switches + tuple(switches),
        )

    def evaluate(self, radii):
        """
        Dense output (w, v) at radii in [r_start, r_end].

        Args:
            radii (float or ndarray): Radii

        Returns:
            tuple: (w, v) arrays
        """
        radii = np.atleast_1d(np.asarray(radii, dtype=float))
        span = 1e-12 * max(1.0, self.r_end)
        if np.any(radii < self.r_start - span) or np.any(radii > self.r_end + span):
            raise ValueError(
                f"radii must lie in [{self.r_start:.6g}, {self.r_end:.6g}]"
            )
        radii = np.clip(radii, self.r_start, self.r_end)

        ends = np.array([segment.r_end for segment in self.segments])
        index = np.minimum(np.searchsorted(ends, radii), len(ends) - 1)
        w = np.empty_like(radii)
        v = np.empty_like(radii)
        for segment_index in np.unique(index):
            mask = index == segment_index
            w[mask], v[mask] = self.segments[segment_index].evaluate(radii[mask])
        return w, v

    def samples(self):
        """
        All stored samples in increasing radius, duplicates at junctions removed.

        Returns:
            dict: Arrays r, w, v, slope and segment kind per sample
        """
        rows_r, rows_w, rows_v, kinds = [], [], [], []
        for segment in self.segments:
            start = 1 if rows_r and segment.r[0] <= rows_r[-1][-1] else 0
            rows_r.append(segment.r[start:])
            rows_w.append(segment.w[start:])
            rows_v.append(segment.v[start:])
            kinds.extend([segment.kind.value] * (len(segment.r) - start))

        r = np.concatenate(rows_r)
        v = np.concatenate(rows_v)
        return {
            'r': r,
            'w': np.concatenate(rows_w),
            'v': v,
            'w_prime': flux_to_slope(v, self.params.alpha),
            'segment': np.array(kinds),
        }


def riccati_variable(traj, radii):
    """
    Riccati variable y = r^{N0} v / (|w|^alpha w).

    Diagnostic used in oscillation arguments; undefined (NaN) where w = 0.

    Args:
        traj (Trajectory): Solved trajectory
        radii (float or ndarray): Radii inside the trajectory

    Returns:
        ndarray: y(r)
    """
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    w, v = traj.evaluate(radii)
    denominator = signed_power(w, traj.params.alpha)
    with np.errstate(divide='ignore', invalid='ignore'):
        y = radii ** traj.params.n_zero * v / denominator
    return np.where(denominator == 0, np.nan, y)


def audit_trajectory(traj, stitch_tol=1e-8):
    """
    List the structural invariants a trajectory violates.

    Args:
        traj (Trajectory): Solved trajectory
        stitch_tol (float): Allowed (w, v) jump at segment junctions

    Returns:
        list: Human-readable problems (empty when clean)
    """
    problems = []
    events = traj.events

    radii = [event.r for event in events]
    if any(later <= earlier for earlier, later in zip(radii, radii[1:])):
        problems.append("events are not strictly increasing in r")

    for event in events:
        if event.kind is EventKind.CRITICAL_POINT and event.w == 0:
            problems.append(f"critical point at r={event.r:.10g} has w = 0")

    zero_positions = [i for i, event in enumerate(events) if event.kind is EventKind.ZERO]
    for first, second in zip(zero_positions, zero_positions[1:]):
        between = [event for event in events[first + 1:second]
                   if event.kind is EventKind.CRITICAL_POINT]
        if len(between) != 1:
            problems.append(
                f"{len(between)} critical points between zeros at "
                f"r={events[first].r:.10g} and r={events[second].r:.10g}"
            )

    for position in zero_positions:
        r_zero = events[position].r
        left = events[position - 1].r if position > 0 else traj.r_start
        right = events[position + 1].r if position + 1 < len(events) else traj.r_end
        offset = 0.25 * min(r_zero - left, right - r_zero, 1e-3 * max(1.0, r_zero))
        if offset <= 0:
            continue
        w_around, _ = traj.evaluate([r_zero - offset, r_zero + offset])
        if not w_around[0] * w_around[1] < 0:
            problems.append(f"w does not change sign across the zero at r={r_zero:.10g}")

    for before, after in zip(traj.segments, traj.segments[1:]):
        scale = max(1.0, abs(before.w[-1]) ** (traj.params.alpha + 1.0))
        jump = max(abs(before.w[-1] - after.w[0]), abs(before.v[-1] - after.v[0]))
        if abs(before.r[-1] - after.r[0]) > 1e-12 * max(1.0, after.r[0]) or jump > stitch_tol * scale:
            problems.append(f"segments do not abut continuously at r={after.r[0]:.10g}")

    critical = traj.critical_points
    if critical and traj.r_start == 0:
        samples = traj.samples()
        before_first = (samples['r'] > 0) & (samples['r'] < critical[0].r)
        if np.any(traj.sign * samples['v'][before_first] > 0):
            direction = "decreasing" if traj.sign > 0 else "increasing"
            problems.append(f"w is not {direction} before the first critical point")

    return problems
