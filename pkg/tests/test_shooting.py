from dataclasses import replace

import numpy as np
import pytest

from oracles.energy import conserved_energy, pseudo_plap_spacing
from radial_operator.operator import small_m
from radial_operator.params import FluxState, Params
from shooting import shooting_controller
from shooting.integrator import (
    Termination, integrate_until_event, rhs, rhs_flux, switching_bracket,
)
from shooting.shooting_controller import parse_sign, solve_w
from shooting.trajectory import EventKind, Segment, audit_trajectory, riccati_variable
from utils.config import SolverSettings
from utils.errors import CriticalProximity, InvalidParameters, StitchMismatch


@pytest.fixture
def tight():
    return SolverSettings(ode_rtol=1e-12, ode_atol=1e-14)


def test_sinc_zeros(laplace3, tight):
    traj = solve_w(laplace3, '+', zeros=3, settings=tight)
    np.testing.assert_allclose(traj.zeros, [np.pi, 2 * np.pi, 3 * np.pi], atol=1e-9)


def test_first_bessel_zero(laplace2, tight):
    traj = solve_w(laplace2, 'plus', zeros=1, settings=tight)
    assert traj.zeros[0] == pytest.approx(2.404825557695773, abs=1e-8)


def test_continuation_through_first_critical_point(laplace3, tight):
    traj = solve_w(laplace3, 1, zeros=2, settings=tight)
    critical = traj.critical_points
    assert critical[0].r == pytest.approx(4.493409457909064, abs=1e-6)
    assert critical[0].w == pytest.approx(np.sin(critical[0].r) / critical[0].r, abs=1e-8)

    radii = np.array([4.0, 4.6, 5.0, 6.0])
    w, _ = traj.evaluate(radii)
    np.testing.assert_allclose(w, np.sin(radii) / radii, atol=1e-8)


def test_minus_mirrors_plus_when_symmetric(tight):
    params = Params(0.5, 1.5, 1.5, 3)
    plus = solve_w(params, '+', zeros=3, settings=tight)
    minus = solve_w(params, '-', zeros=3, settings=tight)
    np.testing.assert_allclose(minus.zeros, plus.zeros, rtol=1e-10)

    radii = np.linspace(0.0, 0.999 * plus.zeros[-1], 50)
    w_plus, v_plus = plus.evaluate(radii)
    w_minus, v_minus = minus.evaluate(radii)
    np.testing.assert_allclose(w_minus, -w_plus, atol=1e-9)
    np.testing.assert_allclose(v_minus, -v_plus, atol=1e-9)


@pytest.mark.parametrize("params", [
    Params(0.0, 1.0, 1.0, 3),
    Params(0.0, 1.0, 2.0, 3),
    Params(1.0, 0.5, 2.0, 2),
    Params(-0.5, 1.0, 3.0, 4),
])
def test_trajectory_audit_is_clean(params):
    traj = solve_w(params, '+', zeros=3)
    assert audit_trajectory(traj) == []
    assert len(traj.critical_points) >= 2
    kinds = [event.kind for event in traj.events]
    assert kinds[0] is EventKind.ZERO


def test_w_decreases_before_first_critical_point(pucci):
    traj = solve_w(pucci, '+', zeros=1)
    samples = traj.samples()
    assert np.all(np.diff(samples['w']) < 0)
    assert samples['w'][0] == 1.0


@pytest.mark.parametrize("alpha", [-0.5, 1.0, 2.0])
def test_one_dimensional_zeros_equally_spaced(alpha, tight):
    params = Params(alpha, 1.0, 1.0, 1)
    traj = solve_w(params, '+', zeros=5, settings=tight)
    spacing = np.diff(traj.zeros)
    np.testing.assert_allclose(spacing, spacing[0], rtol=1e-7)
    assert traj.zeros[0] == pytest.approx(0.5 * spacing[0], rel=1e-7)
    assert spacing[0] == pytest.approx(pseudo_plap_spacing(alpha, 1.0).value, rel=1e-6)


@pytest.mark.parametrize("alpha", [-0.5, 1.0, 2.0])
def test_one_dimensional_energy_is_conserved(alpha, tight):
    params = Params(alpha, 1.0, 1.0, 1)
    traj = solve_w(params, '+', zeros=3, settings=tight)
    samples = traj.samples()
    energy = conserved_energy(samples['w'], samples['v'], params.alpha, params.a)
    np.testing.assert_allclose(energy, energy[0], rtol=1e-8)


def test_one_dimensional_switches_sit_on_the_zeros(tight):
    params = Params(2.0, 1.0, 1.0, 1)
    traj = solve_w(params, '+', zeros=4, settings=tight)
    np.testing.assert_allclose(traj.switches, traj.zeros[:-1], atol=1e-9)


def test_switch_radii_are_sign_changes_of_the_bracket(pucci, tight):
    traj = solve_w(pucci, '+', zeros=2, settings=tight)
    assert len(traj.switches) >= 2
    for r in traj.switches:
        radii = np.array([r - 1e-6, r + 1e-6])
        w, v = traj.evaluate(radii)
        before, after = switching_bracket(radii, w, v, pucci)
        assert before * after < 0


@pytest.mark.parametrize("params", [Params(0.0, 1.0, 2.0, 3), Params(1.0, 1.0, 2.0, 2)])
def test_rescaled_radius_solves_the_scaled_eigenvalue(params, tight):
    beta = 1.7
    unit = solve_w(params, '+', zeros=2, settings=tight)
    scaled = solve_w(params, '+', zeros=2, mu=beta ** (2.0 + params.alpha), settings=tight)
    np.testing.assert_allclose(scaled.zeros, unit.zeros / beta, rtol=1e-8)

    radii = np.linspace(0.0, 0.99 * scaled.zeros[-1], 40)
    w_scaled, v_scaled = scaled.evaluate(radii)
    w_unit, v_unit = unit.evaluate(beta * radii)
    np.testing.assert_allclose(w_scaled, w_unit, atol=1e-7)
    np.testing.assert_allclose(v_scaled, beta ** (1.0 + params.alpha) * v_unit, atol=1e-6)


def test_solve_w_rejects_a_broken_junction(laplace3, monkeypatch):
    original = shooting_controller.extend_through_critical
    calls = []

    def shifted_continuation(traj, params, r_limit=np.inf, settings=None):
        extended = original(traj, params, r_limit, settings)
        if extended is traj or calls:
            return extended
        calls.append(extended.r_end)
        last = extended.segments[-1]
        broken = Segment.from_picard(last.r, last.w + 1e-3, last.v, last.alpha)
        return replace(extended, segments=extended.segments[:-1] + (broken,))

    monkeypatch.setattr(shooting_controller, 'extend_through_critical', shifted_continuation)
    with pytest.raises(StitchMismatch) as excinfo:
        solve_w(laplace3, '+', zeros=2)
    assert calls
    assert 'segments do not abut' in str(excinfo.value)


def test_rhs_matches_sinc_derivatives(laplace3):
    r = 1.0
    slope = np.cos(r) - np.sin(r)
    dw, dv = rhs(FluxState(r, np.sin(r), slope), laplace3)
    assert dw == pytest.approx(slope, rel=1e-14)
    assert dv == pytest.approx(np.sin(r) - 2.0 * np.cos(r), rel=1e-13)


def test_rhs_forms_agree_on_random_states():
    rng = np.random.default_rng(2024)
    for _ in range(10000):
        alpha = rng.uniform(-0.9, 3.0)
        a = rng.uniform(0.5, 2.0)
        params = Params(alpha, a, a * rng.uniform(1.0, 3.0), int(rng.integers(1, 6)))
        state = FluxState(
            rng.uniform(0.1, 5.0),
            rng.uniform(-2.0, 2.0),
            rng.choice([-1.0, 1.0]) * rng.uniform(1e-3, 3.0),
        )
        mu = rng.uniform(0.5, 20.0)
        curvature_form = rhs(state, params, mu, eps=1e-6)
        flux_form = rhs_flux(state, params, mu)

        scale = (
            abs(small_m(state.v, params)) * (params.dim - 1) / state.r
            + mu * abs(state.w) ** (alpha + 1.0)
        ) * (1.0 + alpha) / params.a
        assert curvature_form[0] == flux_form[0]
        assert abs(curvature_form[1] - flux_form[1]) <= 1e-12 * scale + 1e-300


def test_rhs_is_odd_when_symmetric():
    params = Params(0.7, 1.3, 1.3, 4)
    state = FluxState(0.8, 0.4, -0.25)
    mirrored = FluxState(0.8, -0.4, 0.25)
    dw, dv = rhs(state, params, 3.0)
    dw_m, dv_m = rhs(mirrored, params, 3.0)
    assert dw_m == -dw
    assert dv_m == pytest.approx(-dv, rel=1e-15)


def test_rhs_refuses_states_in_the_handoff_band(laplace3):
    with pytest.raises(CriticalProximity) as excinfo:
        rhs(FluxState(1.0, 0.5, 1e-9), laplace3, eps=1e-6)
    assert excinfo.value.state.v == 1e-9


def test_integration_from_the_handoff_band_is_empty(laplace3):
    arc = integrate_until_event(FluxState(1.0, 0.5, 1e-9), laplace3, 10.0)
    assert arc.segment is None
    assert arc.termination is Termination.CRITICAL_PROXIMITY


def test_integration_to_a_radius_limit(laplace3, tight):
    start_r = 0.5
    start = FluxState(start_r, np.sin(start_r) / start_r,
                      np.cos(start_r) / start_r - np.sin(start_r) / start_r ** 2)
    arc = integrate_until_event(start, laplace3, 4.0, settings=tight)
    assert arc.termination is Termination.LIMIT
    assert arc.zeros[0] == pytest.approx(np.pi, abs=1e-9)


def test_riccati_variable_negative_before_first_zero(laplace3):
    traj = solve_w(laplace3, "+", zeros=1)
    y = riccati_variable(traj, [0.5, 1.0, 2.0])
    assert np.all(np.isfinite(y))
    assert np.all(y < 0)


def test_solve_w_rejects_missing_stop_condition(laplace3):
    with pytest.raises(InvalidParameters):
        solve_w(laplace3, '+')
    with pytest.raises(InvalidParameters):
        solve_w(laplace3, '+', zeros=0)
    with pytest.raises(InvalidParameters):
        parse_sign('up')


def test_solve_w_to_a_radius(laplace3):
    traj = solve_w(laplace3, '-', r_max=5.0)
    assert traj.r_end == pytest.approx(5.0)
    assert len(traj.zeros) == 1
    w, _ = traj.evaluate([0.0])
    assert w[0] == -1.0
