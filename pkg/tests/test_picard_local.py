import numpy as np
import pytest

from picard_local.local_problem import (
    LocalProblem, Regime, Side, initial_decay_radius, initial_flux_slope, picard_bound,
    picard_delta, select_regime,
)
from picard_local.picard_solver import apply_T, solve_local
from radial_operator.params import Params
from utils.errors import InvalidParameters, ZeroValueAtCritical


def test_picard_delta_laplace(laplace3):
    assert picard_bound(laplace3) == pytest.approx(1.0, rel=1e-14)
    assert picard_delta(laplace3, k_o=1.0) == pytest.approx(0.5, rel=1e-14)


def test_picard_delta_one_dimensional(line):
    assert picard_bound(line) == pytest.approx(np.sqrt(1.0 / 3.0), rel=1e-14)
    assert picard_delta(line, k_o=1.0) == pytest.approx(0.5 * np.sqrt(1.0 / 3.0), rel=1e-14)


@pytest.mark.parametrize("params", [
    Params(0.0, 1.0, 1.0, 3),
    Params(1.5, 0.5, 2.0, 2),
    Params(-0.6, 1.0, 3.0, 4),
])
def test_picard_delta_stays_below_bound(params):
    for regime in Regime:
        assert picard_delta(params, 1.0, regime) < picard_bound(params, regime)


def test_picard_delta_needs_nonzero_value(laplace3):
    with pytest.raises(ZeroValueAtCritical):
        picard_delta(laplace3, k_o=0.0)


def test_apply_T_on_constant_three_dimensional(laplace3):
    prob = LocalProblem(0.0, 1.0, Regime.EQ2, Side.RIGHT, 0.5)
    grid = prob.grid(257)
    image = apply_T(np.ones(257), prob, laplace3)
    np.testing.assert_allclose(image, 1.0 - grid ** 2 / 6.0, atol=1e-5)
    assert image[0] == 1.0


def test_apply_T_on_constant_one_dimensional(line):
    prob = LocalProblem(0.0, 1.0, Regime.EQ2, Side.RIGHT, 0.25)
    grid = prob.grid(129)
    image = apply_T(np.ones(129), prob, line)
    np.testing.assert_allclose(image, 1.0 - grid ** 2 / 2.0, atol=1e-12)


def test_apply_T_keeps_value_at_left_critical_point(pucci):
    prob = LocalProblem(2.0, 0.8, Regime.EQ3, Side.LEFT, 0.1)
    image = apply_T(np.full(65, 0.8), prob, pucci)
    assert image[0] == 0.8
    assert np.all(image[1:] < 0.8)


def test_apply_T_contracts_at_the_bound():
    rng = np.random.default_rng(11)
    for params, regime, k_o in ((Params(0.0, 1.0, 1.0, 3), Regime.EQ2, 1.0),
                                (Params(0.0, 1.0, 2.0, 3), Regime.EQ4, -1.0)):
        delta = picard_bound(params, regime)
        prob = LocalProblem(0.0, k_o, regime, Side.RIGHT, delta)
        for _ in range(20):
            u = k_o + 0.5 * abs(k_o) * rng.uniform(-1.0, 1.0, 257)
            v = k_o + 0.5 * abs(k_o) * rng.uniform(-1.0, 1.0, 257)
            change = np.max(np.abs(apply_T(u, prob, params) - apply_T(v, prob, params)))
            assert change <= (1.0 / 3.0 + 1e-3) * np.max(np.abs(u - v))


def test_solve_local_matches_sinc(laplace3, settings):
    prob = LocalProblem(0.0, 1.0, Regime.EQ2, Side.RIGHT, 0.5)
    solution = solve_local(prob, laplace3, settings=settings)

    assert solution.delta == 0.5
    assert solution.endpoint.r == pytest.approx(0.5)
    assert solution.endpoint.w == pytest.approx(np.sin(0.5) / 0.5, abs=2e-5)
    assert solution.sup_change < settings.picard_tol
    np.testing.assert_allclose(solution.k, np.sinc(solution.r / np.pi), atol=2e-5)


@pytest.mark.parametrize("params", [
    Params(0.0, 1.0, 1.0, 3),
    Params(1.0, 1.0, 2.0, 3),
    Params(-0.5, 0.5, 1.0, 2),
])
def test_solve_local_decreasing_and_concave_near_origin(params, settings):
    delta = min(picard_delta(params), initial_decay_radius(params))
    solution = solve_local(LocalProblem(0.0, 1.0, Regime.EQ2, Side.RIGHT, delta), params,
                           settings=settings)
    assert np.all(np.diff(solution.k) < 0)
    assert np.all(np.diff(solution.v) < 0)


def test_solve_local_mirror_when_symmetric(laplace3, settings):
    delta = picard_delta(laplace3)
    plus = solve_local(LocalProblem(0.0, 1.0, Regime.EQ2, Side.RIGHT, delta), laplace3,
                       settings=settings)
    minus = solve_local(LocalProblem(0.0, -1.0, Regime.EQ4, Side.RIGHT, delta), laplace3,
                        settings=settings)
    np.testing.assert_allclose(minus.k, -plus.k, atol=1e-14)
    np.testing.assert_allclose(minus.v, -plus.v, atol=1e-14)


def test_initial_flux_slope(laplace3, pucci):
    assert initial_flux_slope(laplace3) == pytest.approx(-1.0 / 3.0)
    assert initial_flux_slope(pucci, Regime.EQ4) == pytest.approx(1.0 / 6.0)


def test_select_regime():
    assert select_regime(1.0, Side.RIGHT) is Regime.EQ2
    assert select_regime(-0.7, 'right') is Regime.EQ4
    assert select_regime(0.3, Side.LEFT) is Regime.EQ3
    assert select_regime(-0.3, Side.LEFT) is Regime.EQ5
    with pytest.raises(ZeroValueAtCritical):
        select_regime(0.0, Side.RIGHT)


def test_local_problem_rejects_left_interval_through_origin():
    with pytest.raises(InvalidParameters):
        LocalProblem(0.1, 1.0, Regime.EQ3, Side.LEFT, 0.2)
    with pytest.raises(InvalidParameters):
        LocalProblem(0.0, 0.0, Regime.EQ2, Side.RIGHT, 0.2)


@pytest.mark.parametrize("params", [
    Params(0.0, 1.0, 2.0, 3),
    Params(1.0, 0.5, 2.0, 2),
    Params(-0.5, 1.0, 3.0, 4),
    Params(2.0, 1.0, 1.0, 1),
])
def test_accepted_solutions_contract(params, settings):
    for k_o, regime in ((1.0, Regime.EQ2), (-1.0, Regime.EQ4)):
        delta = picard_delta(params, k_o, regime)
        solution = solve_local(LocalProblem(0.0, k_o, regime, Side.RIGHT, delta), params,
                               settings=settings)
        assert solution.contraction <= 0.5
        assert solution.sup_change < settings.picard_tol


def test_apply_T_error_is_second_order(line):
    prob = LocalProblem(0.0, 1.0, Regime.EQ2, Side.RIGHT, 0.5)
    errors = []
    for samples in (33, 65, 129):
        grid = prob.grid(samples)
        image = apply_T(1.0 + grid, prob, line)
        exact = 1.0 - grid ** 2 / 2.0 - grid ** 3 / 6.0
        errors.append(np.max(np.abs(image - exact)))

    assert errors[0] == pytest.approx(0.5 * (0.5 / 32) ** 2 / 12.0, rel=1e-6)
    for coarse, fine in zip(errors, errors[1:]):
        assert coarse / fine == pytest.approx(4.0, rel=1e-3)
