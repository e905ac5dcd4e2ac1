import numpy as np
import pytest

from radial_operator.operator import (
    big_M, eval_operator, flux_to_slope, operator_range, residual, slope_to_flux, small_m,
)
from radial_operator.params import FluxState, Params, RegimeCoeffs, validate_params
from utils.errors import InvalidParameters, SingularSlope


@pytest.mark.parametrize("v, alpha, expected", [
    (0.5, 0.0, 0.5),
    (4.0, 1.0, 2.0),
    (0.5, -0.5, 0.25),
    (0.0, -0.5, 0.0),
])
def test_flux_to_slope(v, alpha, expected):
    assert flux_to_slope(v, alpha) == pytest.approx(expected, rel=1e-14, abs=1e-300)


@pytest.mark.parametrize("s, alpha, expected", [
    (2.0, 1.0, 4.0),
    (0.25, -0.5, 0.5),
    (-3.0, 0.0, -3.0),
])
def test_slope_to_flux(s, alpha, expected):
    assert slope_to_flux(s, alpha) == pytest.approx(expected, rel=1e-14)


def test_slope_to_flux_inverts_flux_to_slope():
    rng = np.random.default_rng(7)
    for alpha in (-0.9, -0.5, 0.0, 0.7, 3.0):
        slopes = rng.uniform(-5.0, 5.0, 200)
        recovered = flux_to_slope(slope_to_flux(slopes, alpha), alpha)
        np.testing.assert_allclose(recovered, slopes, rtol=1e-12, atol=1e-14)


def test_switching_functions():
    params = Params(0.0, 1.0, 2.0, 3)
    assert big_M(2.0, params) == 1.0
    assert big_M(-2.0, params) == -2.0
    assert big_M(0.0, params) == 0.0
    assert small_m(2.0, params) == 4.0
    assert small_m(-2.0, params) == -2.0
    assert small_m(0.0, params) == 0.0
    np.testing.assert_allclose(big_M(np.array([2.0, -2.0]), params), [1.0, -2.0])


def test_switching_functions_are_inverse_on_both_sides(pucci):
    x = np.linspace(-3.0, 3.0, 61)
    np.testing.assert_allclose(big_M(small_m(x, pucci), pucci), x, atol=1e-15)


@pytest.mark.parametrize("r, s, c, params, expected", [
    (1.0, -1.0, 1.0, Params(0.0, 1.0, 2.0, 2), 1.0),
    (1.0, 1.0, -1.0, Params(0.0, 1.0, 2.0, 2), 1.0),
    (2.0, -1.0, -1.0, Params(0.0, 1.0, 1.0, 3), -2.0),
])
def test_eval_operator_sign_cases(r, s, c, params, expected):
    assert eval_operator(r, s, c, params) == pytest.approx(expected)


def test_eval_operator_rejects_zero_slope_for_negative_alpha():
    with pytest.raises(SingularSlope):
        eval_operator(1.0, 0.0, 1.0, Params(-0.5, 1.0, 1.0, 3))


def test_eval_operator_rejects_non_positive_radius(laplace3):
    with pytest.raises(InvalidParameters):
        eval_operator(0.0, 1.0, 1.0, laplace3)


def test_operator_homogeneity_on_sign_consistent_samples():
    rng = np.random.default_rng(3)
    params = Params(0.6, 1.0, 2.5, 3)
    for _ in range(200):
        r = rng.uniform(0.1, 3.0)
        s, c = rng.uniform(-2.0, 2.0, 2)
        t = rng.uniform(0.1, 3.0)
        base = eval_operator(r, s, c, params)
        scaled = eval_operator(r, t * s, t * c, params)
        assert scaled == pytest.approx(t ** (params.alpha + 1.0) * base, rel=1e-12, abs=1e-12)


def test_operator_range_covers_multivalued_points():
    params = Params(0.0, 1.0, 2.0, 2)
    low, high = operator_range(1.0, 0.0, 1.0, params)
    assert low == high == 2.0
    low, high = operator_range(1.0, 1.0, 0.0, params)
    assert low == high == 2.0
    low, high = operator_range(1.0, 0.0, 0.0, params)
    assert low == high == 0.0


def test_residual_vanishes_on_sinc(laplace3):
    r = 1.0
    w = np.sin(r) / r
    slope = np.cos(r) / r - np.sin(r) / r ** 2
    curvature = -w - 2.0 * slope / r
    assert residual(FluxState(r, w, slope), curvature, 1.0, laplace3) == pytest.approx(0.0, abs=1e-14)


def test_residual_of_constant_state(laplace3):
    assert residual(FluxState(1.0, 1.0, 0.0), 0.0, 1.0, laplace3) == pytest.approx(1.0)


def test_regime_coefficients_follow_signs(pucci):
    assert RegimeCoeffs.from_signs(-1.0, -1.0, pucci) == RegimeCoeffs(1.0, 1.0)
    assert RegimeCoeffs.from_signs(1.0, 1.0, pucci) == RegimeCoeffs(2.0, 2.0)
    assert len(RegimeCoeffs.options(0.0, 0.0, pucci)) == 4


def test_params_validation_messages():
    is_valid, errors = validate_params(-2.0, 1.0, 1.0, 3)
    assert not is_valid
    assert "alpha must exceed -1" in errors

    is_valid, errors = validate_params(0.0, 2.0, 1.0, 0)
    assert "A must be at least a" in errors
    assert "dim must be an integer >= 1" in errors

    with pytest.raises(InvalidParameters):
        Params(0.0, 0.0, 1.0, 3)


def test_params_weight_exponents(pucci):
    assert pucci.n_zero == 2.0
    assert pucci.n_plus == 4.0
    assert pucci.n_minus == 1.0
    assert pucci.p_prime == 2.0
    assert not pucci.is_symmetric
    assert not pucci.oracle_mode
    assert Params(1.0, 1.0, 1.0, 1).oracle_mode
