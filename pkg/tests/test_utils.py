import json
import logging

import numpy as np
import pytest

from utils.config import Config, SolverSettings, load_config_file
from utils.errors import (
    CriticalProximity, HalfSpecError, InputError, InvalidParameters, NumericalFailure,
)
from utils.helpers import digest_inputs, json_ready, parse_grid
from utils.logger import set_global_level, setup_logger


def test_default_settings_are_valid():
    is_valid, problems = Config.validate_settings()
    assert is_valid, problems
    assert Config.solver_settings()['picard_samples'] == Config.PICARD_SAMPLES


def test_overrides_skip_missing_values():
    settings = SolverSettings()
    assert settings.with_overrides(ode_rtol=None) is settings
    assert settings.with_overrides(ode_rtol=1e-8).ode_rtol == 1e-8


def test_config_file_keeps_case(tmp_path):
    path = tmp_path / 'run.env'
    path.write_text("a=1\nA=3\n--tol-ode=1e-9\n")
    assert load_config_file(str(path)) == {'a': '1', 'A': '3', 'tol_ode': '1e-9'}
    assert load_config_file(None) == {}


def test_config_file_missing(tmp_path):
    with pytest.raises(InputError) as excinfo:
        load_config_file(str(tmp_path / 'absent.env'))
    assert excinfo.value.stage == 'config'


@pytest.mark.parametrize("grid, expected", [
    ('0:1:0.25', [0.0, 0.25, 0.5, 0.75, 1.0]),
    ('0:0.3:0.1', [0.0, 0.1, 0.2, 0.30000000000000004]),
    ('2, 1,3', [1.0, 2.0, 3.0]),
    (1.5, [1.5]),
])
def test_parse_grid(grid, expected):
    assert parse_grid(grid) == pytest.approx(expected)


@pytest.mark.parametrize("grid", ['1:0:0.1', '0:1', '0:1:0', ','])
def test_parse_grid_rejects(grid):
    with pytest.raises(ValueError):
        parse_grid(grid)


def test_json_ready_converts_numpy_and_non_finite():
    payload = {
        'array': np.array([1.0, np.nan]),
        'int': np.int64(3),
        'flag': np.bool_(True),
        'nested': ({'x': np.float64(np.inf)},),
        'third': 1.0 / 3.0,
    }
    converted = json_ready(payload, digits=6)
    assert converted == {
        'array': [1.0, None],
        'int': 3,
        'flag': True,
        'nested': [{'x': None}],
        'third': 0.333333,
    }
    json.dumps(converted)


def test_json_ready_keeps_full_precision():
    value = 0.1 + 0.2
    assert json_ready(value) == value


def test_digest_is_stable_and_order_free():
    first = digest_inputs({'a': 1, 'b': [1.0, 2.0]})
    second = digest_inputs({'b': [1.0, 2.0], 'a': 1})
    assert first == second
    assert len(first) == 12
    assert digest_inputs({'a': 2, 'b': [1.0, 2.0]}) != first


def test_logger_is_configured_once():
    logger = setup_logger('halfspec.test_logger')
    again = setup_logger('halfspec.test_logger')
    assert logger is again
    assert len(logger.handlers) == 1

    set_global_level('debug')
    assert logger.level == logging.DEBUG
    set_global_level('error')
    assert logger.level == logging.ERROR
    set_global_level('info')


def test_error_hierarchy():
    assert issubclass(InvalidParameters, InputError)
    assert issubclass(InputError, ValueError)
    assert issubclass(NumericalFailure, RuntimeError)
    assert InvalidParameters("bad").stage == 'params'
    assert NumericalFailure("bad", stage='sweep').stage == 'sweep'

    error = CriticalProximity("close", state=(1.0, 0.5, 0.0))
    assert isinstance(error, HalfSpecError)
    assert error.state == (1.0, 0.5, 0.0)
