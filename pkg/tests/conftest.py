"""
Shared fixtures for the test suite.
"""

import pytest

from radial_operator.params import Params
from utils.config import SolverSettings


@pytest.fixture
def laplace3():
    """Radial Laplacian in R^3: w+ = sin(r)/r."""
    return Params(alpha=0.0, a=1.0, A=1.0, dim=3)


@pytest.fixture
def laplace2():
    return Params(alpha=0.0, a=1.0, A=1.0, dim=2)


@pytest.fixture
def line():
    """One-dimensional harmonic oscillator."""
    return Params(alpha=0.0, a=1.0, A=1.0, dim=1)


@pytest.fixture
def pucci():
    return Params(alpha=0.0, a=1.0, A=2.0, dim=3)


@pytest.fixture
def settings():
    return SolverSettings()
