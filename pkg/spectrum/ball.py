"""
Ball Spectrum Module
Half-eigenvalues of the unit ball read off the zeros of w+ and w-, and the
eigenfunctions u_k(r) = w(beta_k r).
"""

from dataclasses import dataclass

import numpy as np

from shooting.shooting_controller import parse_sign, solve_w
from utils.config import Config, SolverSettings
from utils.errors import IndexOutOfRange, InvalidParameters
from utils.logger import setup_logger

logger = setup_logger(__name__)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """First K half-eigenvalues of one sign on the unit ball."""

    params: object
    sign: int
    betas: np.ndarray
    mus: np.ndarray
    trajectory: object

    @property
    def count(self):
        return len(self.betas)

    @property
    def sign_label(self):
        return "plus" if self.sign > 0 else "minus"

    def gaps(self):
        """Consecutive differences mu_{k+1} - mu_k."""
        return np.diff(self.mus)


def validate_zero_count(count):
    """
    Check a requested eigenvalue count.

    Returns:
        tuple: (is_valid: bool, errors: list)
    """
    errors = []
    if count is None or int(count) != count:
        errors.append("zero count must be an integer")
    elif count < 1:
        errors.append("zero count must be at least 1")
    elif count > Config.MAX_ZEROS:
        errors.append(f"zero count must not exceed {Config.MAX_ZEROS}")
    return len(errors) == 0, errors


def eigenvalues_ball(params, sign, count, settings=None):
    """
    Compute mu_1..mu_K of one sign on the unit ball.

    Args:
        params (Params): Problem parameters
        sign: '+'/'plus'/1 or '-'/'minus'/-1
        count (int): Number of eigenvalues K
        settings (SolverSettings): Tolerances

    Returns:
        Spectrum: betas (zeros of w) and mus = betas^{2+alpha}
    """
    is_valid, errors = validate_zero_count(count)
    if not is_valid:
        raise InvalidParameters("; ".join(errors), stage="spectrum")

    settings = settings or SolverSettings.from_config()
    sign = parse_sign(sign)
    trajectory = solve_w(params, sign, zeros=int(count), settings=settings)

    betas = trajectory.zeros[:int(count)]
    mus = betas ** (2.0 + params.alpha)
    logger.debug(f"Ball spectrum ({'+' if sign > 0 else '-'}): mu_1={mus[0]:.12g}")
    return Spectrum(params=params, sign=sign, betas=betas, mus=mus, trajectory=trajectory)


def eigenfunction(spectrum, k, r):
    """
    Evaluate u_k(r) = w(beta_k r) on [0, 1].

    Args:
        spectrum (Spectrum): Computed spectrum
        k (int): Eigenvalue index, 1-based
        r (float or ndarray): Radii in [0, 1]

    Returns:
        float or ndarray: u_k(r), same shape as r
    """
    if int(k) != k or not 1 <= k <= spectrum.count:
        raise IndexOutOfRange(f"index k={k} outside 1..{spectrum.count}")

    radii = np.asarray(r, dtype=float)
    if np.any(radii < 0) or np.any(radii > 1):
        raise InvalidParameters("eigenfunction radius must lie in [0, 1]", stage="spectrum")

    w, _ = spectrum.trajectory.evaluate(spectrum.betas[int(k) - 1] * radii.ravel())
    values = w.reshape(radii.shape)
    return float(values) if values.ndim == 0 else values


def interior_zeros(spectrum, k):
    """Interior zeros beta_j / beta_k (j < k) of the k-th eigenfunction."""
    if int(k) != k or not 1 <= k <= spectrum.count:
        raise IndexOutOfRange(f"index k={k} outside 1..{spectrum.count}")
    return spectrum.betas[:int(k) - 1] / spectrum.betas[int(k) - 1]
