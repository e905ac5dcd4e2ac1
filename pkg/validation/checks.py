"""
Validation Checks Module
Numerical encodings of the inequalities between half-eigenvalues: interlacing,
gap ratios, first-eigenvalue bounds, domain monotonicity, continuity in the
parameters and growth of mu_k.
"""

from dataclasses import dataclass, field
from functools import wraps

import numpy as np

from oracles.rayleigh import parabola_bound, rayleigh_lambda_eq
from shooting.trajectory import audit_trajectory
from spectrum.annulus import AnnulusProblem, annulus_first_eigenvalue
from spectrum.ball import eigenvalues_ball
from spectrum.spectrum_report import fit_growth
from utils.config import Config, SolverSettings
from utils.errors import HalfSpecError, InvalidParameters
from utils.helpers import digest_inputs
from utils.logger import setup_logger

logger = setup_logger(__name__)

PASS = 'pass'
FAIL = 'fail'
INCONCLUSIVE = 'inconclusive'

GROWTH_MIN_COUNT = 32
GROWTH_ALLOWANCE = 1.02
CONTINUITY_FRACTION = 1e-2
SIGNS = (1, -1)


@dataclass
class CheckRecord:
    """One evaluated inequality: margin >= 0 means the inequality holds."""

    name: str
    params: dict
    margin: float
    tol: float
    status: str
    digest: str
    detail: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.status == PASS

    def as_dict(self):
        return {
            'name': self.name,
            'params': self.params,
            'margin': self.margin,
            'tol': self.tol,
            'status': self.status,
            'digest': self.digest,
            'detail': self.detail,
        }


def _record(name, params, margin, tol, status, inputs=None, detail=None):
    payload = {'check': name, 'params': params.as_dict(), 'inputs': inputs or {}}
    return CheckRecord(
        name=name,
        params=params.as_dict(),
        margin=float(margin),
        tol=float(tol),
        status=status,
        digest=digest_inputs(payload),
        detail=detail or {},
    )


def strict_record(name, params, margin, scale, oracle_error=0.0, inputs=None, detail=None):
    """
    Record for `margin > 0`.

    Margins within the tolerance band cannot certify strictness and are
    reported inconclusive.
    """
    tol = Config.STRICT_SLACK * max(1.0, abs(scale)) + abs(oracle_error)
    if margin > tol:
        status = PASS
    elif margin >= -tol:
        status = INCONCLUSIVE
    else:
        status = FAIL
    return _record(name, params, margin, tol, status, inputs, detail)


def non_strict_record(name, params, margin, scale, oracle_error=0.0, inputs=None, detail=None):
    """Record for `margin >= 0` up to the tolerance band."""
    tol = Config.STRICT_SLACK * max(1.0, abs(scale)) + abs(oracle_error)
    status = PASS if margin >= -tol else FAIL
    return _record(name, params, margin, tol, status, inputs, detail)


def failure_record(name, params, error):
    """A check whose computation raised; the message is kept in the detail."""
    detail = {'error': str(error), 'stage': getattr(error, 'stage', None)}
    return _record(name, params, 0.0, Config.STRICT_SLACK, FAIL, detail=detail)


def guarded(name):
    """Turn solver failures inside a check into a single failed record."""
    def decorator(func):
        @wraps(func)
        def wrapper(params, *args, **kwargs):
            try:
                return func(params, *args, **kwargs)
            except HalfSpecError as error:
                logger.error(f"Check '{name}' failed to compute: {error}")
                return [failure_record(name, params, error)]
        return wrapper
    return decorator


def _spectra(params, count, spectra, settings):
    if spectra is not None:
        plus, minus = spectra
        if plus.count >= count and minus.count >= count:
            return plus, minus
    settings = settings or SolverSettings.from_config()
    return (eigenvalues_ball(params, 1, count, settings),
            eigenvalues_ball(params, -1, count, settings))


@guarded('interlacing')
def check_interlacing(params, count=4, spectra=None, settings=None):
    """
    Check mu_k^- < mu_{k+1}^+ and mu_k^+ < mu_{k+1}^- for k < K.

    Args:
        params (Params): Problem parameters
        count (int): K >= 2
        spectra (tuple): Optional precomputed (plus, minus) spectra
        settings (SolverSettings): Tolerances

    Returns:
        list: CheckRecord per inequality
    """
    if int(count) != count or count < 2:
        raise InvalidParameters("interlacing needs K >= 2", stage="validation")
    count = int(count)
    plus, minus = _spectra(params, count, spectra, settings)
    mu_plus, mu_minus = plus.mus[:count], minus.mus[:count]

    records = []
    for k in range(1, count):
        records.append(strict_record(
            f'interlacing.minus_{k}_below_plus_{k + 1}', params,
            mu_plus[k] - mu_minus[k - 1], mu_plus[k], inputs={'k': k},
        ))
        records.append(strict_record(
            f'interlacing.plus_{k}_below_minus_{k + 1}', params,
            mu_minus[k] - mu_plus[k - 1], mu_minus[k], inputs={'k': k},
        ))
    return records


@guarded('gap')
def check_gap(params, spectra=None, settings=None):
    """
    Check mu_1^-/mu_1^+ >= mu_2^-/mu_2^+ and the ordering of the inner zero
    of the second eigenfunctions, beta_1^-/beta_2^- >= beta_1^+/beta_2^+.
    """
    plus, minus = _spectra(params, 2, spectra, settings)

    first_ratio = minus.mus[0] / plus.mus[0]
    second_ratio = minus.mus[1] / plus.mus[1]
    inner_minus = minus.betas[0] / minus.betas[1]
    inner_plus = plus.betas[0] / plus.betas[1]

    return [
        non_strict_record(
            'gap.ratio', params, first_ratio - second_ratio, first_ratio,
            detail={'first_ratio': float(first_ratio), 'second_ratio': float(second_ratio)},
        ),
        non_strict_record(
            'gap.inner_zero', params, inner_minus - inner_plus, 1.0,
            detail={'inner_minus': float(inner_minus), 'inner_plus': float(inner_plus)},
        ),
    ]


@guarded('first_bounds')
def check_first_bounds(params, spectra=None, settings=None, cells=None):
    """
    Check mu_1^+ <= a lambda_eq < A lambda_eq <= mu_1^- against the Rayleigh oracle.

    The oracle's mesh difference is folded into the tolerance.
    """
    plus, minus = _spectra(params, 1, spectra, settings)
    kwargs = {'cells': cells} if cells else {}
    oracle = rayleigh_lambda_eq(params.alpha, params.dim, **kwargs)
    lam_eq = oracle.value
    oracle_error = abs(oracle.details['coarse'] - oracle.details['upper_bound'])

    mu_plus, mu_minus = float(plus.mus[0]), float(minus.mus[0])
    detail = {'lambda_eq': lam_eq, 'oracle_error': oracle_error,
              'mu_plus': mu_plus, 'mu_minus': mu_minus}

    return [
        non_strict_record(
            'first_bounds.plus_below_a_lambda_eq', params,
            params.a * lam_eq - mu_plus, mu_plus, params.a * oracle_error, detail=detail,
        ),
        strict_record(
            'first_bounds.a_below_A', params,
            (params.A - params.a) * lam_eq, params.A * lam_eq, detail=detail,
        ),
        non_strict_record(
            'first_bounds.A_lambda_eq_below_minus', params,
            mu_minus - params.A * lam_eq, mu_minus, params.A * oracle_error, detail=detail,
        ),
    ]


@guarded('domain_monotonicity')
def check_domain_monotonicity(params, rhos, settings=None):
    """
    Check that the annulus eigenvalues lambda^+- grow strictly with the inner radius.

    Args:
        params (Params): Problem parameters
        rhos (list): Strictly increasing inner radii in (0, 1)
        settings (SolverSettings): Tolerances

    Returns:
        list: CheckRecord per consecutive pair and sign
    """
    rhos = [float(rho) for rho in rhos]
    if any(later <= earlier for earlier, later in zip(rhos, rhos[1:])):
        raise InvalidParameters("inner radii must be strictly increasing", stage="validation")
    if len(rhos) < 2:
        return [non_strict_record('domain_monotonicity.vacuous', params, 0.0, 1.0,
                                  inputs={'rhos': rhos})]

    settings = settings or SolverSettings.from_config()
    records = []
    for sign in SIGNS:
        label = 'plus' if sign > 0 else 'minus'
        lams = [annulus_first_eigenvalue(AnnulusProblem(rho, params, sign), settings) for rho in rhos]
        for (rho_in, lam_in), (rho_out, lam_out) in zip(zip(rhos, lams), zip(rhos[1:], lams[1:])):
            records.append(strict_record(
                f'domain_monotonicity.{label}', params, lam_out - lam_in, lam_out,
                inputs={'rhos': [rho_in, rho_out]},
                detail={'lambda_inner': lam_in, 'lambda_outer': lam_out},
            ))
    return records


@guarded('annulus_bound')
def check_annulus_bound(params, rho, settings=None, cells=None):
    """
    Check lambda^+ <= a lambda_eq <= a (parabola bound) and A lambda_eq <= lambda^-
    on the annulus rho < r < 1.
    """
    settings = settings or SolverSettings.from_config()
    kwargs = {'cells': cells} if cells else {}
    oracle = rayleigh_lambda_eq(params.alpha, params.dim, domain=(rho, 1.0), **kwargs)
    bound = parabola_bound(params.alpha, params.dim, rho, 1.0).value
    lam_eq = oracle.value
    oracle_error = abs(oracle.details['coarse'] - oracle.details['upper_bound'])

    lam_plus = annulus_first_eigenvalue(AnnulusProblem(rho, params, 1), settings)
    lam_minus = annulus_first_eigenvalue(AnnulusProblem(rho, params, -1), settings)
    inputs = {'rho': float(rho)}
    detail = {'lambda_eq': lam_eq, 'parabola_bound': bound,
              'lambda_plus': lam_plus, 'lambda_minus': lam_minus}

    return [
        non_strict_record(
            'annulus_bound.plus_below_a_lambda_eq', params,
            params.a * lam_eq - lam_plus, lam_plus, params.a * oracle_error, inputs, detail,
        ),
        non_strict_record(
            'annulus_bound.lambda_eq_below_parabola', params,
            bound - lam_eq, bound, oracle_error, inputs, detail,
        ),
        non_strict_record(
            'annulus_bound.A_lambda_eq_below_minus', params,
            lam_minus - params.A * lam_eq, lam_minus, params.A * oracle_error, inputs, detail,
        ),
    ]


def _perturbation(center, perturb, step):
    if perturb == 'alpha':
        return center.perturbed(alpha_shift=step)
    if perturb == 'a':
        shift = step if center.a + step <= center.A else -step
        return center.perturbed(a_shift=shift)
    raise InvalidParameters(f"unknown perturbation '{perturb}', expected 'alpha' or 'a'", stage="validation")


@guarded('continuity')
def continuity_sweep(center, k=1, steps=(1e-1, 1e-2, 1e-3), perturb='alpha', settings=None):
    """
    Follow mu_k^+- along shrinking perturbations of alpha or a.

    Deviations from the center value must decrease along the steps and the
    last one must fall below a fraction of mu_k.

    Args:
        center (Params): Unperturbed parameters
        k (int): Eigenvalue index
        steps (tuple): Strictly decreasing perturbation sizes >= 0
        perturb (str): 'alpha' or 'a' (a moves down when a + h would exceed A)
        settings (SolverSettings): Tolerances

    Returns:
        list: CheckRecord per consecutive step pair and sign, plus the final smallness check
    """
    steps = [float(step) for step in steps]
    if not steps or any(step < 0 for step in steps):
        raise InvalidParameters("perturbation sizes must be non-negative", stage="validation")
    if any(later >= earlier for earlier, later in zip(steps, steps[1:])):
        raise InvalidParameters("perturbation sizes must be strictly decreasing", stage="validation")
    if int(k) != k or k < 1:
        raise InvalidParameters("k must be a positive integer", stage="validation")

    settings = settings or SolverSettings.from_config()
    k = int(k)
    records = []
    for sign in SIGNS:
        label = 'plus' if sign > 0 else 'minus'
        reference = eigenvalues_ball(center, sign, k, settings).mus[k - 1]
        deviations = []
        for step in steps:
            moved = _perturbation(center, perturb, step)
            value = eigenvalues_ball(moved, sign, k, settings).mus[k - 1]
            deviations.append(abs(value - reference))
            logger.debug(f"Continuity {label} k={k} {perturb}+{step:g}: deviation {deviations[-1]:.3e}")

        for (step, dev), (next_step, next_dev) in zip(zip(steps, deviations), zip(steps[1:], deviations[1:])):
            records.append(strict_record(
                f'continuity.{perturb}.{label}.decay', center, dev - next_dev, reference,
                inputs={'k': k, 'steps': [step, next_step]},
                detail={'deviation': dev, 'next_deviation': next_dev},
            ))
        records.append(strict_record(
            f'continuity.{perturb}.{label}.small', center,
            CONTINUITY_FRACTION * reference - deviations[-1], reference,
            inputs={'k': k, 'step': steps[-1]},
            detail={'deviation': deviations[-1], 'mu': float(reference)},
        ))
    return records


def check_growth(spectrum):
    """
    Check the fitted growth exponent of mu_k against (2 + alpha) with a 2% allowance.

    Only the upper side is asserted; the relative deviation from 2 + alpha
    is reported in the detail.

    Args:
        spectrum (Spectrum): Spectrum with at least 32 eigenvalues

    Returns:
        CheckRecord: Growth record of this sign
    """
    params = spectrum.params
    if spectrum.count < GROWTH_MIN_COUNT:
        raise InvalidParameters(f"growth check needs K >= {GROWTH_MIN_COUNT}", stage="validation")

    fit = fit_growth(spectrum.mus)
    target = 2.0 + params.alpha
    detail = dict(fit)
    detail['relative_to_target'] = fit['exponent'] / target - 1.0
    return non_strict_record(
        f'growth.{spectrum.sign_label}', params,
        GROWTH_ALLOWANCE * target - fit['exponent'], target,
        inputs={'count': spectrum.count}, detail=detail,
    )


def check_trajectories(spectra, stitch_tol=None):
    """Alternation audit of the computed eigenfunction trajectories."""
    stitch_tol = stitch_tol or Config.STITCH_TOL
    records = []
    for spectrum in spectra:
        problems = audit_trajectory(spectrum.trajectory, stitch_tol)
        records.append(non_strict_record(
            f'trajectory_audit.{spectrum.sign_label}', spectrum.params,
            -float(len(problems)), 1.0,
            detail={'problems': problems[:10], 'zeros': int(len(spectrum.trajectory.zeros))},
        ))
    return records


def statuses(records):
    """Count records by status."""
    counts = {PASS: 0, FAIL: 0, INCONCLUSIVE: 0}
    for record in records:
        counts[record.status] += 1
    return counts


def all_finite(records):
    return all(np.isfinite(record.margin) and record.tol > 0 for record in records)
