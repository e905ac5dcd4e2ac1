"""
Validation Controller
Runs the inequality checks for one parameter set and assembles a
machine-readable report.
"""

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

from spectrum.ball import eigenvalues_ball
from utils.config import Config, SolverSettings
from utils.errors import HalfSpecError, InvalidParameters
from utils.helpers import get_current_timestamp, get_current_timestamp_iso, json_ready
from utils.logger import log_pipeline_step, setup_logger
from . import checks

logger = setup_logger(__name__)

DEFAULT_CHECKS = (
    'interlacing', 'gap', 'first_bounds', 'domain_monotonicity',
    'annulus_bound', 'continuity', 'growth', 'trajectory_audit',
)
DEFAULT_RHOS = (0.3, 0.5, 0.7)
DEFAULT_STEPS = (1e-1, 1e-2, 1e-3)


@dataclass
class ValidationReport:
    checks: list
    metadata: dict = field(default_factory=dict)

    @property
    def summary(self):
        return checks.statuses(self.checks)

    @property
    def ok(self):
        """No failed check (inconclusive entries are allowed)."""
        return self.summary[checks.FAIL] == 0

    def as_dict(self):
        return {
            'metadata': self.metadata,
            'summary': self.summary,
            'checks': [record.as_dict() for record in self.checks],
        }

    def to_json(self, digits=None):
        digits = digits or Config.JSON_DIGITS
        return json.dumps(json_ready(self.as_dict(), digits), indent=2)


def _tasks(params, selected, count, rhos, steps, continuity_k, spectra, settings):
    plus, minus = spectra
    tasks = {
        'interlacing': lambda: checks.check_interlacing(params, count, spectra, settings),
        'gap': lambda: checks.check_gap(params, spectra, settings),
        'first_bounds': lambda: checks.check_first_bounds(params, spectra, settings),
        'domain_monotonicity': lambda: checks.check_domain_monotonicity(params, rhos, settings),
        'annulus_bound': lambda: checks.check_annulus_bound(params, rhos[len(rhos) // 2], settings),
        'continuity': lambda: (
            checks.continuity_sweep(params, continuity_k, steps, 'alpha', settings)
            + checks.continuity_sweep(params, continuity_k, steps, 'a', settings)
        ),
        'growth': lambda: [checks.check_growth(plus), checks.check_growth(minus)],
        'trajectory_audit': lambda: checks.check_trajectories(spectra, settings.stitch_tol),
    }
    return [(name, tasks[name]) for name in selected]


def _run_task(name, params, task):
    try:
        return task()
    except HalfSpecError as error:
        logger.error(f"Check '{name}' failed to compute: {error}")
        return [checks.failure_record(name, params, error)]


def run_validation(params, count=4, rhos=DEFAULT_RHOS, steps=DEFAULT_STEPS, continuity_k=1,
                   selected=DEFAULT_CHECKS, settings=None, jobs=1):
    """
    Run the selected checks and build a ValidationReport.

    The plus and minus spectra are computed once and shared by the checks
    that only read them; each check runs independently and the report keeps
    the order of `selected`.

    Args:
        params (Params): Problem parameters
        count (int): K for the interlacing check
        rhos (tuple): Increasing annulus inner radii
        steps (tuple): Continuity perturbation sizes
        continuity_k (int): Eigenvalue index followed by the continuity sweep
        selected (tuple): Check names, a subset of DEFAULT_CHECKS
        settings (SolverSettings): Tolerances
        jobs (int): Worker threads; 1 runs the checks in sequence

    Returns:
        ValidationReport: Check records and metadata
    """
    unknown = [name for name in selected if name not in DEFAULT_CHECKS]
    if unknown:
        raise InvalidParameters(f"unknown checks: {', '.join(unknown)}", stage="validation")

    settings = settings or SolverSettings.from_config()
    start_time = get_current_timestamp()

    needed = max(int(count), 2)
    if 'growth' in selected:
        needed = max(needed, checks.GROWTH_MIN_COUNT)
    spectra = (eigenvalues_ball(params, 1, needed, settings),
               eigenvalues_ball(params, -1, needed, settings))

    tasks = _tasks(params, selected, count, tuple(rhos), tuple(steps), continuity_k, spectra, settings)
    if jobs and jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            futures = [executor.submit(_run_task, name, params, task) for name, task in tasks]
            results = [future.result() for future in futures]
    else:
        results = [_run_task(name, params, task) for name, task in tasks]

    records = [record for batch in results for record in batch]
    end_time = get_current_timestamp()

    report = ValidationReport(
        checks=records,
        metadata={
            'params': params.as_dict(),
            'count': int(count),
            'rhos': list(rhos),
            'steps': list(steps),
            'solver_settings': asdict(settings),
            'strict_slack': Config.STRICT_SLACK,
            'started_at': start_time.isoformat(),
            'finished_at': get_current_timestamp_iso(),
        },
    )
    log_pipeline_step(logger, 'validation', start_time, end_time, **report.summary)
    return report
