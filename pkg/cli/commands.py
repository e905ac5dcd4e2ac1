"""
Commands Module
One function per command-line command. Each takes a validated RunConfig,
runs the computation and writes its output.
"""

from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import asdict, replace

import numpy as np
import pandas as pd

from oracles.bessel import bessel_mu
from oracles.energy import pseudo_plap_spacing
from oracles.fd_pucci import fd_pucci_mu1
from oracles.rayleigh import rayleigh_lambda_eq
from radial_operator.params import Params
from shooting.shooting_controller import solve_w
from spectrum.annulus import AnnulusProblem, solve_annulus
from spectrum.ball import eigenvalues_ball
from spectrum.spectrum_report import spectrum_report
from utils.errors import HalfSpecError, NumericalFailure
from utils.helpers import get_current_timestamp
from utils.logger import log_pipeline_step, setup_logger
from validation.validation_controller import DEFAULT_CHECKS, DEFAULT_RHOS, run_validation
from . import writers
from .sweep_journal import SweepJournal, node_key

logger = setup_logger(__name__)

SIGN_LABELS = {1: 'plus', -1: 'minus'}


def cmd_solve_w(config):
    """
    Solve w+ and/or w- and write the sampled solution with its event table.

    CSV output puts the samples in `out` and the events in `<out>.events.csv`.

    Returns:
        dict: Zeros found per sign
    """
    start_time = get_current_timestamp()
    params = config.params()
    settings = config.settings()
    zeros = None if config.r_max is not None else config.zeros

    samples, events, documents, summary = [], [], [], {}
    for sign in config.signs():
        label = SIGN_LABELS[sign]
        trajectory = solve_w(params, sign, zeros=zeros, r_max=config.r_max, settings=settings)
        sample_frame, event_frame = writers.trajectory_frames(trajectory)
        sample_frame.insert(0, 'sign', label)
        event_frame.insert(0, 'sign', label)
        samples.append(sample_frame)
        events.append(event_frame)
        documents.append({
            'sign': label,
            'samples': sample_frame.drop(columns='sign').to_dict(orient='list'),
            'events': event_frame.drop(columns='sign').to_dict(orient='records'),
            'switches': list(trajectory.switches),
        })
        summary[label] = trajectory.zeros.tolist()

    if config.output_format == 'csv':
        writers.write_table(pd.concat(samples, ignore_index=True), config.out)
        if config.out:
            writers.write_table(pd.concat(events, ignore_index=True),
                                writers.companion_path(config.out, 'events'))
    else:
        writers.write_json({'params': params.as_dict(), 'solutions': documents}, config.out)

    log_pipeline_step(logger, 'solve-w', start_time, get_current_timestamp(),
                      signs=",".join(summary), zeros=sum(len(z) for z in summary.values()))
    return summary


def cmd_spectrum(config):
    """
    Compute both half-spectra and write the {k, beta, mu} table with the report block.

    CSV output puts the report in `<out>.report.json`.

    Returns:
        dict: The spectrum report
    """
    start_time = get_current_timestamp()
    params = config.params()
    settings = config.settings()

    spectra = {label: eigenvalues_ball(params, sign, config.zeros, settings)
               for sign, label in SIGN_LABELS.items()}
    frame = writers.spectrum_frame(spectra)
    report = spectrum_report(spectra['plus'], spectra['minus'])

    if config.output_format == 'csv':
        writers.write_table(frame, config.out)
        if config.out:
            writers.write_json(report, writers.companion_path(config.out, 'report', '.json'))
    else:
        writers.write_json({'rows': frame.to_dict(orient='records'), 'report': report}, config.out)

    log_pipeline_step(logger, 'spectrum', start_time, get_current_timestamp(),
                      count=config.zeros, mu1_plus=f"{spectra['plus'].mus[0]:.12g}",
                      mu1_minus=f"{spectra['minus'].mus[0]:.12g}")
    return report


def cmd_annulus(config):
    """
    First half-eigenvalue(s) of the annulus rho < r < 1.

    Returns:
        list: One result row per sign
    """
    start_time = get_current_timestamp()
    params = config.params()
    settings = config.settings()

    rows = []
    for sign in config.signs():
        solution = solve_annulus(AnnulusProblem(config.rho, params, sign), settings)
        rows.append({
            'sign': SIGN_LABELS[sign],
            'rho': config.rho,
            'lambda': solution.lam,
            'bracket_low': solution.bracket[0],
            'bracket_high': solution.bracket[1],
            'evaluations': solution.evaluations,
        })

    if config.output_format == 'csv':
        writers.write_table(pd.DataFrame(rows), config.out)
    else:
        writers.write_json({'params': params.as_dict(), 'rho': config.rho, 'results': rows}, config.out)

    log_pipeline_step(logger, 'annulus', start_time, get_current_timestamp(), rho=config.rho,
                      results=", ".join(f"{row['sign']}={row['lambda']:.12g}" for row in rows))
    return rows


def sweep_node(node, settings):
    """
    mu_k^+ and mu_k^- at one grid node; runs in a worker process.

    Solver failures are returned in the row's `error` field.
    """
    row = dict(node)
    try:
        params = Params(node['alpha'], node['a'], node['A'], node['dim'])
        for sign, label in SIGN_LABELS.items():
            spectrum = eigenvalues_ball(params, sign, node['k'], settings)
            row[f'beta_{label}'] = float(spectrum.betas[-1])
            row[f'mu_{label}'] = float(spectrum.mus[-1])
        row['error'] = None
    except HalfSpecError as error:
        row['error'] = f"{error.stage}: {error}"
    return row


def _journal_path(config):
    if config.out:
        return writers.companion_path(config.out, 'journal', '.jsonl')
    return 'sweep.journal.jsonl'


def cmd_sweep(config):
    """
    Grid of mu_k^+- over (alpha, a), resumable through the node journal.

    Completed nodes are skipped on rerun; failed nodes are not journaled
    and are retried by the next run.

    Returns:
        pd.DataFrame: One row per grid node
    """
    start_time = get_current_timestamp()
    settings = config.settings()
    settings_digest = asdict(settings)
    journal = SweepJournal(_journal_path(config))

    nodes = []
    for alpha, a in config.grid():
        node = {'alpha': alpha, 'a': a, 'A': config.A, 'dim': config.dim, 'k': config.k}
        node['key'] = node_key(node, settings_digest)
        nodes.append(node)

    pending = [node for node in nodes if node['key'] not in journal]
    logger.info(f"Sweep: {len(nodes)} nodes, {len(nodes) - len(pending)} already journaled")

    failures = []

    def accept(row):
        if row['error']:
            failures.append(row)
            logger.error(f"Sweep node alpha={row['alpha']:g}, a={row['a']:g} failed: {row['error']}")
        else:
            journal.record(row['key'], row)
            logger.debug(f"Sweep node alpha={row['alpha']:g}, a={row['a']:g} done")

    if config.jobs > 1 and len(pending) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as executor:
            futures = [executor.submit(sweep_node, node, settings) for node in pending]
            for future in as_completed(futures):
                accept(future.result())
    else:
        for node in pending:
            accept(sweep_node(node, settings))

    frame = journal.frame(keys=[node['key'] for node in nodes])
    if failures:
        frame = pd.concat([frame, pd.DataFrame(failures)], ignore_index=True)
        frame = frame.sort_values(['alpha', 'a'], kind='mergesort').reset_index(drop=True)
    frame = frame.drop(columns=['key', 'error'], errors='ignore')

    if config.output_format == 'csv':
        writers.write_table(frame, config.out)
    else:
        writers.write_json({'rows': frame.to_dict(orient='records')}, config.out)

    log_pipeline_step(logger, 'sweep', start_time, get_current_timestamp(),
                      nodes=len(nodes), computed=len(pending) - len(failures), failed=len(failures))
    if failures:
        raise NumericalFailure(f"{len(failures)} sweep nodes failed; rerun to retry them", stage="sweep")
    return frame


def cmd_validate(config):
    """
    Run the validation checks and write the report.

    Returns:
        ValidationReport: Assembled report
    """
    params = config.params()
    selected = tuple(name.strip() for name in config.checks.split(',')) if config.checks else DEFAULT_CHECKS
    rhos = (config.rho,) if config.rho is not None else DEFAULT_RHOS

    report = run_validation(params, count=config.zeros, rhos=rhos, selected=selected,
                            settings=config.settings(), jobs=config.jobs)

    if config.output_format == 'csv':
        frame = pd.DataFrame([record.as_dict() for record in report.checks])
        writers.write_table(frame.drop(columns=['params', 'detail']), config.out)
    else:
        writers.write_json(report.as_dict(), config.out)

    failed = report.summary['fail']
    if failed:
        logger.error(f"Validation: {failed} checks failed")
    return report


def _compare_row(oracle, sign, k, solver_value, result):
    delta = solver_value - result.value
    return {
        'oracle': oracle,
        'method': result.method,
        'sign': SIGN_LABELS[sign],
        'k': k,
        'solver': solver_value,
        'oracle_value': result.value,
        'delta': delta,
        'relative_delta': abs(delta) / abs(result.value),
        'certified_error': result.certified_error,
    }


def cmd_oracle_compare(config):
    """
    Compare solver eigenvalues with every oracle that applies to the parameters.

    Bessel zeros and the Rayleigh quotient cover a = A (Bessel needs alpha = 0),
    the energy spacing covers N = 1 with a = A, and the finite-difference
    scheme covers alpha = 0 with a < A.

    Returns:
        pd.DataFrame: Solver-vs-oracle rows
    """
    start_time = get_current_timestamp()
    params = config.params()
    settings = config.settings()

    spectra = {sign: eigenvalues_ball(params, sign, config.zeros, settings) for sign in config.signs()}
    rows = []

    for sign, spectrum in spectra.items():
        if params.is_symmetric and params.alpha == 0:
            for k in range(1, spectrum.count + 1):
                reference = bessel_mu(params.dim, k)
                scaled = replace(reference, value=params.a * reference.value,
                                 certified_error=params.a * reference.certified_error)
                rows.append(_compare_row('bessel', sign, k, spectrum.mus[k - 1], scaled))

        if params.is_symmetric and params.oracle_mode:
            spacing = pseudo_plap_spacing(params.alpha, params.a)
            for k in range(1, spectrum.count + 1):
                beta = (k - 0.5) * spacing.value
                error = (2.0 + params.alpha) * beta ** (1.0 + params.alpha) * (k - 0.5) * spacing.certified_error
                reference = replace(spacing, value=beta ** (2.0 + params.alpha), certified_error=error,
                                    details={'spacing': spacing.value})
                rows.append(_compare_row('energy', sign, k, spectrum.mus[k - 1], reference))

        if params.is_symmetric:
            lam_eq = rayleigh_lambda_eq(params.alpha, params.dim)
            reference = replace(lam_eq, value=params.a * lam_eq.value)
            rows.append(_compare_row('rayleigh', sign, 1, spectrum.mus[0], reference))

        if params.alpha == 0 and not params.is_symmetric:
            reference = fd_pucci_mu1(params, sign, nodes=config.nodes)
            rows.append(_compare_row('fd-pucci', sign, 1, spectrum.mus[0], reference))

    frame = pd.DataFrame(rows)
    if frame.empty:
        logger.warning("No oracle applies to these parameters")

    if config.output_format == 'csv':
        writers.write_table(frame, config.out)
    else:
        writers.write_json({'params': params.as_dict(), 'rows': frame.to_dict(orient='records')}, config.out)

    worst = float(np.max(frame['relative_delta'])) if not frame.empty else 0.0
    log_pipeline_step(logger, 'oracle-compare', start_time, get_current_timestamp(),
                      rows=len(frame), worst_relative_delta=f"{worst:.3e}")
    return frame


COMMAND_HANDLERS = {
    'solve-w': cmd_solve_w,
    'spectrum': cmd_spectrum,
    'annulus': cmd_annulus,
    'sweep': cmd_sweep,
    'validate': cmd_validate,
    'oracle-compare': cmd_oracle_compare,
}
