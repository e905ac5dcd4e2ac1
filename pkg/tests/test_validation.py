import json

import numpy as np
import pytest

from radial_operator.params import Params
from spectrum.ball import eigenvalues_ball
from utils.errors import InvalidParameters
from validation import checks
from validation.validation_controller import run_validation


def test_strict_record_statuses(laplace3):
    assert checks.strict_record('demo', laplace3, 1.0, 1.0).status == checks.PASS
    assert checks.strict_record('demo', laplace3, 0.0, 1.0).status == checks.INCONCLUSIVE
    assert checks.strict_record('demo', laplace3, -1.0, 1.0).status == checks.FAIL
    assert checks.non_strict_record('demo', laplace3, 0.0, 1.0).status == checks.PASS


def test_record_digest_depends_on_inputs(laplace3):
    first = checks.strict_record('demo', laplace3, 1.0, 1.0, inputs={'k': 1})
    second = checks.strict_record('demo', laplace3, 1.0, 1.0, inputs={'k': 2})
    assert first.digest != second.digest
    assert first.digest == checks.strict_record('demo', laplace3, 2.0, 1.0, inputs={'k': 1}).digest


def test_interlacing_holds_for_pucci(pucci):
    records = checks.check_interlacing(pucci, count=3)
    assert len(records) == 4
    assert all(record.passed for record in records)
    assert records[0].name == 'interlacing.minus_1_below_plus_2'


def test_interlacing_needs_two_eigenvalues(laplace3):
    records = checks.check_interlacing(laplace3, count=1)
    assert len(records) == 1
    assert records[0].status == checks.FAIL
    assert records[0].detail['stage'] == 'validation'


def test_gap_for_pucci(pucci):
    records = checks.check_gap(pucci)
    assert [record.name for record in records] == ['gap.ratio', 'gap.inner_zero']
    assert all(record.passed for record in records)


def test_first_bounds_pucci(pucci):
    records = {record.name: record for record in checks.check_first_bounds(pucci, cells=50)}
    assert records['first_bounds.plus_below_a_lambda_eq'].passed
    assert records['first_bounds.a_below_A'].passed
    assert records['first_bounds.A_lambda_eq_below_minus'].passed


def test_first_bounds_symmetric_is_inconclusive_in_the_middle(laplace3):
    records = {record.name: record for record in checks.check_first_bounds(laplace3, cells=50)}
    assert records['first_bounds.a_below_A'].status == checks.INCONCLUSIVE
    assert records['first_bounds.plus_below_a_lambda_eq'].passed
    assert records['first_bounds.A_lambda_eq_below_minus'].passed


def test_domain_monotonicity_on_intervals(line):
    records = checks.check_domain_monotonicity(line, (0.3, 0.5))
    assert [record.name for record in records] == [
        'domain_monotonicity.plus', 'domain_monotonicity.minus',
    ]
    assert all(record.passed for record in records)
    lam_outer = records[0].detail['lambda_outer']
    assert lam_outer == pytest.approx(4 * np.pi ** 2, rel=1e-6)


def test_domain_monotonicity_rejects_unordered_radii(line):
    records = checks.check_domain_monotonicity(line, (0.5, 0.3))
    assert len(records) == 1
    assert records[0].status == checks.FAIL
    assert 'strictly increasing' in records[0].detail['error']


def test_domain_monotonicity_single_radius_is_vacuous(line):
    records = checks.check_domain_monotonicity(line, (0.5,))
    assert records[0].name == 'domain_monotonicity.vacuous'
    assert records[0].passed


def test_annulus_bound_on_an_interval(line):
    records = checks.check_annulus_bound(line, 0.5, cells=50)
    assert len(records) == 3
    assert all(record.passed for record in records)
    assert records[0].detail['parabola_bound'] == pytest.approx(40.0, rel=1e-10)


@pytest.mark.parametrize("perturb", ['alpha', 'a'])
def test_continuity_decays(laplace3, perturb):
    records = checks.continuity_sweep(laplace3, k=1, perturb=perturb)
    names = {record.name for record in records}
    assert f'continuity.{perturb}.plus.decay' in names
    assert f'continuity.{perturb}.minus.small' in names
    assert all(record.passed for record in records)


def test_continuity_rejects_growing_steps(laplace3):
    records = checks.continuity_sweep(laplace3, steps=(1e-3, 1e-2))
    assert records[0].status == checks.FAIL


def test_continuity_rejects_unknown_perturbation(laplace3):
    records = checks.continuity_sweep(laplace3, steps=(1e-2,), perturb='dim')
    assert records[0].status == checks.FAIL


def test_growth_needs_enough_eigenvalues(laplace3):
    with pytest.raises(InvalidParameters):
        checks.check_growth(eigenvalues_ball(laplace3, '+', 4))


@pytest.mark.slow
@pytest.mark.parametrize("params", [Params(0.0, 1.0, 2.0, 3), Params(1.0, 1.0, 1.0, 1)])
def test_growth_within_allowance(params):
    for sign in ('+', '-'):
        record = checks.check_growth(eigenvalues_ball(params, sign, 32))
        assert record.passed
        assert abs(record.detail['relative_to_target']) < 2e-2


def test_trajectory_audit_records(pucci):
    spectra = (eigenvalues_ball(pucci, '+', 3), eigenvalues_ball(pucci, '-', 3))
    records = checks.check_trajectories(spectra)
    assert [record.name for record in records] == ['trajectory_audit.plus', 'trajectory_audit.minus']
    assert all(record.passed for record in records)
    assert records[0].detail['zeros'] == 3


def test_run_validation_report(pucci):
    selected = ('interlacing', 'gap', 'trajectory_audit')
    report = run_validation(pucci, count=3, selected=selected)

    assert report.ok
    assert report.summary == {'pass': 8, 'fail': 0, 'inconclusive': 0}
    assert checks.all_finite(report.checks)

    document = json.loads(report.to_json())
    assert document['metadata']['params'] == {'alpha': 0.0, 'a': 1.0, 'A': 2.0, 'dim': 3}
    assert document['summary']['pass'] == 8
    assert len(document['checks']) == 8


def test_run_validation_threads_keep_order(pucci):
    selected = ('gap', 'interlacing')
    sequential = run_validation(pucci, count=2, selected=selected)
    threaded = run_validation(pucci, count=2, selected=selected, jobs=2)
    assert [record.name for record in threaded.checks] == [record.name for record in sequential.checks]
    assert [record.margin for record in threaded.checks] == [record.margin for record in sequential.checks]


def test_run_validation_rejects_unknown_checks(laplace3):
    with pytest.raises(InvalidParameters):
        run_validation(laplace3, selected=('interlacing', 'sorcery'))


@pytest.mark.slow
@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_continuity_at_pucci(pucci, k):
    records = (checks.continuity_sweep(pucci, k=k, perturb='alpha')
               + checks.continuity_sweep(pucci, k=k, perturb='a'))
    assert len(records) == 12
    assert all(record.passed for record in records)


@pytest.mark.slow
@pytest.mark.parametrize("params", [
    Params(0.0, 1.0, 2.0, 3),
    Params(1.0, 1.0, 2.0, 2),
    Params(-0.5, 1.0, 3.0, 3),
    Params(0.0, 1.0, 1.0, 3),
])
def test_inequality_panel_has_no_failures(params):
    selected = ('interlacing', 'gap', 'first_bounds', 'domain_monotonicity')
    report = run_validation(params, count=4, rhos=(0.3, 0.5, 0.7), selected=selected)
    assert report.summary['fail'] == 0, [r.name for r in report.checks if r.status == checks.FAIL]
    assert report.summary['pass'] > 0
