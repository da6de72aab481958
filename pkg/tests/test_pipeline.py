import numpy as np
import pytest

from app import create_runner
from config import load_config
from services.output_service import read_series_csv
from services.revival import period_verdict

pytestmark = pytest.mark.slow


@pytest.fixture(scope='module')
def bouncer_run(tmp_path_factory):
    out = tmp_path_factory.mktemp('pipeline')
    result = create_runner(output_dir=str(out), plot=False).run(load_config('bouncer_fig1'))
    return result, read_series_csv(result.csv_path)


@pytest.fixture(scope='module')
def ring_run(tmp_path_factory):
    out = tmp_path_factory.mktemp('pipeline_ring')
    return create_runner(output_dir=str(out), plot=False).run(load_config('ring_fig2'))


def test_bouncer_starts_at_unity(bouncer_run):
    result, rows = bouncer_run
    assert 1.0 - 1e-6 <= rows[0]['P'] <= 1.02
    assert result.report['P_initial'] == rows[0]['P']


def test_bouncer_stays_above_isoperimetric_floor(bouncer_run):
    result, rows = bouncer_run
    assert len(rows) == 2000
    assert min(row['P'] for row in rows) >= 0.999


def test_bouncer_uncertainty_chain(bouncer_run):
    chain = bouncer_run[0].report['bouncer']['uncertainty_chain']
    assert chain['probes'] == 20
    assert chain['all_hold']
    assert chain['min_stam_margin'] >= -1e-3
    assert chain['min_power_entropy_margin'] >= -1e-3
    assert chain['min_heisenberg_margin'] >= -1e-3


def test_bouncer_minima_sit_on_fractional_revivals(bouncer_run):
    report = bouncer_run[0].report
    T_r = report['time_scales']['T_r']
    times = np.array([m['t'] for m in report['minima']])
    for q in (2, 3, 4):
        assert np.min(np.abs(times - T_r / q)) <= 0.02 * T_r, f"no minimum near T_r/{q}"
    assert len(report['matched']) >= 4


def test_bouncer_reports_full_revival(bouncer_run):
    result, rows = bouncer_run
    report = result.report
    T_r = report['time_scales']['T_r']
    assert report['bouncer']['fidelity']['classical_period'] > 0.9

    summary = report['bouncer']['full_revival']
    nearest = min(report['minima'], key=lambda m: abs(m['t'] - T_r))
    assert summary['t_nearest_minimum'] == nearest['t']
    assert abs(nearest['t'] - T_r) <= 0.02 * T_r
    ratio = nearest['P'] / rows[0]['P']
    assert summary['P_near_revival_over_P0'] == pytest.approx(ratio, rel=1e-12)
    assert summary['product_recovered'] == (abs(ratio - 1.0) <= 0.15)
    assert summary['fidelity'] == report['bouncer']['fidelity']['full_revival']
    assert summary['fidelity_holds'] == (summary['fidelity'] > 0.9)


def test_bouncer_runs_are_byte_identical(bouncer_run, tmp_path):
    result, _ = bouncer_run
    again = create_runner(output_dir=str(tmp_path), plot=False).run(load_config('bouncer_fig1'))
    assert again.csv_path.read_bytes() == result.csv_path.read_bytes()


def test_bouncer_diagnostics_are_consistent(bouncer_run):
    report = bouncer_run[0].report['bouncer']
    assert report['basis']['weight'] == pytest.approx(1.0, abs=1e-4)
    assert report['energy']['quadrature_t0'] == pytest.approx(report['energy']['spectral'], rel=1e-4)
    assert report['dispersion_revival_time'] == pytest.approx(bouncer_run[0].report['time_scales']['T_r'], rel=0.02)
    for entry in report['entropic_uncertainty']:
        assert entry['margin'] >= -1e-6


def test_ring_reports_revival_spacing(ring_run):
    report = ring_run.report
    ring = report['ring']
    assert ring['m0'] == 15
    assert ring['T_r_half'] == pytest.approx(0.5 * report['time_scales']['T_r'])
    assert len(report['minima']) >= 2
    assert ring['dominant_spacing'] > 0
    comparison = ring['spacing_comparison']
    assert comparison['verdict'] == period_verdict(ring['dominant_spacing'], report['time_scales']['T_r'])
    # The cubic term of the dispersion dominates at these parameters; see DESIGN.md.
    assert comparison['verdict'] == 'neither'
    assert comparison['spacing_over_T_r_half'] < 0.9
