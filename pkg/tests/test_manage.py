import json
import logging
import math

import pytest
from click.testing import CliRunner

from conftest import write_config
from manage import cli
from services.output_service import CSV_HEADER, read_series_csv

SMALL_BOUNCER = """model = bouncer
z0 = 25
sigma = 1
points = 1024
t_end = 0.05
samples = 120
window = 5
"""

SMALL_RING = """model = ring
R = 50
Delta = 50
sigma_m = 3
angular_points = 512
t_end = 0.05
samples = 150
"""


@pytest.fixture(autouse=True)
def restore_logging():
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


def invoke(*args):
    return CliRunner().invoke(cli, ['--log-level', 'WARNING', *args])


def test_validate_bundled_config():
    result = invoke('validate', 'bouncer_fig1')
    assert result.exit_code == 0
    assert 'bouncer_fig1: OK' in result.output


def test_validate_lists_problems(tmp_path):
    path = write_config(tmp_path, 'bad', "model = bouncer\nz0 = 100\nsigma = -1\nwindow = 4\n")
    result = invoke('validate', str(path))
    assert result.exit_code == 2
    assert 'sigma:' in result.output
    assert 'window:' in result.output


def test_validate_missing_file():
    result = invoke('validate', 'no_such_run')
    assert result.exit_code == 2


def test_schedule_of_ring():
    result = invoke('schedule', 'ring_fig2')
    assert result.exit_code == 0
    lines = result.output.splitlines()
    T_r = float(next(line for line in lines if line.startswith('T_r')).split('=')[1])
    assert 0.15 < T_r < 0.2
    labels = [line.split()[0] for line in lines if '/' in line.split()[0]]
    assert labels == ['1/4', '1/3', '1/2', '2/3', '3/4', '1/1']


def test_run_rejects_short_series(tmp_path):
    path = write_config(tmp_path, 'short', SMALL_BOUNCER.replace('samples = 120', 'samples = 50'))
    result = invoke('run', str(path), '--out', str(tmp_path / 'out'), '--no-plot')
    assert result.exit_code == 2
    assert not (tmp_path / 'out').exists()


def test_run_rejects_zero_threads(tmp_path):
    path = write_config(tmp_path, 'small', SMALL_BOUNCER)
    result = invoke('run', str(path), '--out', str(tmp_path / 'out'), '--threads', '0')
    assert result.exit_code == 2


def test_small_bouncer_run(tmp_path):
    path = write_config(tmp_path, 'small_bouncer', SMALL_BOUNCER)
    result = invoke('run', str(path), '--out', str(tmp_path / 'out'), '--no-plot', '--threads', '2')
    assert result.exit_code == 0, result.output

    run_dir = tmp_path / 'out' / 'small_bouncer'
    csv_path = run_dir / 'small_bouncer.csv'
    lines = csv_path.read_text(encoding='utf-8').splitlines()
    assert lines[0].startswith('# units:')
    assert lines[1].split(',') == CSV_HEADER

    rows = read_series_csv(csv_path)
    assert len(rows) == 120
    assert rows[0]['t'] == 0.0
    assert rows[0]['P'] == pytest.approx(1.0, abs=1e-3)
    assert all(row['var_p'] is not None for row in rows)
    for row in rows:
        assert row['N'] == pytest.approx(math.exp(2 * row['S']) / (2 * math.pi * math.e), rel=1e-12)
        assert row['P'] == pytest.approx(row['I'] * row['N'], rel=1e-12)

    report = json.loads((run_dir / 'small_bouncer_report.json').read_text(encoding='utf-8'))
    assert report['model'] == 'bouncer'
    assert report['time_scales']['T_r'] == pytest.approx(4 * 25 ** 2 / math.pi)
    assert report['sampling']['samples'] == 120
    assert report['sampling']['smoothing_width'] % 2 == 1
    assert report['bouncer']['basis']['weight'] == pytest.approx(1.0, abs=1e-6)
    assert report['bouncer']['uncertainty_chain']['all_hold'] is True
    assert not (run_dir / 'small_bouncer.svg').exists()


def test_results_do_not_depend_on_thread_count(tmp_path):
    path = write_config(tmp_path, 'threads', SMALL_BOUNCER)
    csv_files = []
    for label, threads in (('a', '1'), ('b', '4'), ('c', '4')):
        out = tmp_path / f'out_{label}'
        assert invoke('run', str(path), '--out', str(out), '--no-plot', '--threads', threads).exit_code == 0
        csv_files.append(out / 'threads' / 'threads.csv')
    assert csv_files[1].read_bytes() == csv_files[2].read_bytes()
    serial, parallel = read_series_csv(csv_files[0]), read_series_csv(csv_files[1])
    assert len(serial) == len(parallel)
    for a, b in zip(serial, parallel):
        assert a['t'] == b['t']
        assert a['P'] == pytest.approx(b['P'], rel=1e-12)


def test_small_ring_run_with_plot(tmp_path):
    path = write_config(tmp_path, 'small_ring', SMALL_RING)
    result = invoke('run', str(path), '--out', str(tmp_path / 'out'))
    assert result.exit_code == 0, result.output

    run_dir = tmp_path / 'out' / 'small_ring'
    rows = read_series_csv(run_dir / 'small_ring.csv')
    assert len(rows) == 150
    assert all(row['var_p'] is None for row in rows)

    report = json.loads((run_dir / 'small_ring_report.json').read_text(encoding='utf-8'))
    assert report['ring']['m0'] == 15
    assert report['sampling']['smoothing_width'] is None
    assert (run_dir / 'small_ring.svg').read_text(encoding='utf-8').lstrip().startswith('<?xml')


def test_gapless_ring_validates_with_a_warning(tmp_path):
    path = write_config(tmp_path, 'gapless', SMALL_RING.replace('Delta = 50', 'Delta = 0'))
    result = invoke('validate', str(path))
    assert result.exit_code == 0
    assert 'Delta: warning:' in result.output
    assert 'gapless: OK' in result.output


def test_gapless_ring_run_skips_revival_detection(tmp_path):
    path = write_config(tmp_path, 'gapless', SMALL_RING.replace('Delta = 50', 'Delta = 0'))
    result = invoke('run', str(path), '--out', str(tmp_path / 'out'), '--no-plot')
    assert result.exit_code == 0, result.output

    run_dir = tmp_path / 'out' / 'gapless'
    rows = read_series_csv(run_dir / 'gapless.csv')
    assert len(rows) == 150
    report = json.loads((run_dir / 'gapless_report.json').read_text(encoding='utf-8'))
    T_cl = report['time_scales']['T_cl']
    assert report['time_scales']['T_r'] is None
    assert report['sampling']['time_unit'] == 'T_cl'
    assert report['sampling']['t_end'] == pytest.approx(0.05 * T_cl)
    assert report['schedule'] == [] and report['minima'] == []
    assert report['ring']['spacing_comparison'] is None
