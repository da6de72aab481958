# FILE: app.py
# Logging setup, environment checks and the run pipeline factory.

import logging
import logging.config
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from config import AppConfig, ModelConfig
from services import output_service, plot_service, revival, simulation_service
from system_manager import system_manager

logger = logging.getLogger(__name__)


def logging_config(level: str | None = None) -> dict:
    return {
        'version': 1, 'disable_existing_loggers': False,
        'formatters': {'json': {'()': 'pythonjsonlogger.jsonlogger.JsonFormatter', 'format': '%(asctime)s %(name)s %(levelname)s %(message)s'}},
        'handlers': {'console': {'class': 'logging.StreamHandler', 'formatter': 'json', 'stream': sys.stdout}},
        'root': {'handlers': ['console'], 'level': (level or AppConfig.LOG_LEVEL).upper()},
    }


def configure_logging(level: str | None = None):
    logging.config.dictConfig(logging_config(level))


def validate_environment() -> list[str]:
    """Problems with the process settings; empty when the environment is usable."""
    problems = []
    threads = str(AppConfig.THREADS)
    if not threads.isdigit() or int(threads) < 1:
        problems.append(f"REVIVAL_THREADS must be a positive integer, got '{threads}'")
    if logging.getLevelName(AppConfig.LOG_LEVEL.upper()) == f"Level {AppConfig.LOG_LEVEL.upper()}":
        problems.append(f"LOG_LEVEL '{AppConfig.LOG_LEVEL}' is not a logging level")
    if not Path(AppConfig.CONFIG_DIR).is_dir():
        problems.append(f"REVIVAL_CONFIG_DIR '{AppConfig.CONFIG_DIR}' is not a directory")
    return problems


@dataclass
class RunResult:
    csv_path: Path
    report_path: Path
    plot_path: Path | None
    report: dict


class RevivalRunner:
    """Runs one validated config end to end: sampling, detection, matching, outputs."""

    def __init__(self, threads: int, output_dir: str | None = None, plot: bool = True):
        self.threads = threads
        self.output_dir = output_dir
        self.plot = plot

    def _smoothing(self, values: dict, model_run, dt: float) -> int | None:
        mode = values['smoothing']
        if mode == 'off' or (mode == 'auto' and not model_run.smooth_by_default):
            return None
        return revival.smoothing_width(model_run.T_cl, dt)

    def run(self, config: ModelConfig) -> RunResult:
        values = config.values
        model_run = system_manager.prepare(config)
        # Without a finite revival time the window is measured in classical periods.
        revives = math.isfinite(model_run.T_r)
        time_unit = 'T_r' if revives else 'T_cl'
        span = model_run.T_r if revives else model_run.T_cl

        times = simulation_service.sample_times(values['t_end'] * span, values['samples'])
        series = simulation_service.sample_series(model_run, times, self.threads)
        dt = float(times[1] - times[0])

        if revives:
            smooth = self._smoothing(values, model_run, dt)
            minima = revival.detect_minima(series, values['window'], smooth)
        else:
            logger.warning(f"Revival time is unbounded for '{values['name']}'; revival detection skipped.")
            smooth, minima = None, []
        revivals = revival.schedule(model_run.T_cl, model_run.T_r, values['q_max'])
        matches = revival.match_schedule(minima, revivals, values['tol'])
        logger.info(f"Detected {len(minima)} minima; matched {len(matches.matched_labels)} of {len(revivals.fractions)} fractions.")

        name = values['name']
        run_dir = Path(self.output_dir or values['output_dir']) / name
        report = {
            'name': name,
            'model': config.model,
            'parameters': {k: v for k, v in values.items() if k not in ('name', 'output_dir')},
            'time_scales': {'T_cl': model_run.T_cl, 'T_r': model_run.T_r},
            'sampling': {'t_end': float(times[-1]), 'time_unit': time_unit, 'samples': len(series), 'dt': dt,
                         'window': values['window'], 'smoothing_width': smooth},
            'schedule': [{'label': f.label, 'p': f.p, 'q': f.q, 't': f.t} for f in revivals.fractions],
            'minima': [{'t': m.t, 'P': m.P, 'label': m.label} for m in matches.minima],
            'matched': sorted(matches.matched_labels),
            'unmatched': [f.label for f in matches.unmatched],
            'P_initial': series.samples[0].P,
            'P_min': float(series.products.min()),
            model_run.model_tag: model_run.diagnostics(series, minima),
        }

        csv_path = output_service.write_series_csv(run_dir / f"{name}.csv", series, model_run.units)
        report_path = output_service.write_report(run_dir / f"{name}_report.json", report)
        plot_path = None
        if self.plot and values['plot']:
            plot_path = plot_service.plot_product(run_dir / f"{name}.svg", series, revivals, minima, model_run.time_label)
        return RunResult(csv_path=csv_path, report_path=report_path, plot_path=plot_path, report=report)


def create_runner(config_object=AppConfig, threads: int | None = None, output_dir: str | None = None,
                  plot: bool = True) -> RevivalRunner:
    """
    Application factory pattern: creates and configures the run pipeline.
    """
    threads = threads if threads is not None else int(config_object.THREADS)
    runner = RevivalRunner(threads=max(threads, 1), output_dir=output_dir, plot=plot)
    logger.debug(f"Runner created with {runner.threads} thread(s), pid {os.getpid()}.")
    return runner
