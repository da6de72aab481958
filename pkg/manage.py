# FILE: manage.py
# Command-line interface: run a config, validate it, or print its revival schedule.

import logging
import sys

import click

from app import configure_logging, create_runner, validate_environment
from config import ModelConfig, errors_in, load_config, resolve_config_path, validate
from errors import ConfigError, RevivalLabError
from services import revival
from system_manager import system_manager

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2


@click.group()
@click.option('--log-level', default=None, help="Overrides LOG_LEVEL for this invocation.")
def cli(log_level):
    """Wavepacket revival simulations driven by run files."""
    configure_logging(log_level)


def _fail(error: RevivalLabError):
    click.echo(f"Error: {error}", err=True)
    sys.exit(error.exit_code)


@cli.command('run')
@click.argument('config_name')
@click.option('--out', 'output_dir', default=None, help="Output directory (overrides the config).")
@click.option('--threads', type=int, default=None, help="Worker threads for time sampling.")
@click.option('--no-plot', is_flag=True, help="Skip the SVG figure.")
def run_command(config_name, output_dir, threads, no_plot):
    """Runs CONFIG_NAME (a path or a bundled name) and writes its outputs."""
    problems = validate_environment()
    if problems:
        _fail(ConfigError("; ".join(problems), key='environment'))
    if threads is not None and threads < 1:
        _fail(ConfigError(f"--threads must be at least 1, got {threads}", key='threads'))
    try:
        config = load_config(config_name)
        result = create_runner(threads=threads, output_dir=output_dir, plot=not no_plot).run(config)
    except RevivalLabError as e:
        logger.error(f"Run '{config_name}' failed: {e}")
        _fail(e)
    except Exception:
        logger.exception(f"Unexpected failure while running '{config_name}'.")
        raise
    click.echo(f"Wrote {result.csv_path}")
    click.echo(f"Wrote {result.report_path}")
    if result.plot_path is not None:
        click.echo(f"Wrote {result.plot_path}")


@cli.command('validate')
@click.argument('config_name')
def validate_command(config_name):
    """Lists every problem in CONFIG_NAME; exits 0 when it would run, warnings included."""
    try:
        config = ModelConfig.from_file(resolve_config_path(config_name))
    except ConfigError as e:
        _fail(e)
    diagnostics = validate(config)
    for diagnostic in diagnostics:
        click.echo(str(diagnostic))
    if errors_in(diagnostics):
        sys.exit(EXIT_CONFIG)
    click.echo(f"{config.name}: OK")


@cli.command('schedule')
@click.argument('config_name')
def schedule_command(config_name):
    """Prints the fractional-revival table of CONFIG_NAME."""
    try:
        config = load_config(config_name)
        T_cl, T_r = system_manager.time_scales(config)
        table = revival.schedule(T_cl, T_r, config['q_max'])
    except RevivalLabError as e:
        _fail(e)
    click.echo(f"T_cl = {table.T_cl:.10g}")
    click.echo(f"T_r  = {table.T_r:.10g}")
    for fraction in table.fractions:
        click.echo(f"{fraction.label:>6}  {fraction.t:.10g}")


if __name__ == '__main__':
    cli()
