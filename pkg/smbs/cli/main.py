"""Main CLI entry point for smbs"""

import sys
from pathlib import Path
from typing import Callable, List

import click
from rich.console import Console
from rich.panel import Panel
from rich.table import Table
from rich import box

from smbs import __version__
from smbs.common.config import RunConfig
from smbs.common.errors import ConfigError, ModelError, ParameterError, PathError, exit_code
from smbs.common.logger import get_logger, setup_logger
from smbs.study.runner import run_fit, run_predict, run_simstudy, run_simulate, run_urn_trace

console = Console()
logger = get_logger(__name__)

MAX_SEED = 2 ** 64 - 1


def handle_error(e: Exception, command: str):
    """
    Handle and display errors nicely

    Args:
        e: Exception that occurred
        command: Command that failed
    """
    console.print()

    if isinstance(e, ConfigError):
        console.print(Panel(
            f"[red]✗ Invalid configuration[/red]\n\n{e}",
            title=f"Config Error: {command}",
            border_style="red"
        ))
    elif isinstance(e, PathError):
        console.print(Panel(
            f"[red]✗ Invalid path data[/red]\n\n{e}",
            title=f"Path Error: {command}",
            border_style="red"
        ))
    elif isinstance(e, ParameterError):
        console.print(Panel(
            f"[red]✗ Invalid prior parameters[/red]\n\n{e}",
            title=f"Parameter Error: {command}",
            border_style="red"
        ))
    elif isinstance(e, ModelError):
        console.print(Panel(
            f"[red]✗ Undefined under the model[/red]\n\n{e}\n\n"
            "[dim]Check that every centering distribution covers the holding "
            "times the data and simulations reach.[/dim]",
            title=f"Model Error: {command}",
            border_style="red"
        ))
    else:
        console.print(Panel(
            f"[red]✗ Unexpected error[/red]\n\n"
            f"{type(e).__name__}: {e}",
            title="Error",
            border_style="red"
        ))

    console.print()


def run_command(command: str, runner: Callable[[RunConfig, int, Path], List[Path]],
                config_path: str, seed: int, out: str):
    """Load the config, run one command and report what it wrote"""
    try:
        config = RunConfig.load_from_file(Path(config_path))
        out_dir = Path(out)
        with console.status(f"[yellow]Running {command}...[/yellow]"):
            written = runner(config, seed, out_dir)

        table = Table(title=f"smbs {command}", box=box.ROUNDED)
        table.add_column("Output", style="cyan")
        table.add_column("Size", justify="right", style="green")
        for path in written:
            table.add_row(str(path), f"{path.stat().st_size:,} B")
        console.print()
        console.print(table)
        console.print()

    except Exception as e:
        logger.debug(f"{command} failed", exc_info=True)
        handle_error(e, command)
        sys.exit(exit_code(e))


def common_options(f):
    """Options shared by every command"""
    f = click.option('--out', '-o', required=True, type=click.Path(file_okay=False),
                     help='Output directory')(f)
    f = click.option('--seed', '-s', required=True, type=click.IntRange(0, MAX_SEED),
                     help='Random seed (unsigned 64-bit)')(f)
    f = click.option('--config', '-c', 'config_path', required=True,
                     type=click.Path(dir_okay=False), help='YAML or JSON run configuration')(f)
    return f


@click.group()
@click.option('--verbose', '-v', is_flag=True, help='Verbose output')
@click.option('--log-file', is_flag=True, help='Also log to ~/.smbs/logs/smbs.log')
@click.version_option(version=__version__, prog_name="smbs")
@click.pass_context
def cli(ctx, verbose, log_file):
    """
    smbs - semi-Markov beta-Stacy inference and simulation

    Fit posteriors, forecast future states and run reinforced urn walks
    for discrete-time semi-Markov processes.
    """
    ctx.ensure_object(dict)
    ctx.obj['verbose'] = verbose
    setup_logger("smbs", "DEBUG" if verbose else "WARNING", log_file=log_file)


@cli.command()
@common_options
def simulate(config_path, seed, out):
    """Simulate paths from a characteristic couple, the RSM kernel or the urns"""
    run_command("simulate", run_simulate, config_path, seed, out)


@cli.command()
@common_options
def fit(config_path, seed, out):
    """Posterior means, variances and samples of the holding-time laws"""
    run_command("fit", run_fit, config_path, seed, out)


@cli.command()
@common_options
def predict(config_path, seed, out):
    """Monte Carlo h-step-ahead forecast from an observed prefix"""
    run_command("predict", run_predict, config_path, seed, out)


@cli.command('urn-trace')
@common_options
def urn_trace(config_path, seed, out):
    """Generate jumps from fresh urns and trace every draw"""
    run_command("urn-trace", run_urn_trace, config_path, seed, out)


@cli.command()
@common_options
def simstudy(config_path, seed, out):
    """Reproduce the factory-status simulation study"""
    run_command("simstudy", run_simstudy, config_path, seed, out)


if __name__ == '__main__':
    cli(obj={})
