"""Command line interface `fpsp`.

Exit codes: 0 success, 2 invalid input or data, 3 numerical failure.
"""

import functools
import logging
import os
import sys
from pathlib import Path
from typing import Any, Callable, Optional, TypeVar

import click
from dotenv import load_dotenv
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from fpsp_py.errors import ExcludedSampleError, NumericalError, ValidationError
from fpsp_py.evaluation.results import EvalReport
from fpsp_py.pipeline.config import (
    RunConfig,
    load_config_file,
    make_run_config,
    with_grid,
)
from fpsp_py.pipeline.manifest import Dataset, ingest
from fpsp_py.pipeline.runner import (
    PHASE_EVALUATE,
    PHASE_FIT,
    PHASE_PREDICT,
    PHASE_SELECT,
    execute,
    run_experiment,
    sweep,
)
from fpsp_py.pipeline.utils import ENV_LOG_LEVEL
from fpsp_py.regression.utils import REFERENCE_LAMBDAS, REFERENCE_RANKS
from fpsp_py.synth.config import SynthConfig
from fpsp_py.synth.dataset import write_dataset

EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

console = Console(stderr=True)

_Command = TypeVar('_Command', bound=Callable[..., Any])


def handle_errors(command: _Command) -> _Command:
    """Turn fpsp errors into messages and exit codes.

    Args:
        command (_Command): Command callback.

    Returns:
        _Command: Wrapped callback.
    """
    @functools.wraps(command)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return command(*args, **kwargs)
        except (ValidationError, ExcludedSampleError) as exc:
            _fail(exc, EXIT_VALIDATION)
        except NumericalError as exc:
            _fail(exc, EXIT_NUMERICAL)
    return wrapper  # type: ignore[return-value]


def run_options(command: _Command) -> _Command:
    """Options shared by the experiment commands.

    Args:
        command (_Command): Command callback.

    Returns:
        _Command: Callback with options attached.
    """
    options = (
        click.option(
            '--manifest',
            required=True,
            type=click.Path(path_type=Path, dir_okay=False),
            help='Dataset manifest.',
        ),
        click.option(
            '--config',
            'config_path',
            type=click.Path(path_type=Path, dir_okay=False, exists=True),
            help='TOML or JSON run config.',
        ),
        click.option(
            '--out',
            'output_dir',
            type=click.Path(path_type=Path, file_okay=False),
            help='Output directory.',
        ),
        click.option('--seed', type=int, help='Split seed.'),
        click.option(
            '--regression-seed',
            type=int,
            help='Seed of the ALS factor initialization.',
        ),
        click.option('--rank', type=int, help='CP rank R.'),
        click.option('--lambda', 'lam', type=float, help='Lambda.'),
        click.option(
            '--common-images', type=int, help='Number of common images I.',
        ),
        click.option(
            '--strict/--lenient',
            default=None,
            help='Restrict target data to common images.',
        ),
        click.option('--workers', type=int, help='Worker threads.'),
    )
    for option in reversed(options):
        command = option(command)
    return command


@click.group()
@click.option(
    '--log-level',
    type=click.Choice(
        ['DEBUG', 'INFO', 'WARNING', 'ERROR'], case_sensitive=False,
    ),
    default=None,
    help='Console log level, default $FPSP_LOG_LEVEL or INFO.',
)
def main(log_level: Optional[str]) -> None:
    """Few-shot personalized saliency prediction experiments."""
    load_dotenv()
    level = (log_level or os.environ.get(ENV_LOG_LEVEL) or 'INFO').upper()
    logging.basicConfig(
        level=level,
        format='%(message)s',
        handlers=[RichHandler(console=console, show_path=False)],
        force=True,
    )


@main.command('ingest-check')
@click.option(
    '--manifest',
    required=True,
    type=click.Path(path_type=Path, dir_okay=False),
    help='Dataset manifest.',
)
@handle_errors
def ingest_check(manifest: Path) -> None:
    """Validate a manifest and every file it references."""
    dataset = ingest(manifest)
    roles: dict[str, int] = {}
    for person in dataset.manifest.persons:
        role = person.role or 'unassigned'
        roles[role] = roles.get(role, 0) + 1
    click.echo('images: {0}'.format(len(dataset.image_ids)))
    for role, count in sorted(roles.items()):
        click.echo('persons ({0}): {1}'.format(role, count))
    click.echo('usm: {0}'.format(dataset.manifest.usm_source))
    click.echo('psm encoding: {0}'.format(dataset.manifest.psm_encoding))
    click.echo('annotations: {0}'.format(len(dataset.annotations())))


@main.command('select')
@run_options
@handle_errors
def select_command(**options: Any) -> None:
    """Choose common images and write selection.json."""
    _execute(PHASE_SELECT, options)


@main.command('fit')
@run_options
@handle_errors
def fit_command(**options: Any) -> None:
    """Select, then fit one model per target person."""
    _execute(PHASE_FIT, options)


@main.command('predict')
@run_options
@handle_errors
def predict_command(**options: Any) -> None:
    """Select, fit, then predict the test images."""
    _execute(PHASE_PREDICT, options)


@main.command('evaluate')
@run_options
@handle_errors
def evaluate_command(**options: Any) -> None:
    """Run every phase and write the report."""
    runner = _execute(PHASE_EVALUATE, options)
    _print_report(runner.evaluate())


@main.command('run')
@run_options
@handle_errors
def run_command(**options: Any) -> None:
    """Run every phase, writing all artifacts and run.log."""
    config = _run_config(options)
    dataset = _dataset(options, config)
    _print_report(run_experiment(dataset, config))


@main.command('sweep')
@run_options
@click.option(
    '--paper-grid',
    is_flag=True,
    default=False,
    help='Ranks 5..50 by lambdas 0.01..10000.',
)
@handle_errors
def sweep_command(paper_grid: bool, **options: Any) -> None:
    """Evaluate a (rank, lambda) grid and write sweep.csv."""
    config = _run_config(options)
    if paper_grid:
        config = with_grid(config, REFERENCE_RANKS, REFERENCE_LAMBDAS)
    table = sweep(_dataset(options, config), config)
    for row in table.rows:
        click.echo('R={0} lambda={1:g} kldiv={2:.4f} cc={3:.4f}'.format(
            row.rank, row.lam, row.kldiv, row.cc,
        ))


@main.command('synth')
@click.option(
    '--out',
    'output_dir',
    required=True,
    type=click.Path(path_type=Path, file_okay=False),
    help='Dataset directory.',
)
@click.option('--seed', type=int, default=0, show_default=True)
@click.option('--persons', type=int, default=5, show_default=True)
@click.option('--targets', type=int, default=2, show_default=True)
@click.option('--images', type=int, default=80, show_default=True)
@click.option('--categories', type=int, default=4, show_default=True)
@click.option('--components', type=int, default=4, show_default=True)
@click.option('--noise', type=float, default=0.02, show_default=True)
@click.option('--fixations', type=int, default=1000, show_default=True)
@click.option(
    '--shape', type=(int, int), default=(32, 24), show_default=True,
)
@click.option(
    '--planted',
    is_flag=True,
    help='Targets are planted-weight contractions of the inputs.',
)
@click.option('--planted-rank', type=int, default=2, show_default=True)
@handle_errors
def synth_command(
    output_dir: Path,
    planted: bool,
    **options: Any,
) -> None:
    """Write a synthetic dataset and its manifest."""
    manifest = write_dataset(SynthConfig(**options), output_dir, planted)
    click.echo(str(manifest))


def _run_config(options: dict[str, Any]) -> RunConfig:
    config_path = options.get('config_path')
    file_values = load_config_file(config_path) if config_path else {}
    overrides = {
        key: options.get(key)
        for key in (
            'output_dir',
            'seed',
            'regression_seed',
            'rank',
            'lam',
            'common_images',
            'strict',
            'workers',
        )
    }
    return make_run_config(file_values, overrides)


def _dataset(options: dict[str, Any], config: RunConfig) -> Dataset:
    return ingest(
        options['manifest'],
        strict=config.strict,
        target_source=config.target_source,
    )


def _execute(phase: str, options: dict[str, Any]) -> Any:
    config = _run_config(options)
    return execute(_dataset(options, config), config, until=phase)


def _print_report(report: EvalReport) -> None:
    table = Table(title='Evaluation')
    for column in ('method', 'KLdiv', 'CC', 'pairs', 'excluded'):
        table.add_column(column)
    for method, summary in report.summaries.items():
        table.add_row(
            method,
            '{0:.4f}'.format(summary.kldiv),
            '{0:.4f}'.format(summary.cc),
            str(summary.rows),
            str(summary.excluded),
        )
    Console().print(table)


def _fail(exc: Exception, code: int) -> None:
    if logging.getLogger().isEnabledFor(logging.DEBUG):
        console.print_exception()
    console.print(
        'error: {0}'.format(exc), style='bold red', markup=False,
    )
    sys.exit(code)
