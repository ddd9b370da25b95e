"""Run configuration.

Config files are TOML or JSON, chosen by suffix. Top-level keys are
RunConfig fields, the `regression` table holds RegressionConfig fields
and the `grid` table holds `ranks` and `lambdas` lists:

    common_images = 20
    strict = true

    [regression]
    rank = 8
    lam = 1.0
    working_shape = [32, 24]

    [grid]
    ranks = [1, 2, 4]
    lambdas = [0.1, 1.0]

Precedence: command-line flag, config file, environment (FPSP_OUTPUT_DIR),
dataclass default.
"""

import itertools
import json
import os
import sys
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Mapping, Optional, Union

from fpsp_py.errors import ValidationError
from fpsp_py.pipeline.utils import (
    DEFAULT_COMMON_IMAGES,
    DEFAULT_TARGET_FRACTION,
    DEFAULT_TEST_FRACTION,
    ENV_OUTPUT_DIR,
    TARGET_SOURCE_AUTO,
    TARGET_SOURCE_FIXATIONS,
    TARGET_SOURCE_MAPS,
)
from fpsp_py.regression.config import RegressionConfig

if sys.version_info >= (3, 11):
    import tomllib  # noqa: WPS433
else:
    import tomli as tomllib  # noqa: WPS433, WPS440

# Rank and lambda of the best published setting
DEFAULT_RANK = 50
DEFAULT_LAMBDA = 1000.0

DEFAULT_OUTPUT_DIR = 'fpsp-out'

_REGRESSION_TABLE = 'regression'
_GRID_TABLE = 'grid'


@dataclass(frozen=True)
class RunConfig(object):
    """Settings of one experiment.

    seed drives the image and person splits; the regression seed lives
    in `regression`. grid_ranks and grid_lambdas span the sweep grid,
    defaulting to the single regression setting.
    """

    common_images: int = DEFAULT_COMMON_IMAGES
    regression: RegressionConfig = field(
        default_factory=lambda: RegressionConfig(
            rank=DEFAULT_RANK, lam=DEFAULT_LAMBDA,
        ),
    )
    grid_ranks: tuple[int, ...] = ()
    grid_lambdas: tuple[float, ...] = ()
    seed: int = 0
    strict: bool = True
    output_dir: Path = Path(DEFAULT_OUTPUT_DIR)
    test_fraction: float = DEFAULT_TEST_FRACTION
    target_fraction: float = DEFAULT_TARGET_FRACTION
    target_source: str = TARGET_SOURCE_AUTO
    temperature: float = 0.1
    workers: int = 1

    def __post_init__(self) -> None:
        """Validate fields.

        Raises:
            ValidationError: A field is out of range.
        """
        object.__setattr__(  # noqa: WPS609
            self, 'output_dir', Path(self.output_dir),
        )
        object.__setattr__(  # noqa: WPS609
            self, 'grid_ranks', tuple(int(rank) for rank in self.grid_ranks),
        )
        object.__setattr__(  # noqa: WPS609
            self,
            'grid_lambdas',
            tuple(float(lam) for lam in self.grid_lambdas),
        )
        if self.common_images < 1:
            raise ValidationError('common_images must be >= 1')
        if not 0 < self.test_fraction < 1:
            raise ValidationError('test_fraction must be in (0, 1)')
        if not 0 < self.target_fraction < 1:
            raise ValidationError('target_fraction must be in (0, 1)')
        sources = {
            TARGET_SOURCE_AUTO, TARGET_SOURCE_MAPS, TARGET_SOURCE_FIXATIONS,
        }
        if self.target_source not in sources:
            raise ValidationError(
                'unknown target_source {0!r}'.format(self.target_source),
            )
        if not self.temperature > 0:
            raise ValidationError('temperature must be > 0')
        if self.workers < 1:
            raise ValidationError('workers must be >= 1')

    def grid(self) -> list[tuple[int, float]]:
        """Sweep grid cells.

        Returns:
            list[tuple[int, float]]: (rank, lambda) pairs.
        """
        ranks = self.grid_ranks or (self.regression.rank,)
        lambdas = self.grid_lambdas or (self.regression.lam,)
        return list(itertools.product(ranks, lambdas))


def load_config_file(path: Union[str, Path]) -> dict[str, Any]:
    """Read a TOML or JSON config file.

    Args:
        path (Union[str, Path]): `.toml` or `.json` file.

    Returns:
        dict[str, Any]: Raw values.

    Raises:
        ValidationError: Unknown suffix or unparsable file.
    """
    path = Path(path)
    try:
        if path.suffix == '.toml':
            with path.open('rb') as toml_file:
                return tomllib.load(toml_file)
        if path.suffix == '.json':
            values: dict[str, Any] = json.loads(path.read_text())
            return values
    except (OSError, ValueError) as exc:
        raise ValidationError(
            'cannot read config {0}: {1}'.format(path, exc),
        ) from exc
    raise ValidationError(
        'config {0} must be .toml or .json'.format(path),
    )


def make_run_config(
    file_values: Optional[Mapping[str, Any]] = None,
    overrides: Optional[Mapping[str, Any]] = None,
    environ: Optional[Mapping[str, str]] = None,
) -> RunConfig:
    """Merge config sources into a RunConfig.

    overrides use RunConfig field names plus `rank`, `lam` and
    `regression_seed` for the regression; None values are ignored.

    Args:
        file_values (Optional[Mapping[str, Any]]): Parsed config file.
        overrides (Optional[Mapping[str, Any]]): Command-line values.
        environ (Optional[Mapping[str, str]]): Environment, default
            os.environ.

    Returns:
        RunConfig: Validated config.

    Raises:
        ValidationError: Unknown keys or invalid values.
    """
    values = dict(file_values or {})
    regression_values = dict(values.pop(_REGRESSION_TABLE, {}))
    grid_values = dict(values.pop(_GRID_TABLE, {}))
    run_fields = {
        run_field.name for run_field in fields(RunConfig)
    } - {'regression', 'grid_ranks', 'grid_lambdas'}
    _check_keys(values, run_fields, 'top level')
    _check_keys(
        regression_values,
        {config_field.name for config_field in fields(RegressionConfig)},
        _REGRESSION_TABLE,
    )
    _check_keys(grid_values, {'ranks', 'lambdas'}, _GRID_TABLE)

    environ = os.environ if environ is None else environ
    if 'output_dir' not in values and environ.get(ENV_OUTPUT_DIR):
        values['output_dir'] = environ[ENV_OUTPUT_DIR]

    given = {
        key: setting for key, setting in (overrides or {}).items()
        if setting is not None
    }
    regression_keys = {'rank': 'rank', 'lam': 'lam', 'regression_seed': 'seed'}
    for key, regression_key in regression_keys.items():
        if key in given:
            regression_values[regression_key] = given.pop(key)
    values.update(given)

    regression_values.setdefault('rank', DEFAULT_RANK)
    regression_values.setdefault('lam', DEFAULT_LAMBDA)
    try:
        regression = RegressionConfig(**regression_values)
        config = RunConfig(
            regression=regression,
            grid_ranks=tuple(grid_values.get('ranks', ())),
            grid_lambdas=tuple(grid_values.get('lambdas', ())),
            **values,
        )
    except TypeError as exc:
        raise ValidationError('invalid config: {0}'.format(exc)) from exc
    return config


def with_grid(
    config: RunConfig,
    ranks: tuple[int, ...],
    lambdas: tuple[float, ...],
) -> RunConfig:
    """Copy a config with another sweep grid.

    Args:
        config (RunConfig): Base config.
        ranks (tuple[int, ...]): Grid ranks.
        lambdas (tuple[float, ...]): Grid lambdas.

    Returns:
        RunConfig: Updated config.
    """
    return replace(config, grid_ranks=ranks, grid_lambdas=lambdas)


def _check_keys(
    values: Mapping[str, Any],
    known: set[str],
    where: str,
) -> None:
    unknown = sorted(set(values) - known)
    if unknown:
        raise ValidationError(
            'unknown config keys in {0}: {1}'.format(
                where, ', '.join(unknown),
            ),
        )
