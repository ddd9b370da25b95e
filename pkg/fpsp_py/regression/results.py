"""Regression results.

This module contains the fitted model type returned by fit.
"""

from dataclasses import dataclass
from typing import Optional

from fpsp_py.errors import ShapeError
from fpsp_py.regression.config import RegressionConfig
from fpsp_py.regression.utils import FACTOR_NAMES
from fpsp_py.tensors.cp import CpFactors
from fpsp_py.utils import FloatArray, as_float_array


@dataclass(frozen=True)
class FittedModel(object):
    """CP weight tensor over (P, d1', d2', d1', d2') and its provenance.

    objective_trace holds the minimized objective after every sweep.
    target_offset is the mean training target when the model was fitted
    with centered targets; predictions add it back.
    """

    weights: CpFactors
    config: RegressionConfig
    objective_trace: tuple[float, ...]
    persons: tuple[str, ...]
    target_offset: Optional[FloatArray] = None
    stop_reason: str = ''

    def __post_init__(self) -> None:
        """Validate weights against persons and working shape.

        Raises:
            ShapeError: Weights do not fit persons or working shape.
        """
        object.__setattr__(  # noqa: WPS609
            self, 'persons', tuple(self.persons),
        )
        object.__setattr__(  # noqa: WPS609
            self, 'objective_trace', tuple(self.objective_trace),
        )
        if self.weights.order != len(FACTOR_NAMES):
            raise ShapeError(
                'weights must have {0} factors, got {1}'.format(
                    len(FACTOR_NAMES), self.weights.order,
                ),
            )
        if self.weights.shape[0] != len(self.persons):
            raise ShapeError(
                'person factor has {0} rows for {1} persons'.format(
                    self.weights.shape[0], len(self.persons),
                ),
            )
        map_shape = self.weights.shape[3:]
        if self.weights.shape[1:3] != map_shape:
            raise ShapeError('input and output map shapes differ')
        if self.target_offset is not None:
            offset = as_float_array(self.target_offset)
            if offset.shape != map_shape:
                raise ShapeError(
                    'target offset {0} does not match maps {1}'.format(
                        offset.shape, map_shape,
                    ),
                )
            object.__setattr__(  # noqa: WPS609
                self, 'target_offset', offset,
            )

    @property
    def map_shape(self) -> tuple[int, int]:
        """Working map shape (d1', d2').

        Returns:
            tuple[int, int]: Map shape.
        """
        return (self.weights.shape[3], self.weights.shape[4])


@dataclass(frozen=True)
class SweepRow(object):
    """Validation metrics of one (rank, lambda) grid cell.

    Means are NaN when every validation sample was excluded.
    """

    rank: int
    lam: float
    kldiv: float
    cc: float


@dataclass(frozen=True)
class SweepTable(object):
    """Grid rows sorted by (rank, lambda)."""

    rows: tuple[SweepRow, ...]

    def to_csv(self) -> str:
        """Render as long-format CSV `rank,lambda,kldiv,cc`.

        Returns:
            str: CSV text with repr floats.
        """
        lines = ['rank,lambda,kldiv,cc']
        lines.extend(
            '{0},{1!r},{2!r},{3!r}'.format(
                row.rank, float(row.lam), row.kldiv, row.cc,
            )
            for row in self.rows
        )
        return '\n'.join(lines) + '\n'
