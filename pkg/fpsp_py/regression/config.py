"""Regression configuration and training data."""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from fpsp_py.errors import NonFiniteError, ShapeError, ValidationError
from fpsp_py.regression.utils import (
    DEFAULT_MAX_SWEEPS,
    DEFAULT_REL_TOL,
    DEFAULT_WORKING_SHAPE,
    PENALTY_EXACT,
    PENALTY_RIDGE,
)
from fpsp_py.tensors.dense import DenseTensor


@dataclass(frozen=True)
class RegressionConfig(object):
    """Hyperparameters of one regression fit.

    `penalty` selects how lambda enters each factor update. With `exact`
    the update minimizes the full objective including lambda * ||W||_F^2,
    which is quadratic in a single factor. With `ridge` every update uses
    lambda * I instead, and the minimized quantity is the residual plus
    lambda times the sum of squared factor norms.
    """

    rank: int
    lam: float
    max_sweeps: int = DEFAULT_MAX_SWEEPS
    rel_tol: float = DEFAULT_REL_TOL
    seed: int = 0
    working_shape: tuple[int, int] = DEFAULT_WORKING_SHAPE
    penalty: str = PENALTY_EXACT
    center_targets: bool = False

    def __post_init__(self) -> None:
        """Validate fields.

        Raises:
            ValidationError: A field is out of range.
        """
        object.__setattr__(  # noqa: WPS609
            self, 'working_shape', tuple(self.working_shape),
        )
        if self.rank < 1:
            raise ValidationError('rank must be >= 1')
        if not self.lam >= 0:
            raise ValidationError('lambda must be >= 0')
        if not self.rel_tol > 0:
            raise ValidationError('rel_tol must be > 0')
        if self.max_sweeps < 1:
            raise ValidationError('max_sweeps must be >= 1')
        if len(self.working_shape) != 2 or min(self.working_shape) < 1:
            raise ValidationError(
                'working_shape must be two positive extents',
            )
        if self.penalty not in {PENALTY_EXACT, PENALTY_RIDGE}:
            raise ValidationError(
                'unknown penalty {0!r}'.format(self.penalty),
            )


@dataclass(frozen=True)
class TrainingSet(object):
    """Stacked regression samples.

    inputs has shape (I, P, d1', d2'), one stacked training-person tensor
    per common image; targets has shape (I, d1', d2'), the target
    person's supervised PSM for the same images.
    """

    inputs: DenseTensor
    targets: DenseTensor

    def __post_init__(self) -> None:
        """Validate shapes and values.

        Raises:
            ShapeError: Orders or sample counts disagree.
            NonFiniteError: Values are not finite.
            ValidationError: Values are negative.
        """
        if self.inputs.order != 4 or self.targets.order != 3:
            raise ShapeError(
                'inputs must be (I, P, d1, d2) and targets (I, d1, d2)',
            )
        if self.inputs.shape[0] != self.targets.shape[0]:
            raise ShapeError(
                '{0} input samples but {1} targets'.format(
                    self.inputs.shape[0], self.targets.shape[0],
                ),
            )
        if self.inputs.shape[2:] != self.targets.shape[1:]:
            raise ShapeError(
                'input maps {0} and target maps {1} differ'.format(
                    self.inputs.shape[2:], self.targets.shape[1:],
                ),
            )
        checked = (('inputs', self.inputs), ('targets', self.targets))
        for name, tensor in checked:
            if not np.all(np.isfinite(tensor.values)):
                raise NonFiniteError(
                    '{0} contain non-finite values'.format(name),
                )
            if np.any(tensor.values < 0):
                raise ValidationError('{0} must be >= 0'.format(name))

    @property
    def samples(self) -> int:
        """Number of samples I.

        Returns:
            int: I.
        """
        return self.inputs.shape[0]

    @property
    def persons(self) -> int:
        """Number of training persons P.

        Returns:
            int: P.
        """
        return self.inputs.shape[1]

    @property
    def map_shape(self) -> tuple[int, int]:
        """Working map shape (d1', d2').

        Returns:
            tuple[int, int]: Map shape.
        """
        return (self.targets.shape[1], self.targets.shape[2])

    def subset(self, indices: Sequence[int]) -> 'TrainingSet':
        """Select samples by index.

        Args:
            indices (Sequence[int]): Sample indices, in output order.

        Returns:
            TrainingSet: Selected samples.
        """
        index_array = np.asarray(indices, dtype=np.intp)
        return TrainingSet(
            inputs=DenseTensor(self.inputs.values[index_array]),
            targets=DenseTensor(self.targets.values[index_array]),
        )
