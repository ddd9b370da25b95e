"""Dense tensor module.

Unfolding convention: the mode-k unfolding of a tensor with extents
(n_0, ..., n_{Q-1}) is an n_k x prod(n_j, j != k) matrix whose columns
enumerate the remaining modes in increasing mode index with the
first-listed remaining mode varying fastest. Refolding is its exact
inverse. The convention is frozen: regression design matrices and
stored models depend on it.
"""

from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from fpsp_py.errors import ShapeError
from fpsp_py.utils import FloatArray, as_float_array


@dataclass(frozen=True)
class DenseTensor(object):
    """Order-Q dense array of float64 values, immutable."""

    values: FloatArray

    def __post_init__(self) -> None:
        """Copy values into a read-only float64 array.

        Raises:
            ShapeError: Order is zero or some extent is zero.
        """
        array = as_float_array(self.values)
        if array.ndim < 1 or any(extent < 1 for extent in array.shape):
            raise ShapeError(
                'tensor extents must be positive, got {0}'.format(
                    array.shape,
                ),
            )
        object.__setattr__(self, 'values', array)  # noqa: WPS609

    @classmethod
    def from_flat(
        cls,
        shape: Sequence[int],
        flat: Any,
    ) -> 'DenseTensor':
        """Build a tensor from a shape and row-major flat values.

        Args:
            shape (Sequence[int]): Positive extents.
            flat (Any): prod(shape) values, row-major.

        Returns:
            DenseTensor: The tensor.

        Raises:
            ShapeError: Value count does not match the shape.
        """
        flat_array = np.asarray(flat, dtype=np.float64).ravel()
        if int(np.prod(shape)) != flat_array.size:
            raise ShapeError(
                'shape {0} needs {1} values, got {2}'.format(
                    tuple(shape), int(np.prod(shape)), flat_array.size,
                ),
            )
        return cls(flat_array.reshape(tuple(shape)))

    @property
    def shape(self) -> tuple[int, ...]:
        """Extents of every mode.

        Returns:
            tuple[int, ...]: Shape.
        """
        return tuple(self.values.shape)

    @property
    def order(self) -> int:
        """Number of modes.

        Returns:
            int: Order.
        """
        return int(self.values.ndim)

    @property
    def flat(self) -> FloatArray:
        """Row-major flat view of the values.

        Returns:
            FloatArray: Values raveled in C order.
        """
        return self.values.ravel()


def unfold_array(array: FloatArray, mode: int) -> FloatArray:
    """Mode unfolding on a bare array.

    Args:
        array (FloatArray): Array of order >= 1.
        mode (int): Mode to put on rows.

    Returns:
        FloatArray: Unfolded matrix.
    """
    moved = np.moveaxis(array, mode, 0)
    return np.reshape(moved, (array.shape[mode], -1), order='F')


def fold_array(
    matrix: FloatArray,
    mode: int,
    shape: Sequence[int],
) -> FloatArray:
    """Inverse of unfold_array.

    Args:
        matrix (FloatArray): Unfolded matrix.
        mode (int): Mode that was put on rows.
        shape (Sequence[int]): Shape of the folded tensor.

    Returns:
        FloatArray: Folded array.
    """
    moved_shape = [shape[mode]] + [
        extent for index, extent in enumerate(shape) if index != mode
    ]
    moved = np.reshape(matrix, moved_shape, order='F')
    return np.ascontiguousarray(np.moveaxis(moved, 0, mode))


def mode_unfold(tensor: DenseTensor, mode: int) -> FloatArray:
    """Unfold a tensor along a mode.

    Args:
        tensor (DenseTensor): Tensor to unfold.
        mode (int): Mode index, 0 <= mode < order.

    Returns:
        FloatArray: extent_mode x prod(other extents) matrix.

    Raises:
        ShapeError: Mode is out of range.
    """
    _check_mode(mode, tensor.order)
    return unfold_array(tensor.values, mode)


def refold(
    matrix: FloatArray,
    mode: int,
    shape: Sequence[int],
) -> DenseTensor:
    """Fold an unfolded matrix back into a tensor.

    Args:
        matrix (FloatArray): Matrix produced by mode_unfold.
        mode (int): Mode it was unfolded along.
        shape (Sequence[int]): Shape of the original tensor.

    Returns:
        DenseTensor: Folded tensor.

    Raises:
        ShapeError: Mode is out of range or sizes disagree.
    """
    _check_mode(mode, len(shape))
    rest = int(np.prod(shape)) // shape[mode]
    if matrix.shape != (shape[mode], rest):
        raise ShapeError(
            'matrix {0} cannot fold into {1} along mode {2}'.format(
                matrix.shape, tuple(shape), mode,
            ),
        )
    return DenseTensor(fold_array(matrix, mode, shape))


def _check_mode(mode: int, order: int) -> None:
    if not 0 <= mode < order:
        raise ShapeError(
            'mode {0} out of range for order {1}'.format(mode, order),
        )
