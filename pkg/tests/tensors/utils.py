"""Tests utilities.

Contains brute-force oracles built from nested loops.
"""


import itertools

import numpy as np

from fpsp_py.utils import FloatArray


def loop_unfold(array: FloatArray, mode: int) -> FloatArray:
    """Unfold by enumerating indices, first remaining mode fastest.

    Args:
        array (FloatArray): Array to unfold.
        mode (int): Mode kept on rows.

    Returns:
        FloatArray: Unfolded matrix.
    """
    rest = [axis for axis in range(array.ndim) if axis != mode]
    columns = int(np.prod([array.shape[axis] for axis in rest]))
    matrix = np.zeros((array.shape[mode], columns))
    for index in itertools.product(*(range(size) for size in array.shape)):
        column = 0
        stride = 1
        for axis in rest:
            column += index[axis] * stride
            stride *= array.shape[axis]
        matrix[index[mode], column] = array[index]
    return matrix


def loop_khatri_rao(left: FloatArray, right: FloatArray) -> FloatArray:
    """Khatri-Rao product from the element-wise definition.

    Args:
        left (FloatArray): n x R matrix.
        right (FloatArray): m x R matrix.

    Returns:
        FloatArray: (n * m) x R matrix.
    """
    rows_right = right.shape[0]
    product = np.zeros((left.shape[0] * rows_right, left.shape[1]))
    for column in range(left.shape[1]):
        for row_left in range(left.shape[0]):
            for row_right in range(rows_right):
                product[row_left * rows_right + row_right, column] = (
                    left[row_left, column] * right[row_right, column]
                )
    return product


def loop_reconstruct(factors: tuple[FloatArray, ...]) -> FloatArray:
    """Materialize a CP tensor entry by entry.

    Args:
        factors (tuple[FloatArray, ...]): Factor matrices.

    Returns:
        FloatArray: Dense tensor.
    """
    shape = tuple(factor.shape[0] for factor in factors)
    dense = np.zeros(shape)
    for index in itertools.product(*(range(size) for size in shape)):
        entry = 0.0
        for rank in range(factors[0].shape[1]):
            term = 1.0
            for factor, position in zip(factors, index):
                term *= factor[position, rank]
            entry += term
        dense[index] = entry
    return dense


def loop_contract(inputs: FloatArray, weights: FloatArray) -> FloatArray:
    """Contract inputs over the leading modes of materialized weights.

    Args:
        inputs (FloatArray): Input of order q.
        weights (FloatArray): Weights whose first q extents match inputs.

    Returns:
        FloatArray: Contracted tensor.
    """
    trailing = weights.shape[inputs.ndim:]
    result = np.zeros(trailing)
    for out in itertools.product(*(range(size) for size in trailing)):
        total = 0.0
        for index in itertools.product(*(range(s) for s in inputs.shape)):
            total += inputs[index] * weights[index + out]
        result[out] = total
    return result
