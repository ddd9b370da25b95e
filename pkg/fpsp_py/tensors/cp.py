"""CP tensor module.

A CP (CANDECOMP/PARAFAC) tensor of rank R is the sum of R rank-1 outer
products; it is stored as one extent_k x R factor matrix per mode.
Regression weights live only in this form.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from fpsp_py.errors import ShapeError
from fpsp_py.tensors.dense import DenseTensor, unfold_array
from fpsp_py.tensors.utils import RECONSTRUCT_SIZE_CAP
from fpsp_py.utils import FloatArray, as_float_array


@dataclass(frozen=True)
class CpFactors(object):
    """Factor matrices of a CP tensor, immutable."""

    factors: tuple[FloatArray, ...]

    def __post_init__(self) -> None:
        """Freeze factor copies and check they share a rank.

        Raises:
            ShapeError: Factors are missing, not matrices or ranks differ.
        """
        if not self.factors:
            raise ShapeError('CP tensor needs at least one factor')
        frozen = tuple(as_float_array(factor) for factor in self.factors)
        for factor in frozen:
            if factor.ndim != 2 or min(factor.shape) < 1:
                raise ShapeError(
                    'factor must be a non-empty matrix, got {0}'.format(
                        factor.shape,
                    ),
                )
        ranks = {factor.shape[1] for factor in frozen}
        if len(ranks) != 1:
            raise ShapeError(
                'factors disagree on rank: {0}'.format(sorted(ranks)),
            )
        object.__setattr__(self, 'factors', frozen)  # noqa: WPS609

    @property
    def rank(self) -> int:
        """Number of rank-1 terms.

        Returns:
            int: R.
        """
        return int(self.factors[0].shape[1])

    @property
    def shape(self) -> tuple[int, ...]:
        """Shape of the represented tensor.

        Returns:
            tuple[int, ...]: One extent per factor.
        """
        return tuple(int(factor.shape[0]) for factor in self.factors)

    @property
    def order(self) -> int:
        """Order of the represented tensor.

        Returns:
            int: Number of factors.
        """
        return len(self.factors)


def khatri_rao(left: FloatArray, right: FloatArray) -> FloatArray:
    """Column-wise Kronecker product.

    Column r of the result is kron(left[:, r], right[:, r]), so the row
    index is i * right_rows + j.

    Args:
        left (FloatArray): n x R matrix.
        right (FloatArray): m x R matrix.

    Returns:
        FloatArray: (n * m) x R matrix.

    Raises:
        ShapeError: Column counts differ.
    """
    matrices = left.ndim == 2 and right.ndim == 2
    if not matrices or left.shape[1] != right.shape[1]:
        raise ShapeError(
            'khatri_rao needs equal column counts, got {0} and {1}'.format(
                left.shape, right.shape,
            ),
        )
    rows = left.shape[0] * right.shape[0]
    product = left[:, np.newaxis, :] * right[np.newaxis, :, :]
    return product.reshape(rows, left.shape[1])


def khatri_rao_chain(matrices: Sequence[FloatArray]) -> FloatArray:
    """Khatri-Rao product of several matrices, left to right.

    Pass factors in reverse mode order to get the design matrix that
    matches mode_unfold columns.

    Args:
        matrices (Sequence[FloatArray]): Matrices sharing a column count.

    Returns:
        FloatArray: Product matrix.
    """
    product = matrices[0]
    for matrix in matrices[1:]:
        product = khatri_rao(product, matrix)
    return product


def cp_reconstruct(
    weights: CpFactors,
    size_cap: int = RECONSTRUCT_SIZE_CAP,
) -> DenseTensor:
    """Materialize a CP tensor.

    Only meant for small shapes such as test oracles.

    Args:
        weights (CpFactors): Factors.
        size_cap (int): Largest entry count allowed.

    Returns:
        DenseTensor: Sum of the R outer products.

    Raises:
        ShapeError: The tensor would exceed size_cap entries.
    """
    size = int(np.prod(weights.shape))
    if size > size_cap:
        raise ShapeError(
            'refusing to materialize {0} entries (cap {1})'.format(
                size, size_cap,
            ),
        )
    partial = weights.factors[0]
    for factor in weights.factors[1:]:
        partial = partial[..., np.newaxis, :] * factor
    return DenseTensor(partial.sum(axis=-1))


def leading_coefficients(
    inputs: FloatArray,
    weights: CpFactors,
) -> FloatArray:
    """Project inputs on the leading CP factors.

    For an input x of order q, coefficient r is
    sum over i of x[i] * prod_k factors[k][i_k, r].

    Args:
        inputs (FloatArray): Input array of order q.
        weights (CpFactors): Factors of order > q.

    Returns:
        FloatArray: R coefficients.
    """
    leading = weights.factors[:inputs.ndim]
    design = khatri_rao_chain(leading[::-1])
    flat_input = np.ravel(inputs, order='F')
    return np.asarray(flat_input @ design, dtype=np.float64)


def contract_leading(
    inputs: DenseTensor,
    weights: CpFactors,
    modes: int,
) -> DenseTensor:
    """Contract an input over the leading modes of a CP tensor.

    result[o] = sum_i x[i] * W[i, o], evaluated in factorized form:
    per-rank coefficients from the leading factors, then the sum of
    trailing outer products scaled by them. W is never materialized.

    Args:
        inputs (DenseTensor): Tensor x of order `modes`.
        weights (CpFactors): W of order greater than `modes`.
        modes (int): Number of contracted modes.

    Returns:
        DenseTensor: Tensor of order weights.order - modes.

    Raises:
        ShapeError: Mode count or leading extents do not match.
    """
    if modes != inputs.order or modes >= weights.order:
        raise ShapeError(
            'cannot contract {0} modes of an order-{1} input '.format(
                modes, inputs.order,
            ) + 'with order-{0} weights'.format(weights.order),
        )
    if weights.shape[:modes] != inputs.shape:
        raise ShapeError(
            'input shape {0} does not match leading extents {1}'.format(
                inputs.shape, weights.shape[:modes],
            ),
        )
    coefficients = leading_coefficients(inputs.values, weights)
    trailing = list(weights.factors[modes:])
    trailing[0] = trailing[0] * coefficients[np.newaxis, :]
    return cp_reconstruct(CpFactors(tuple(trailing)))


def mttkrp(
    array: FloatArray,
    factors: Sequence[FloatArray],
    mode: int,
) -> FloatArray:
    """Matricized tensor times Khatri-Rao product.

    Multiplies the mode unfolding of `array` by the Khatri-Rao product of
    every factor except `mode`, in the order matching the unfolding.

    Args:
        array (FloatArray): Array with one factor per mode.
        factors (Sequence[FloatArray]): Factor matrices.
        mode (int): Mode kept on rows.

    Returns:
        FloatArray: extent_mode x R matrix.
    """
    others = [
        factor for index, factor in enumerate(factors) if index != mode
    ]
    design = khatri_rao_chain(others[::-1])
    return np.asarray(unfold_array(array, mode) @ design, dtype=np.float64)
