"""Tests utilities.

Contains shared fixtures.
"""


import numpy as np
import pytest

from fpsp_py.tensors.cp import CpFactors
from fpsp_py.tensors.dense import DenseTensor
from fpsp_py.utils import make_rng


@pytest.fixture
def rng() -> np.random.Generator:
    """Return a seeded generator.

    Returns:
        np.random.Generator: Generator seeded with 7.
    """
    return make_rng(7)


@pytest.fixture
def small_tensor(rng: np.random.Generator) -> DenseTensor:
    """Return a random 2 x 3 x 4 tensor.

    Args:
        rng (np.random.Generator): Seeded generator.

    Returns:
        DenseTensor: Random tensor.
    """
    return DenseTensor(rng.standard_normal((2, 3, 4)))


@pytest.fixture
def order_five_weights(rng: np.random.Generator) -> CpFactors:
    """Return random rank-2 weights of shape (2, 3, 2, 4, 3).

    Args:
        rng (np.random.Generator): Seeded generator.

    Returns:
        CpFactors: Random factors.
    """
    return CpFactors(tuple(
        rng.standard_normal((extent, 2)) for extent in (2, 3, 2, 4, 3)
    ))
