"""Utilities shared across fpsp_py."""

from typing import Any

import numpy as np
import numpy.typing as npt

from fpsp_py.errors import NonFiniteError

FloatArray = npt.NDArray[np.float64]


def as_float_array(values: Any, *, writeable: bool = False) -> FloatArray:
    """Copy values into a contiguous float64 array.

    Args:
        values (Any): Anything numpy can convert.
        writeable (bool): Leave the copy writeable.

    Returns:
        FloatArray: Fresh array, read-only unless requested otherwise.
    """
    array = np.array(values, dtype=np.float64, order='C', copy=True)
    array.flags.writeable = writeable
    return array


def ensure_finite(values: FloatArray, what: str) -> None:
    """Raise if values contain NaN or infinity.

    Args:
        values (FloatArray): Array to check.
        what (str): Name used in the error message.

    Raises:
        NonFiniteError: Values are not all finite.
    """
    if not np.all(np.isfinite(values)):
        raise NonFiniteError('{0} contains non-finite values'.format(what))


def make_rng(seed: int) -> np.random.Generator:
    """Return the generator used for every seeded draw.

    Args:
        seed (int): Seed.

    Returns:
        np.random.Generator: PCG64 generator.
    """
    return np.random.default_rng(seed)
