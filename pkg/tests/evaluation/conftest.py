"""Tests utilities.

Contains shared fixtures.
"""


import numpy as np
import pytest

from fpsp_py.saliency.maps import SaliencyMap
from fpsp_py.utils import make_rng


@pytest.fixture
def half_map() -> SaliencyMap:
    """Return a 2 x 2 map with mass on the first row only.

    Returns:
        SaliencyMap: Map [[1, 1], [0, 0]].
    """
    return SaliencyMap(np.array([[1.0, 1.0], [0.0, 0.0]]))


@pytest.fixture
def uniform_map() -> SaliencyMap:
    """Return a constant 2 x 2 map.

    Returns:
        SaliencyMap: Map of ones.
    """
    return SaliencyMap(np.ones((2, 2)))


@pytest.fixture
def truths() -> dict[tuple[str, str], SaliencyMap]:
    """Return random 4 x 6 ground truths for two persons and two images.

    Returns:
        dict[tuple[str, str], SaliencyMap]: Maps keyed by (person, image).
    """
    rng = make_rng(31)
    return {
        (person, image): SaliencyMap(rng.random((4, 6)))
        for person in ('p1', 'p2')
        for image in ('img1', 'img2')
    }
