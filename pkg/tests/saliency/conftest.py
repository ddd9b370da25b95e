"""Tests utilities.

Contains shared fixtures.
"""


import numpy as np
import pytest

from fpsp_py.saliency.fixations import FixationSet
from fpsp_py.saliency.maps import SaliencyMap
from fpsp_py.utils import make_rng


@pytest.fixture
def random_map() -> SaliencyMap:
    """Return a random 6 x 4 map in [0, 1).

    Returns:
        SaliencyMap: Random map.
    """
    return SaliencyMap(make_rng(21).random((6, 4)))


@pytest.fixture
def center_fixation() -> FixationSet:
    """Return one fixation at the center pixel of a 21 x 21 image.

    Returns:
        FixationSet: Single fixation.
    """
    return FixationSet(image_id='img', person_id='p', points=((10.5, 10.5),))


@pytest.fixture
def quarter_map() -> SaliencyMap:
    """Return a map whose values float32 stores exactly.

    Returns:
        SaliencyMap: 3 x 5 map of multiples of 0.25.
    """
    return SaliencyMap(np.arange(15).reshape(3, 5) * 0.25)
