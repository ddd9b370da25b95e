"""Tests utilities.

Contains shared fixtures.
"""


import pytest

from fpsp_py.selection.annotations import ObjectAnnotation
from fpsp_py.selection.results import ImageScore


@pytest.fixture
def three_images() -> tuple[dict[str, ImageScore], list[ObjectAnnotation]]:
    """Return images A and B showing cat1 and C showing cat2.

    Returns:
        tuple[dict[str, ImageScore], list[ObjectAnnotation]]: Scores
            0.9, 0.8 and 0.1 with their annotations.
    """
    scores = {
        'A': ImageScore(total=0.9),
        'B': ImageScore(total=0.8),
        'C': ImageScore(total=0.1),
    }
    annotations = [
        ObjectAnnotation('A', 'cat1', 0, 0, 1, 1),
        ObjectAnnotation('B', 'cat1', 0, 0, 1, 1),
        ObjectAnnotation('C', 'cat2', 0, 0, 1, 1),
    ]
    return scores, annotations
