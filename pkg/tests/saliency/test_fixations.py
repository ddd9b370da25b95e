"""Tests for ground-truth maps built from fixations."""


import numpy as np
import pytest

from fpsp_py.errors import ExcludedSampleError, ShapeError, ValidationError
from fpsp_py.saliency.fixations import (
    FixationSet,
    default_sigma,
    gt_map_from_fixations,
)


def test_single_fixation(center_fixation: FixationSet) -> None:
    """Test peak position, symmetry and Gaussian decay.

    Args:
        center_fixation (FixationSet): Fixation at the center pixel.
    """
    gt_map = gt_map_from_fixations(center_fixation, 21, 21, sigma=2.0)
    values = gt_map.values
    assert values[10, 10] == pytest.approx(1.0)
    assert values.max() == pytest.approx(1.0)
    np.testing.assert_allclose(values, values.T, atol=1e-12)
    np.testing.assert_allclose(values, values[::-1, ::-1], atol=1e-12)
    assert values[10, 12] == pytest.approx(np.exp(-0.5), rel=0.02)
    assert values.sum() > 0


def test_two_far_fixations() -> None:
    """Test that separated fixations give two equal peaks."""
    fixations = FixationSet(
        image_id='img',
        person_id='p',
        points=((5.5, 10.5), (35.5, 10.5)),
    )
    values = gt_map_from_fixations(fixations, 21, 41, sigma=2.0).values
    assert values[10, 5] == pytest.approx(1.0)
    assert values[10, 35] == pytest.approx(1.0)
    assert values[10, 20] < 1e-6

    reordered = FixationSet(
        image_id='img',
        person_id='p',
        points=tuple(reversed(fixations.points)),
    )
    np.testing.assert_array_equal(
        gt_map_from_fixations(reordered, 21, 41, sigma=2.0).values, values,
    )


def test_default_sigma(center_fixation: FixationSet) -> None:
    """Test that sigma defaults to width / 25.

    Args:
        center_fixation (FixationSet): Fixation at the center pixel.
    """
    assert default_sigma(50) == pytest.approx(2.0)
    np.testing.assert_array_equal(
        gt_map_from_fixations(center_fixation, 21, 21).values,
        gt_map_from_fixations(
            center_fixation, 21, 21, sigma=21 / 25,
        ).values,
    )


def test_fixation_errors(center_fixation: FixationSet) -> None:
    """Test empty sets, bad sigma and out-of-bounds points.

    Args:
        center_fixation (FixationSet): Fixation at the center pixel.
    """
    empty = FixationSet(image_id='img', person_id='p', points=())
    with pytest.raises(ExcludedSampleError):
        gt_map_from_fixations(empty, 21, 21, sigma=2.0)
    with pytest.raises(ValidationError):
        gt_map_from_fixations(center_fixation, 21, 21, sigma=0.0)
    with pytest.raises(ShapeError):
        gt_map_from_fixations(center_fixation, 10, 10, sigma=2.0)
    with pytest.raises(ShapeError):
        FixationSet('img', 'p', ((-0.5, 1.0),)).check_bounds(5, 5)
