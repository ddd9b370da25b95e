"""Fixations and ground-truth maps built from them."""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import ndimage

from fpsp_py.errors import ExcludedSampleError, ShapeError, ValidationError
from fpsp_py.saliency.maps import SaliencyMap
from fpsp_py.saliency.utils import GAUSSIAN_TRUNCATE, SIGMA_WIDTH_DIVISOR

Point = tuple[float, float]


@dataclass(frozen=True)
class FixationSet(object):
    """Fixations of one person on one image.

    Points are (x, y) pairs: x is the pixel column, y the pixel row.
    """

    image_id: str
    person_id: str
    points: tuple[Point, ...]

    def __post_init__(self) -> None:
        """Store points as a tuple of float pairs."""
        object.__setattr__(  # noqa: WPS609
            self,
            'points',
            tuple((float(x), float(y)) for x, y in self.points),
        )

    def check_bounds(self, height: int, width: int) -> None:
        """Raise if a point lies outside a height x width image.

        Args:
            height (int): Image rows d1.
            width (int): Image columns d2.

        Raises:
            ShapeError: A point is out of bounds.
        """
        for x, y in self.points:
            if not (0 <= x < width and 0 <= y < height):
                raise ShapeError(
                    'fixation ({0}, {1}) of {2}/{3} outside {4}x{5}'.format(
                        x, y, self.person_id, self.image_id, height, width,
                    ),
                )


def default_sigma(width: int) -> float:
    """Default Gaussian std in pixels: width / 25.

    Args:
        width (int): Image width d2.

    Returns:
        float: Sigma.
    """
    return width / SIGMA_WIDTH_DIVISOR


def gt_map_from_fixations(
    fixations: FixationSet,
    height: int,
    width: int,
    sigma: Optional[float] = None,
) -> SaliencyMap:
    """Ground-truth map: fixation counts blurred by an isotropic Gaussian.

    The kernel is truncated at 4 sigma with reflect padding and the
    result is max-normalized.

    Args:
        fixations (FixationSet): Non-empty fixations.
        height (int): Map rows d1.
        width (int): Map columns d2.
        sigma (Optional[float]): Std in pixels, default width / 25.

    Returns:
        SaliencyMap: Map with maximum 1.

    Raises:
        ExcludedSampleError: No fixations.
        ValidationError: Sigma is not positive.
    """
    if not fixations.points:
        raise ExcludedSampleError(
            'no fixations for {0}/{1}'.format(
                fixations.person_id, fixations.image_id,
            ),
        )
    if sigma is None:
        sigma = default_sigma(width)
    if not sigma > 0:
        raise ValidationError('sigma must be > 0')
    fixations.check_bounds(height, width)

    counts = np.zeros((height, width))
    points = np.asarray(fixations.points)
    cols = np.floor(points[:, 0]).astype(np.intp)
    rows = np.floor(points[:, 1]).astype(np.intp)
    np.add.at(counts, (rows, cols), 1.0)
    blurred = ndimage.gaussian_filter(
        counts, sigma=sigma, mode='reflect', truncate=GAUSSIAN_TRUNCATE,
    )
    return SaliencyMap(np.maximum(blurred, 0)).normalized()
