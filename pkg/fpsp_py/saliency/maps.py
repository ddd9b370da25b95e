"""Saliency map types and algebra.

A map has d1 rows (height) and d2 columns (width). Saliency maps are
non-negative; difference maps (PSM minus USM) are signed.
"""

from dataclasses import dataclass
from typing import Literal, Sequence, TypeVar

import numpy as np
from scipy import ndimage

from fpsp_py.errors import MissingDataError, ShapeError, ValidationError
from fpsp_py.utils import FloatArray, as_float_array, ensure_finite

RasterT = TypeVar('RasterT', bound='Raster')

ResampleMode = Literal['down', 'up']


@dataclass(frozen=True)
class Raster(object):
    """Immutable d1 x d2 float64 raster."""

    values: FloatArray

    def __post_init__(self) -> None:
        """Freeze a float64 copy and check geometry.

        Raises:
            ShapeError: Values are not a non-empty matrix.
        """
        array = as_float_array(self.values)
        if array.ndim != 2 or min(array.shape) < 1:
            raise ShapeError(
                'map must be a non-empty matrix, got {0}'.format(
                    array.shape,
                ),
            )
        ensure_finite(array, 'map')
        object.__setattr__(self, 'values', array)  # noqa: WPS609

    @property
    def height(self) -> int:
        """Row count d1.

        Returns:
            int: d1.
        """
        return int(self.values.shape[0])

    @property
    def width(self) -> int:
        """Column count d2.

        Returns:
            int: d2.
        """
        return int(self.values.shape[1])

    @property
    def shape(self) -> tuple[int, int]:
        """Geometry (d1, d2).

        Returns:
            tuple[int, int]: Shape.
        """
        return (self.height, self.width)


@dataclass(frozen=True)
class SaliencyMap(Raster):
    """Non-negative saliency map: a PSM, a USM or a ground-truth map."""

    def __post_init__(self) -> None:
        """Check values are non-negative.

        Raises:
            ValidationError: Some value is negative.
        """
        super().__post_init__()
        if np.any(self.values < 0):
            raise ValidationError('saliency map values must be >= 0')

    @classmethod
    def from_unbounded(cls, values: FloatArray) -> 'SaliencyMap':
        """Clamp negatives to zero and max-normalize.

        Args:
            values (FloatArray): Signed raster.

        Returns:
            SaliencyMap: Map in [0, 1], all-zero if nothing is positive.
        """
        return cls(np.maximum(values, 0)).normalized()

    @property
    def is_zero(self) -> bool:
        """Whether every value is zero.

        Returns:
            bool: True for the all-zero map.
        """
        return not np.any(self.values)

    def normalized(self) -> 'SaliencyMap':
        """Scale the map so its maximum is 1.

        Returns:
            SaliencyMap: Normalized map; an all-zero map stays all-zero.
        """
        peak = self.values.max()
        if peak <= 0:
            return SaliencyMap(np.zeros_like(self.values))
        return SaliencyMap(self.values / peak)


@dataclass(frozen=True)
class DifferenceMap(Raster):
    """Signed residual of a PSM against the USM."""


def usm_mean(maps: Sequence[SaliencyMap]) -> SaliencyMap:
    """Pixel-wise mean of training-person PSMs.

    Args:
        maps (Sequence[SaliencyMap]): At least one map, equal geometry.

    Returns:
        SaliencyMap: Mean map.

    Raises:
        MissingDataError: No maps given.
    """
    if not maps:
        raise MissingDataError('cannot average an empty list of maps')
    check_same_shape(*maps)
    return SaliencyMap(np.mean([psm.values for psm in maps], axis=0))


def difference_map(psm: SaliencyMap, usm: SaliencyMap) -> DifferenceMap:
    """Difference map M = S - U.

    Args:
        psm (SaliencyMap): Personalized map S.
        usm (SaliencyMap): Universal map U.

    Returns:
        DifferenceMap: S - U.
    """
    check_same_shape(psm, usm)
    return DifferenceMap(psm.values - usm.values)


def compose_psm(difference: DifferenceMap, usm: SaliencyMap) -> SaliencyMap:
    """PSM from a difference map: M + U with negatives clamped to 0.

    Args:
        difference (DifferenceMap): Difference map M.
        usm (SaliencyMap): Universal map U.

    Returns:
        SaliencyMap: Composed map.
    """
    check_same_shape(difference, usm)
    return SaliencyMap(np.maximum(difference.values + usm.values, 0))


def resample(
    raster: RasterT,
    height: int,
    width: int,
    mode: ResampleMode,
) -> RasterT:
    """Resize a map.

    `down` averages over covered source area, `up` interpolates
    bilinearly between pixel centers.

    Args:
        raster (RasterT): Map to resize.
        height (int): New d1.
        width (int): New d2.
        mode (ResampleMode): `down` or `up`.

    Returns:
        RasterT: Resized map of the same type.

    Raises:
        ShapeError: Target extents are not positive.
    """
    if height < 1 or width < 1:
        raise ShapeError('target extents must be positive')
    if (height, width) == raster.shape:
        return raster
    if mode == 'down':
        rows = _area_weights(raster.height, height)
        cols = _area_weights(raster.width, width)
        resized = rows @ raster.values @ cols.T
    else:
        resized = _bilinear(raster.values, height, width)
    return type(raster)(resized)


def resample_to(raster: RasterT, shape: tuple[int, int]) -> RasterT:
    """Resize choosing area averaging when shrinking, bilinear otherwise.

    Args:
        raster (RasterT): Map to resize.
        shape (tuple[int, int]): Target (d1, d2).

    Returns:
        RasterT: Resized map.
    """
    shrinking = shape[0] * shape[1] < raster.height * raster.width
    mode: ResampleMode = 'down' if shrinking else 'up'
    return resample(raster, shape[0], shape[1], mode)


def crop(
    raster: RasterT,
    bbox: tuple[int, int, int, int],
) -> RasterT:
    """Copy the sub-raster at bbox = (row, col, height, width).

    Args:
        raster (RasterT): Source map.
        bbox (tuple[int, int, int, int]): Box inside the map.

    Returns:
        RasterT: Cropped map.

    Raises:
        ShapeError: Box is empty or leaves the map.
    """
    row, col, box_height, box_width = bbox
    inside = (
        row >= 0 and col >= 0 and box_height >= 1 and box_width >= 1 and
        row + box_height <= raster.height and col + box_width <= raster.width
    )
    if not inside:
        raise ShapeError(
            'bbox {0} outside map {1}'.format(tuple(bbox), raster.shape),
        )
    window = raster.values[row:row + box_height, col:col + box_width]
    return type(raster)(window)


def _area_weights(source: int, target: int) -> FloatArray:
    # target x source overlap fractions; each row sums to one
    source_edges = np.arange(source + 1) / source
    target_edges = np.arange(target + 1) / target
    low = np.maximum(target_edges[:-1, None], source_edges[None, :-1])
    high = np.minimum(target_edges[1:, None], source_edges[None, 1:])
    overlap = np.clip(high - low, 0, None)
    return np.asarray(
        overlap / overlap.sum(axis=1, keepdims=True), dtype=np.float64,
    )


def _bilinear(values: FloatArray, height: int, width: int) -> FloatArray:
    rows = _center_coordinates(values.shape[0], height)
    cols = _center_coordinates(values.shape[1], width)
    grid = np.meshgrid(rows, cols, indexing='ij')
    return np.asarray(
        ndimage.map_coordinates(values, grid, order=1, mode='nearest'),
        dtype=np.float64,
    )


def _center_coordinates(source: int, target: int) -> FloatArray:
    centers = (np.arange(target) + 0.5) * source / target - 0.5
    return np.clip(centers, 0, source - 1)


def check_same_shape(*rasters: Raster) -> None:
    """Check rasters share one geometry.

    Args:
        rasters (Raster): Rasters to compare.

    Raises:
        ShapeError: Geometries differ.
    """
    shapes = {raster.shape for raster in rasters}
    if len(shapes) > 1:
        raise ShapeError(
            'map geometries differ: {0}'.format(sorted(shapes)),
        )
