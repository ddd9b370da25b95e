"""Map and fixation file formats.

A map is stored as a JSON sidecar `<stem>.json`

    {"version": 1, "d1": 32, "d2": 24, "dtype": "f32",
     "normalization": "max", "raster": "<stem>.raw"}

next to a raw raster of d1 * d2 little-endian float32 values in
row-major order. Fixations are CSV with header `image_id,person_id,x,y`.
"""

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Union

import numpy as np

from fpsp_py.errors import ManifestError
from fpsp_py.saliency.fixations import FixationSet
from fpsp_py.saliency.maps import DifferenceMap, Raster, SaliencyMap
from fpsp_py.saliency.utils import (
    FIXATION_COLUMNS,
    MAP_DTYPE,
    MAP_FORMAT_VERSION,
    NORMALIZATION_DIFFERENCE,
    NORMALIZATION_MAX,
    NORMALIZATION_NONE,
    RASTER_SUFFIX,
)
from fpsp_py.utils import FloatArray

PathLike = Union[str, Path]

_RASTER_DTYPE = np.dtype('<f4')


@dataclass(frozen=True)
class MapHeader(object):
    """Parsed map sidecar."""

    sidecar: Path
    raster: Path
    height: int
    width: int
    normalization: str

    @property
    def expected_bytes(self) -> int:
        """Raster size implied by the sidecar.

        Returns:
            int: d1 * d2 * 4.
        """
        return self.height * self.width * _RASTER_DTYPE.itemsize


def save_map(
    sidecar: PathLike,
    raster: Raster,
    normalization: str = NORMALIZATION_MAX,
) -> Path:
    """Write a map as sidecar plus raw raster.

    Args:
        sidecar (PathLike): Sidecar path ending in `.json`.
        raster (Raster): Map to write.
        normalization (str): Normalization tag.

    Returns:
        Path: Sidecar path.
    """
    sidecar = Path(sidecar)
    sidecar.parent.mkdir(parents=True, exist_ok=True)
    raster_path = sidecar.with_suffix(RASTER_SUFFIX)
    header = {
        'version': MAP_FORMAT_VERSION,
        'd1': raster.height,
        'd2': raster.width,
        'dtype': MAP_DTYPE,
        'normalization': normalization,
        'raster': raster_path.name,
    }
    sidecar.write_text(json.dumps(header, sort_keys=True))
    raster_path.write_bytes(raster.values.astype(_RASTER_DTYPE).tobytes())
    return sidecar


def read_map_header(sidecar: PathLike) -> MapHeader:
    """Parse a sidecar and check the raster file size.

    Args:
        sidecar (PathLike): Sidecar path.

    Returns:
        MapHeader: Parsed header.

    Raises:
        ManifestError: Missing file, bad sidecar or wrong raster size.
    """
    sidecar = Path(sidecar)
    if not sidecar.is_file():
        raise ManifestError('map sidecar not found: {0}'.format(sidecar))
    try:
        content = json.loads(sidecar.read_text())
        header = MapHeader(
            sidecar=sidecar,
            raster=sidecar.parent / content['raster'],
            height=int(content['d1']),
            width=int(content['d2']),
            normalization=str(
                content.get('normalization', NORMALIZATION_NONE),
            ),
        )
        version = content['version']
        dtype = content['dtype']
    except (ValueError, KeyError, TypeError) as exc:
        raise ManifestError(
            'invalid map sidecar {0}: {1}'.format(sidecar, exc),
        ) from exc
    if version != MAP_FORMAT_VERSION or dtype != MAP_DTYPE:
        raise ManifestError(
            'unsupported map format in {0}: version {1}, dtype {2}'.format(
                sidecar, version, dtype,
            ),
        )
    if not header.raster.is_file():
        raise ManifestError(
            'map raster not found: {0}'.format(header.raster),
        )
    actual = header.raster.stat().st_size
    if actual != header.expected_bytes:
        raise ManifestError(
            'raster {0} has {1} bytes, expected {2} for {3}x{4}'.format(
                header.raster,
                actual,
                header.expected_bytes,
                header.height,
                header.width,
            ),
        )
    return header


def load_raster(header: MapHeader) -> FloatArray:
    """Read raster values described by a header.

    Args:
        header (MapHeader): Parsed sidecar.

    Returns:
        FloatArray: d1 x d2 float64 values.
    """
    flat = np.frombuffer(header.raster.read_bytes(), dtype=_RASTER_DTYPE)
    return flat.astype(np.float64).reshape(header.height, header.width)


def load_map(sidecar: PathLike) -> SaliencyMap:
    """Read a saliency map.

    Args:
        sidecar (PathLike): Sidecar path.

    Returns:
        SaliencyMap: The map.
    """
    return SaliencyMap(load_raster(read_map_header(sidecar)))


def load_difference_map(sidecar: PathLike) -> DifferenceMap:
    """Read a difference map.

    Args:
        sidecar (PathLike): Sidecar path.

    Returns:
        DifferenceMap: The map.
    """
    header = read_map_header(sidecar)
    if header.normalization != NORMALIZATION_DIFFERENCE:
        raise ManifestError(
            '{0} is not a difference map'.format(header.sidecar),
        )
    return DifferenceMap(load_raster(header))


def write_fixations(
    path: PathLike,
    fixation_sets: Iterable[FixationSet],
) -> None:
    """Write fixations as CSV.

    Args:
        path (PathLike): CSV path.
        fixation_sets (Iterable[FixationSet]): Sets to write, in order.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', newline='') as csv_file:
        writer = csv.writer(csv_file, lineterminator='\n')
        writer.writerow(FIXATION_COLUMNS)
        for fixations in fixation_sets:
            for x, y in fixations.points:
                writer.writerow([
                    fixations.image_id, fixations.person_id, repr(x), repr(y),
                ])


def check_fixation_header(path: PathLike) -> None:
    """Check a fixation CSV exists and starts with the expected header.

    Args:
        path (PathLike): CSV path.

    Raises:
        ManifestError: Missing file or wrong header.
    """
    path = Path(path)
    if not path.is_file():
        raise ManifestError('fixation file not found: {0}'.format(path))
    with path.open(newline='') as csv_file:
        header = next(csv.reader(csv_file), None)
    if header is None or tuple(header) != FIXATION_COLUMNS:
        raise ManifestError(
            '{0}: expected header {1}, got {2}'.format(
                path, ','.join(FIXATION_COLUMNS), header,
            ),
        )


def read_fixations(path: PathLike) -> list[FixationSet]:
    """Read a fixation CSV, grouping rows by (image, person).

    Groups keep the order of their first row.

    Args:
        path (PathLike): CSV path.

    Returns:
        list[FixationSet]: One set per (image, person) pair.

    Raises:
        ManifestError: Bad header or unparsable row.
    """
    check_fixation_header(path)
    grouped: dict[tuple[str, str], list[tuple[float, float]]] = {}
    with Path(path).open(newline='') as csv_file:
        reader = csv.DictReader(csv_file)
        for line_number, row in enumerate(reader, start=2):
            try:
                point = (float(row['x']), float(row['y']))
            except (TypeError, ValueError) as exc:
                raise ManifestError(
                    '{0}:{1}: bad fixation row {2}'.format(
                        path, line_number, row,
                    ),
                ) from exc
            key = (row['image_id'], row['person_id'])
            grouped.setdefault(key, []).append(point)
    return [
        FixationSet(image_id=image, person_id=person, points=tuple(points))
        for (image, person), points in grouped.items()
    ]
