"""Object annotations.

One JSON object per line:
{"image_id": ..., "category": ..., "row": ..., "col": ..., "h": ..., "w": ...}
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Union

from fpsp_py.errors import ManifestError, ShapeError, ValidationError
from fpsp_py.selection.utils import ANNOTATION_KEYS


@dataclass(frozen=True)
class ObjectAnnotation(object):
    """Bounding box of one object instance.

    Categories are compared as strings; integer categories from files
    are converted.
    """

    image_id: str
    category: str
    row: int
    col: int
    height: int
    width: int

    def __post_init__(self) -> None:
        """Validate the box.

        Raises:
            ValidationError: Box is empty or starts outside the image.
        """
        if self.height < 1 or self.width < 1:
            raise ValidationError(
                'bbox of {0} in {1} must be at least 1x1'.format(
                    self.category, self.image_id,
                ),
            )
        if self.row < 0 or self.col < 0:
            raise ValidationError(
                'bbox of {0} in {1} has a negative origin'.format(
                    self.category, self.image_id,
                ),
            )

    @property
    def bbox(self) -> tuple[int, int, int, int]:
        """Box as (row, col, height, width).

        Returns:
            tuple[int, int, int, int]: Box.
        """
        return (self.row, self.col, self.height, self.width)

    def check_bounds(self, height: int, width: int) -> None:
        """Check the box lies inside an image.

        Args:
            height (int): Image d1.
            width (int): Image d2.

        Raises:
            ShapeError: Box leaves the image.
        """
        inside = (
            self.row + self.height <= height and
            self.col + self.width <= width
        )
        if not inside:
            raise ShapeError(
                'bbox {0} of {1} leaves image {2} ({3}x{4})'.format(
                    self.bbox, self.category, self.image_id, height, width,
                ),
            )


def read_annotations(path: Union[str, Path]) -> list[ObjectAnnotation]:
    """Read a JSON lines annotation file.

    Blank lines are ignored.

    Args:
        path (Union[str, Path]): Annotation file.

    Returns:
        list[ObjectAnnotation]: Annotations in file order.

    Raises:
        ManifestError: A line is not a valid annotation.
    """
    annotations = []
    with open(path) as annotation_file:
        for line_number, line in enumerate(annotation_file, start=1):
            if not line.strip():
                continue
            try:
                annotations.append(_from_record(json.loads(line)))
            except (ValueError, KeyError, TypeError) as exc:
                raise ManifestError(
                    '{0}:{1}: invalid annotation: {2}'.format(
                        path, line_number, exc,
                    ),
                ) from exc
    return annotations


def write_annotations(
    path: Union[str, Path],
    annotations: Iterable[ObjectAnnotation],
) -> None:
    """Write annotations as JSON lines.

    Args:
        path (Union[str, Path]): Destination.
        annotations (Iterable[ObjectAnnotation]): Annotations to write.
    """
    with open(path, 'w') as annotation_file:
        for annotation in annotations:
            values = (
                annotation.image_id,
                annotation.category,
                annotation.row,
                annotation.col,
                annotation.height,
                annotation.width,
            )
            record = dict(zip(ANNOTATION_KEYS, values))
            annotation_file.write(json.dumps(record) + '\n')


def _from_record(record: dict[str, Any]) -> ObjectAnnotation:
    return ObjectAnnotation(
        image_id=str(record['image_id']),
        category=str(record['category']),
        row=int(record['row']),
        col=int(record['col']),
        height=int(record['h']),
        width=int(record['w']),
    )
