"""Object-level PSM variance.

For object j in image n, every training person's PSM is cropped to the
object's box. q is the mean squared deviation of the crops from their
pixel-wise mean, averaged over pixels and persons.
"""

import logging
from collections import defaultdict
from typing import Iterable, Mapping, Sequence

import numpy as np

from fpsp_py.errors import MissingDataError
from fpsp_py.saliency.maps import SaliencyMap, check_same_shape, crop
from fpsp_py.selection.annotations import ObjectAnnotation
from fpsp_py.selection.results import ImageScore

logger = logging.getLogger(__name__)


def object_variance(crops: Sequence[SaliencyMap]) -> float:
    """Variance q of one object across persons.

    Args:
        crops (Sequence[SaliencyMap]): One crop per person, equal boxes.

    Returns:
        float: q; 0 when fewer than two persons are given.

    Raises:
        ShapeError: Crops differ in geometry.
    """
    if len(crops) < 2:
        logger.warning(
            'object variance needs two persons, got %d; using 0', len(crops),
        )
        return 0.0
    check_same_shape(*crops)
    stacked = np.stack([crop_map.values for crop_map in crops])
    deviations = stacked - stacked.mean(axis=0)
    return float(np.mean(deviations ** 2))


def image_scores(
    annotations: Iterable[ObjectAnnotation],
    psms: Mapping[str, Sequence[SaliencyMap]],
    image_ids: Iterable[str],
) -> dict[str, ImageScore]:
    """Per-image scores: sum over categories of the largest instance q.

    Args:
        annotations (Iterable[ObjectAnnotation]): Objects of all images.
        psms (Mapping[str, Sequence[SaliencyMap]]): Image id to the
            training persons' PSMs, in one fixed person order.
        image_ids (Iterable[str]): Images to score.

    Returns:
        dict[str, ImageScore]: Scores keyed by image id, in id order.

    Raises:
        MissingDataError: PSMs are missing or person counts disagree.
    """
    wanted = sorted(set(image_ids))
    by_image: dict[str, list[ObjectAnnotation]] = defaultdict(list)
    for annotation in annotations:
        by_image[annotation.image_id].append(annotation)

    person_counts = {len(psms[image]) for image in wanted if image in psms}
    if len(person_counts) > 1:
        raise MissingDataError(
            'PSM person counts differ across images: {0}'.format(
                sorted(person_counts),
            ),
        )

    scores = {}
    for image in wanted:
        per_category: dict[str, float] = {}
        objects = by_image.get(image, [])
        if objects and image not in psms:
            raise MissingDataError('no PSMs for image {0}'.format(image))
        for annotation in objects:
            crops = [
                crop(psm, annotation.bbox) for psm in psms[image]
            ]
            variance = object_variance(crops)
            per_category[annotation.category] = max(
                variance, per_category.get(annotation.category, 0),
            )
        scores[image] = ImageScore(
            total=float(sum(per_category.values())),
            per_category=per_category,
        )
    return scores
