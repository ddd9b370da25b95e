"""Tests utilities.

Contains random selection instances and a brute-force coverage oracle.
"""


import itertools

import numpy as np

from fpsp_py.selection.annotations import ObjectAnnotation
from fpsp_py.selection.results import ImageScore


def random_instance(
    rng: np.random.Generator,
    images: int,
    categories: int,
) -> tuple[dict[str, ImageScore], list[ObjectAnnotation]]:
    """Draw scores and up to three categories per image.

    Args:
        rng (np.random.Generator): Generator.
        images (int): Number of images.
        categories (int): Number of categories.

    Returns:
        tuple[dict[str, ImageScore], list[ObjectAnnotation]]: Instance.
    """
    scores = {}
    annotations = []
    for index in range(images):
        image = 'img{0:02d}'.format(index)
        scores[image] = ImageScore(total=float(rng.random()))
        drawn = rng.choice(categories, size=rng.integers(0, 4))
        for category in drawn:
            annotations.append(
                ObjectAnnotation(image, 'c{0}'.format(category), 0, 0, 1, 1),
            )
    return scores, annotations


def coverage(
    images: tuple[str, ...],
    annotations: list[ObjectAnnotation],
) -> int:
    """Count categories shown in some of the images.

    Args:
        images (tuple[str, ...]): Chosen images.
        annotations (list[ObjectAnnotation]): Annotations.

    Returns:
        int: Covered category count.
    """
    chosen = set(images)
    return len({
        annotation.category
        for annotation in annotations
        if annotation.image_id in chosen
    })


def best_coverage(
    images: list[str],
    annotations: list[ObjectAnnotation],
    count: int,
) -> int:
    """Largest coverage of any `count` images.

    Args:
        images (list[str]): Candidate images.
        annotations (list[ObjectAnnotation]): Annotations.
        count (int): Subset size.

    Returns:
        int: Maximum coverage.
    """
    return max(
        coverage(subset, annotations)
        for subset in itertools.combinations(images, count)
    )
