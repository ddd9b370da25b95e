"""Common image selection under category coverage.

Selection has two stages. A coverage core of at most min(I, J) images
is chosen to cover as many categories as possible, preferring the
largest score sum and then the smallest ids. Remaining slots go to the
highest scoring images left. The core is found exhaustively over one
best image per non-dominated category set when the number of candidate
cores is at most `exact_limit`, and greedily otherwise: repeatedly take
the image adding the most uncovered categories, then the highest score,
then the smallest id.
"""

import itertools
import logging
import math
from collections import defaultdict
from typing import Iterable, Mapping, Sequence

from fpsp_py.errors import ValidationError
from fpsp_py.selection.annotations import ObjectAnnotation
from fpsp_py.selection.results import ImageScore, SelectionResult
from fpsp_py.selection.utils import DEFAULT_EXACT_LIMIT

logger = logging.getLogger(__name__)

Categories = frozenset[str]


def select_common_images(
    scores: Mapping[str, ImageScore],
    annotations: Iterable[ObjectAnnotation],
    count: int,
    exact_limit: int = DEFAULT_EXACT_LIMIT,
) -> SelectionResult:
    """Choose `count` common images.

    Args:
        scores (Mapping[str, ImageScore]): Scores of candidate images.
        annotations (Iterable[ObjectAnnotation]): Objects of the images.
        count (int): Number of images I.
        exact_limit (int): Largest number of cores searched exhaustively.

    Returns:
        SelectionResult: Chosen images, core first, then by score.

    Raises:
        ValidationError: count is not in 1..len(scores).
    """
    if count < 1 or count > len(scores):
        raise ValidationError(
            'cannot select {0} of {1} images'.format(count, len(scores)),
        )
    totals = {image: score.total for image, score in scores.items()}
    categories: dict[str, set[str]] = defaultdict(set)
    for annotation in annotations:
        if annotation.image_id in totals:
            categories[annotation.image_id].add(annotation.category)
    signatures = {
        image: frozenset(categories.get(image, ())) for image in totals
    }

    core = _coverage_core(signatures, totals, count, exact_limit)
    rest = sorted(
        (image for image in totals if image not in core),
        key=lambda image: (-totals[image], image),
    )
    chosen = _by_score(core, totals) + rest[:count - len(core)]
    covered = set().union(*(signatures[image] for image in chosen))
    logger.info(
        'selected %d images covering %d categories',
        len(chosen), len(covered),
    )
    return SelectionResult(
        image_ids=tuple(chosen),
        scores={image: totals[image] for image in chosen},
        covered_categories=tuple(sorted(covered)),
    )


def _coverage_core(
    signatures: Mapping[str, Categories],
    totals: Mapping[str, float],
    count: int,
    exact_limit: int,
) -> list[str]:
    candidates = _representatives(signatures, totals)
    universe = set().union(*signatures.values())
    size = min(count, len(candidates), len(universe))
    if size == 0:
        return []
    if math.comb(len(candidates), size) > exact_limit:
        logger.info(
            'coverage search over %d candidates is too large; using greedy',
            len(candidates),
        )
        return _greedy_core(signatures, totals, size)

    best: Sequence[str] = ()
    best_key = (-1, -math.inf)
    for combination in itertools.combinations(candidates, size):
        covered = set().union(*(signatures[image] for image in combination))
        key = (
            len(covered),
            math.fsum(totals[image] for image in combination),
        )
        if key > best_key:
            best, best_key = combination, key
    return list(best)


def _representatives(
    signatures: Mapping[str, Categories],
    totals: Mapping[str, float],
) -> list[str]:
    # best image per category set, skipping sets strictly inside another
    best: dict[Categories, str] = {}
    for image in sorted(signatures, key=lambda key: (-totals[key], key)):
        signature = signatures[image]
        if signature and signature not in best:
            best[signature] = image
    kept = [
        image for signature, image in best.items()
        if not any(signature < other for other in best)
    ]
    return sorted(kept)


def _greedy_core(
    signatures: Mapping[str, Categories],
    totals: Mapping[str, float],
    size: int,
) -> list[str]:
    chosen: list[str] = []
    covered: set[str] = set()
    remaining = sorted(signatures)
    for _ in range(size):
        pick = min(
            remaining,
            key=lambda image: (
                -len(signatures[image] - covered), -totals[image], image,
            ),
        )
        chosen.append(pick)
        covered |= signatures[pick]
        remaining.remove(pick)
    return chosen


def _by_score(images: Iterable[str], totals: Mapping[str, float]) -> list[str]:
    return sorted(images, key=lambda image: (-totals[image], image))
