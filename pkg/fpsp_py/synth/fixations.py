"""Fixation sampling from saliency maps."""

import numpy as np

from fpsp_py.errors import ValidationError
from fpsp_py.saliency.fixations import FixationSet
from fpsp_py.saliency.maps import SaliencyMap
from fpsp_py.utils import make_rng


def sample_fixations(
    psm: SaliencyMap,
    count: int,
    seed: int,
    image_id: str = '',
    person_id: str = '',
) -> FixationSet:
    """Draw fixations with probability proportional to map mass.

    Pixels are drawn by inverse CDF over the row-major flattened map and
    reported at their centers.

    Args:
        psm (SaliencyMap): Source map, not all zero.
        count (int): Number of fixations.
        seed (int): Seed.
        image_id (str): Image id stored in the set.
        person_id (str): Person id stored in the set.

    Returns:
        FixationSet: Sampled fixations.

    Raises:
        ValidationError: Map is all zero or count < 1.
    """
    if count < 1:
        raise ValidationError('fixation count must be >= 1')
    if psm.is_zero:
        raise ValidationError('cannot sample fixations from a zero map')
    cdf = np.cumsum(psm.values.ravel())
    draws = make_rng(seed).random(count) * cdf[-1]
    flat = np.minimum(np.searchsorted(cdf, draws, side='right'), cdf.size - 1)
    rows, cols = np.divmod(flat, psm.width)
    return FixationSet(
        image_id=image_id,
        person_id=person_id,
        points=tuple(zip(cols + 0.5, rows + 0.5)),
    )
