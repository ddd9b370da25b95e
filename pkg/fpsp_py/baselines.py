"""Baselines compared with the regression.

The similarity baseline weights training persons by how well their maps
correlate with the target's ground truth on the common images, through
a softmax with temperature. Equal weights give the uniform average,
which is the mean-of-PSMs USM the pipeline reports as its uniform
baseline.
"""

import logging
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy.special import softmax

from fpsp_py.errors import (
    ExcludedSampleError,
    MissingDataError,
    ShapeError,
    ValidationError,
)
from fpsp_py.evaluation.metrics import cross_correlation
from fpsp_py.saliency.maps import SaliencyMap, check_same_shape
from fpsp_py.utils import FloatArray, as_float_array

logger = logging.getLogger(__name__)

DEFAULT_TEMPERATURE = 0.1

# Weights must sum to one within this tolerance
WEIGHT_TOLERANCE = 1e-12

SIMILARITY_NOTE = (
    'softmax over mean CC with the target on common images; '
    'stand-in for the published similarity weighting'
)


@dataclass(frozen=True)
class PersonWeights(object):
    """Non-negative weights over training persons, summing to one."""

    persons: tuple[str, ...]
    weights: FloatArray

    def __post_init__(self) -> None:
        """Validate weights.

        Raises:
            ShapeError: One weight per person is required.
            ValidationError: Weights are negative or do not sum to one.
        """
        weights = as_float_array(self.weights)
        object.__setattr__(  # noqa: WPS609
            self, 'persons', tuple(self.persons),
        )
        object.__setattr__(self, 'weights', weights)  # noqa: WPS609
        if weights.shape != (len(self.persons),):
            raise ShapeError(
                '{0} weights for {1} persons'.format(
                    weights.shape, len(self.persons),
                ),
            )
        if np.any(weights < 0):
            raise ValidationError('person weights must be >= 0')
        if abs(weights.sum() - 1) > WEIGHT_TOLERANCE * max(len(weights), 1):
            raise ValidationError('person weights must sum to 1')


def similarity_weights(
    target_maps: Sequence[SaliencyMap],
    training_maps: Mapping[str, Sequence[SaliencyMap]],
    temperature: float = DEFAULT_TEMPERATURE,
) -> PersonWeights:
    """Weights from mean CC between each person and the target.

    Images where the correlation is undefined for some person are
    skipped for every person.

    Args:
        target_maps (Sequence[SaliencyMap]): Target ground truth per
            common image.
        training_maps (Mapping[str, Sequence[SaliencyMap]]): Person id to
            that person's maps on the same images, in the same order.
        temperature (float): Softmax temperature.

    Returns:
        PersonWeights: softmax(mean CC / temperature).

    Raises:
        MissingDataError: No person, or no image usable for all persons.
        ShapeError: Map lists are not aligned.
        ValidationError: Temperature is not positive.
    """
    if not temperature > 0:
        raise ValidationError('temperature must be > 0')
    persons = tuple(training_maps)
    if not persons:
        raise MissingDataError('no training persons')
    for person in persons:
        if len(training_maps[person]) != len(target_maps):
            raise ShapeError(
                'person {0} has {1} maps for {2} common images'.format(
                    person, len(training_maps[person]), len(target_maps),
                ),
            )

    correlations = []
    for index, target in enumerate(target_maps):
        try:
            correlations.append([
                cross_correlation(training_maps[person][index], target)
                for person in persons
            ])
        except ExcludedSampleError as exc:
            logger.warning('similarity skips common image %d: %s', index, exc)
    if not correlations:
        raise MissingDataError('every common image was excluded')
    similarity = np.mean(correlations, axis=0)
    weights = softmax(similarity / temperature)
    return PersonWeights(persons=persons, weights=weights / weights.sum())


def weighted_average_psm(
    weights: PersonWeights,
    maps: Mapping[str, SaliencyMap],
) -> SaliencyMap:
    """Pixel-wise sum of w_p * map_p.

    Args:
        weights (PersonWeights): Person weights.
        maps (Mapping[str, SaliencyMap]): Person id to map.

    Returns:
        SaliencyMap: Weighted average.

    Raises:
        MissingDataError: A weighted person has no map.
    """
    missing = [person for person in weights.persons if person not in maps]
    if missing:
        raise MissingDataError(
            'no map for persons {0}'.format(', '.join(missing)),
        )
    ordered = [maps[person] for person in weights.persons]
    check_same_shape(*ordered)
    stacked = np.stack([person_map.values for person_map in ordered])
    average = np.tensordot(weights.weights, stacked, axes=1)
    return SaliencyMap(np.maximum(average, 0))
