"""Tests for person weighting baselines."""


import numpy as np
import pytest

from fpsp_py.baselines import (
    PersonWeights,
    similarity_weights,
    weighted_average_psm,
)
from fpsp_py.errors import MissingDataError, ShapeError, ValidationError
from fpsp_py.saliency.maps import SaliencyMap
from fpsp_py.utils import make_rng

# Zero-mean orthogonal unit patterns on 2 x 2 maps
ROWS = np.array([[1.0, 1.0], [-1.0, -1.0]]) / 2
COLUMNS = np.array([[1.0, -1.0], [1.0, -1.0]]) / 2


def correlated_map(correlation: float) -> SaliencyMap:
    """Map whose CC with 1 + ROWS equals `correlation`.

    Args:
        correlation (float): Target correlation in [0, 1].

    Returns:
        SaliencyMap: Non-negative 2 x 2 map.
    """
    residual = np.sqrt(1 - correlation ** 2)
    return SaliencyMap(1 + correlation * ROWS + residual * COLUMNS)


def test_person_weights_validation() -> None:
    """Test weight checks."""
    with pytest.raises(ValidationError):
        PersonWeights(('a', 'b'), np.array([0.7, 0.7]))
    with pytest.raises(ValidationError):
        PersonWeights(('a', 'b'), np.array([1.5, -0.5]))
    with pytest.raises(ShapeError):
        PersonWeights(('a',), np.array([0.5, 0.5]))

    equal = PersonWeights(tuple('abcd'), np.full(4, 0.25))
    assert equal.persons == ('a', 'b', 'c', 'd')


def test_similarity_weights_softmax() -> None:
    """Test weights for similarities 0.8 and 0.4."""
    target = SaliencyMap(1 + ROWS)
    training = {
        'near': [correlated_map(0.8)] * 3,
        'far': [correlated_map(0.4)] * 3,
    }
    weights = similarity_weights([target] * 3, training, temperature=0.1)
    assert weights.persons == ('near', 'far')
    assert weights.weights[0] == pytest.approx(0.982, abs=1e-3)
    assert weights.weights.sum() == pytest.approx(1, abs=1e-12)

    single = similarity_weights([target], {'only': [correlated_map(0.3)]})
    assert single.weights[0] == pytest.approx(1.0)

    sharp = similarity_weights(
        [target],
        {'same': [target], 'other': [correlated_map(0.4)]},
        temperature=1e-3,
    )
    assert sharp.weights[0] == pytest.approx(1.0, abs=1e-12)


def test_similarity_weights_exclusions() -> None:
    """Test skipped images, exhausted data and bad arguments."""
    target = SaliencyMap(1 + ROWS)
    flat = SaliencyMap(np.ones((2, 2)))
    training = {
        'near': [correlated_map(0.8), flat],
        'far': [correlated_map(0.4), correlated_map(0.4)],
    }
    weights = similarity_weights([target, target], training)
    assert weights.weights[0] == pytest.approx(0.982, abs=1e-3)

    with pytest.raises(MissingDataError):
        similarity_weights([flat], {'near': [target]})
    with pytest.raises(MissingDataError):
        similarity_weights([target], {})
    with pytest.raises(ShapeError):
        similarity_weights([target, target], {'near': [target]})
    with pytest.raises(ValidationError):
        similarity_weights([target], {'near': [target]}, temperature=0)


def test_weighted_average_psm() -> None:
    """Test weighted averages of person maps."""
    first = SaliencyMap(np.array([[1.0, 0.0]]))
    second = SaliencyMap(np.array([[0.0, 1.0]]))
    maps = {'a': first, 'b': second}

    mixed = weighted_average_psm(
        PersonWeights(('a', 'b'), np.array([0.25, 0.75])), maps,
    )
    np.testing.assert_allclose(mixed.values, [[0.25, 0.75]])

    only = weighted_average_psm(
        PersonWeights(('a', 'b'), np.array([1.0, 0.0])), maps,
    )
    np.testing.assert_array_equal(only.values, first.values)

    rng = make_rng(12)
    same = SaliencyMap(rng.random((3, 3)))
    np.testing.assert_allclose(
        weighted_average_psm(
            PersonWeights(('x', 'y', 'z'), np.full(3, 1 / 3)),
            {'x': same, 'y': same, 'z': same},
        ).values,
        same.values,
    )

    with pytest.raises(MissingDataError):
        weighted_average_psm(
            PersonWeights(('a', 'c'), np.full(2, 0.5)), maps,
        )


def test_weighted_average_stays_within_person_range() -> None:
    """Test the pixel-wise bounds of weighted averages."""
    rng = make_rng(13)
    maps = {name: SaliencyMap(rng.random((4, 4))) for name in 'abc'}
    weights = PersonWeights(tuple('abc'), np.array([0.2, 0.3, 0.5]))
    average = weighted_average_psm(weights, maps).values
    stacked = np.stack([person.values for person in maps.values()])
    assert np.all(average >= stacked.min(axis=0) - 1e-12)
    assert np.all(average <= stacked.max(axis=0) + 1e-12)
