"""Regression instances with known CP weights.

A planted world is also a dataset: training persons' maps are the
random inputs and each target person's maps are the contraction of
those inputs with that target's planted weights, divided by one
constant per target so they stay within [0, 1].
"""

from dataclasses import dataclass

import numpy as np

from fpsp_py.errors import ValidationError
from fpsp_py.regression.als import predict_samples
from fpsp_py.regression.config import TrainingSet
from fpsp_py.saliency.maps import SaliencyMap
from fpsp_py.synth.config import SynthConfig
from fpsp_py.synth.persons import image_ids, person_ids
from fpsp_py.tensors.cp import CpFactors
from fpsp_py.tensors.dense import DenseTensor
from fpsp_py.utils import FloatArray, make_rng


@dataclass(frozen=True)
class PlantedWorld(object):
    """Training inputs and target maps produced by planted weights.

    inputs has shape (images, training persons, d1, d2); target_maps has
    shape (targets, images, d1, d2) and scales[t] is the constant the
    contraction for target t was divided by.
    """

    training: tuple[str, ...]
    targets: tuple[str, ...]
    image_ids: tuple[str, ...]
    inputs: FloatArray
    weights: tuple[CpFactors, ...]
    scales: tuple[float, ...]
    target_maps: FloatArray

    @property
    def persons(self) -> tuple[str, ...]:
        """Training then target person ids.

        Returns:
            tuple[str, ...]: All persons.
        """
        return self.training + self.targets

    def psm(self, person: str, image: str) -> SaliencyMap:
        """Map of one person on one image.

        Args:
            person (str): Person id.
            image (str): Image id.

        Returns:
            SaliencyMap: Input map for training persons, planted target
                map for target persons.
        """
        index = self.image_ids.index(image)
        if person in self.targets:
            return SaliencyMap(
                self.target_maps[self.targets.index(person), index],
            )
        return SaliencyMap(self.inputs[index, self.training.index(person)])


def plant_regression_instance(
    config: SynthConfig,
) -> tuple[TrainingSet, CpFactors]:
    """Draw rank-R* weights, inputs, and the targets they produce.

    Uses config.persons as P, config.shape as the map shape,
    config.images as I and config.planted_rank as R*. Factors and
    inputs are uniform on [0, 1), so targets are non-negative; Gaussian
    noise of std config.noise is added and negatives are clipped.

    Args:
        config (SynthConfig): Sizes, noise and seed.

    Returns:
        tuple[TrainingSet, CpFactors]: Samples and the planted weights.

    Raises:
        ValidationError: R* exceeds a weight extent.
    """
    _check_rank(config)
    rng = make_rng(config.seed)
    weights = _draw_weights(rng, config)
    inputs = rng.random((config.images, config.persons, *config.shape))
    data = TrainingSet(
        inputs=DenseTensor(inputs),
        targets=DenseTensor(_noisy_targets(rng, config, weights, inputs)),
    )
    return (data, weights)


def plant_persons(config: SynthConfig) -> PlantedWorld:
    """Draw inputs and one set of planted weights per target person.

    Args:
        config (SynthConfig): Sizes, noise and seed; config.targets must
            be at least one.

    Returns:
        PlantedWorld: Everything drawn, bit-identical per seed.

    Raises:
        ValidationError: No target person or R* exceeds a weight extent.
    """
    _check_rank(config)
    if config.targets < 1:
        raise ValidationError('a planted world needs a target person')
    rng = make_rng(config.seed)
    inputs = rng.random((config.images, config.persons, *config.shape))
    weights = []
    scales = []
    target_maps = []
    for _ in range(config.targets):
        planted = _draw_weights(rng, config)
        targets = _noisy_targets(rng, config, planted, inputs)
        scale = float(targets.max())
        weights.append(planted)
        scales.append(scale)
        target_maps.append(targets / scale)
    training, target_ids = person_ids(config)
    return PlantedWorld(
        training=training,
        targets=target_ids,
        image_ids=image_ids(config),
        inputs=inputs,
        weights=tuple(weights),
        scales=tuple(scales),
        target_maps=np.stack(target_maps),
    )


def _check_rank(config: SynthConfig) -> None:
    height, width = config.shape
    if config.planted_rank > min(config.persons, height, width):
        raise ValidationError(
            'planted rank {0} exceeds extents {1}'.format(
                config.planted_rank, (config.persons, height, width),
            ),
        )


def _draw_weights(rng: np.random.Generator, config: SynthConfig) -> CpFactors:
    height, width = config.shape
    shape = (config.persons, height, width, height, width)
    return CpFactors(tuple(
        rng.random((extent, config.planted_rank)) for extent in shape
    ))


def _noisy_targets(
    rng: np.random.Generator,
    config: SynthConfig,
    weights: CpFactors,
    inputs: FloatArray,
) -> FloatArray:
    clean = predict_samples(weights, inputs)
    noisy = clean + config.noise * rng.standard_normal(clean.shape)
    return np.maximum(noisy, 0)
