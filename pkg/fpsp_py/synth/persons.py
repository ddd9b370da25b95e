"""Persons with latent gaze tendencies.

Every image shows up to K objects, each drawn as one separable Gaussian
blob at a fixed position. Person p's map for image n is

    clip(b + (h - b) * sum_k w[p, k] * a[n, k] * blob_k / m + noise, 0, 1)

with person mixing weights w, image content intensities a (zero for
absent objects), background level b, peak level h and m the largest
noiseless mixture over all persons and images. Noiseless maps are affine
in the content intensities. Target persons are generated exactly like
training persons.
"""

from dataclasses import dataclass

import numpy as np

from fpsp_py.saliency.maps import SaliencyMap
from fpsp_py.synth.config import SynthConfig
from fpsp_py.synth.utils import (
    BACKGROUND_LEVEL,
    BLOB_CENTER_MARGIN,
    BLOB_SIGMA_RANGE,
    CONTENT_RANGE,
    MIXING_RANGE,
    PEAK_LEVEL,
)
from fpsp_py.utils import FloatArray, make_rng


@dataclass(frozen=True)
class Blob(object):
    """Separable Gaussian blob in pixel units."""

    row: float
    col: float
    row_sigma: float
    col_sigma: float


@dataclass(frozen=True)
class SynthWorld(object):
    """Generated persons, images and maps.

    psms has shape (persons, images, d1, d2) with training persons first.
    """

    persons: tuple[str, ...]
    training: tuple[str, ...]
    targets: tuple[str, ...]
    image_ids: tuple[str, ...]
    blobs: tuple[Blob, ...]
    components: FloatArray
    content: FloatArray
    mixing: FloatArray
    psms: FloatArray

    def psm(self, person: str, image: str) -> SaliencyMap:
        """Map of one person on one image.

        Args:
            person (str): Person id.
            image (str): Image id.

        Returns:
            SaliencyMap: The map.
        """
        return SaliencyMap(
            self.psms[
                self.persons.index(person), self.image_ids.index(image)
            ],
        )


def person_ids(config: SynthConfig) -> tuple[tuple[str, ...], ...]:
    """Training and target person ids.

    Args:
        config (SynthConfig): Sizes.

    Returns:
        tuple[tuple[str, ...], ...]: (training ids, target ids).
    """
    training = tuple(
        'train{0:02d}'.format(index) for index in range(config.persons)
    )
    targets = tuple(
        'target{0:02d}'.format(index) for index in range(config.targets)
    )
    return (training, targets)


def image_ids(config: SynthConfig) -> tuple[str, ...]:
    """Image ids img000, img001, ...

    Args:
        config (SynthConfig): Sizes.

    Returns:
        tuple[str, ...]: One id per image.
    """
    return tuple('img{0:03d}'.format(index) for index in range(config.images))


def generate_persons(config: SynthConfig) -> SynthWorld:
    """Generate the latent components, persons and their maps.

    Args:
        config (SynthConfig): Sizes, noise and seed.

    Returns:
        SynthWorld: Everything drawn, bit-identical per seed.
    """
    rng = make_rng(config.seed)
    height, width = config.shape
    blobs = tuple(
        _draw_blob(rng, height, width) for _ in range(config.components)
    )
    components = np.stack([_render(blob, height, width) for blob in blobs])

    present = rng.random((config.images, config.components)) < config.presence
    strongest = rng.integers(config.components, size=config.images)
    present[np.arange(config.images), strongest] = True
    content = rng.uniform(*CONTENT_RANGE, size=present.shape) * present

    training, targets = person_ids(config)
    persons = training + targets
    mixing = rng.uniform(
        *MIXING_RANGE, size=(len(persons), config.components),
    )
    mixture = np.einsum('pk,nk,khw->pnhw', mixing, content, components)
    span = PEAK_LEVEL - BACKGROUND_LEVEL
    clean = BACKGROUND_LEVEL + span * mixture / mixture.max()
    noisy = clean + config.noise * rng.standard_normal(clean.shape)
    psms = np.clip(noisy, 0, 1)
    return SynthWorld(
        persons=persons,
        training=training,
        targets=targets,
        image_ids=image_ids(config),
        blobs=blobs,
        components=components,
        content=content,
        mixing=mixing,
        psms=psms,
    )


def _draw_blob(rng: np.random.Generator, height: int, width: int) -> Blob:
    low, high = BLOB_SIGMA_RANGE
    margin = BLOB_CENTER_MARGIN
    return Blob(
        row=rng.uniform(margin, 1 - margin) * (height - 1),
        col=rng.uniform(margin, 1 - margin) * (width - 1),
        row_sigma=max(rng.uniform(low, high) * height, 0.5),
        col_sigma=max(rng.uniform(low, high) * width, 0.5),
    )


def _render(blob: Blob, height: int, width: int) -> FloatArray:
    rows = (np.arange(height) - blob.row) / blob.row_sigma
    cols = (np.arange(width) - blob.col) / blob.col_sigma
    return np.outer(np.exp(-0.5 * rows ** 2), np.exp(-0.5 * cols ** 2))
