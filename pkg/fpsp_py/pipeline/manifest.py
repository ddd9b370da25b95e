"""Dataset manifests and the dataset handle.

A manifest is JSON, paths relative to its directory:

    {"version": 1, "usm": "mean" | "provided",
     "psm_encoding": "psm" | "difference",
     "annotations": "annotations.jsonl", "fixation_sigma": null,
     "images": [{"id": "img000", "d1": 32, "d2": 24, "usm": "..."}],
     "persons": [{"id": "p00", "role": "training" | "target" | null,
                  "maps": {"img000": "maps/p00/img000.json"},
                  "fixations": "fixations/p00.csv"}]}

`usm` per image is required when the manifest says "provided". With
"difference" encoding, training maps are difference maps against the
provided USM.
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence, Union

from fpsp_py.errors import (
    ManifestError,
    MissingDataError,
    ShapeError,
    StrictModeViolation,
    ValidationError,
)
from fpsp_py.pipeline.utils import (
    ENCODING_DIFFERENCE,
    ENCODING_PSM,
    MANIFEST_VERSION,
    PURPOSE_EVALUATE,
    PURPOSE_FIT,
    ROLE_TARGET,
    ROLE_TRAINING,
    TARGET_SOURCE_AUTO,
    TARGET_SOURCE_FIXATIONS,
    TARGET_SOURCE_MAPS,
    USM_MEAN,
    USM_PROVIDED,
)
from fpsp_py.saliency.fixations import FixationSet, gt_map_from_fixations
from fpsp_py.saliency.io import (
    check_fixation_header,
    load_difference_map,
    load_map,
    read_fixations,
    read_map_header,
)
from fpsp_py.saliency.maps import SaliencyMap, compose_psm, usm_mean
from fpsp_py.selection.annotations import ObjectAnnotation, read_annotations

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


@dataclass(frozen=True)
class ImageRecord(object):
    """One image of the dataset."""

    image_id: str
    height: int
    width: int
    usm: Optional[Path] = None

    @property
    def shape(self) -> tuple[int, int]:
        """Native geometry (d1, d2).

        Returns:
            tuple[int, int]: Shape.
        """
        return (self.height, self.width)


@dataclass(frozen=True)
class PersonRecord(object):
    """One person: role, map rasters and fixation file."""

    person_id: str
    role: Optional[str]
    maps: dict[str, Path] = field(default_factory=dict)
    fixations: Optional[Path] = None


@dataclass(frozen=True)
class DatasetManifest(object):
    """Parsed manifest with absolute paths."""

    path: Path
    version: int
    images: tuple[ImageRecord, ...]
    persons: tuple[PersonRecord, ...]
    usm_source: str = USM_MEAN
    psm_encoding: str = ENCODING_PSM
    annotations: Optional[Path] = None
    fixation_sigma: Optional[float] = None

    def image(self, image_id: str) -> ImageRecord:
        """Look up an image.

        Args:
            image_id (str): Image id.

        Returns:
            ImageRecord: The record.

        Raises:
            MissingDataError: Unknown image.
        """
        for record in self.images:
            if record.image_id == image_id:
                return record
        raise MissingDataError('unknown image {0}'.format(image_id))

    def person(self, person_id: str) -> PersonRecord:
        """Look up a person.

        Args:
            person_id (str): Person id.

        Returns:
            PersonRecord: The record.

        Raises:
            MissingDataError: Unknown person.
        """
        for record in self.persons:
            if record.person_id == person_id:
                return record
        raise MissingDataError('unknown person {0}'.format(person_id))


@dataclass(frozen=True)
class TargetAccess(object):
    """One read of target-person data."""

    person: str
    image: str
    purpose: str


def parse_manifest(path: PathLike) -> DatasetManifest:
    """Parse a manifest without touching referenced files.

    Args:
        path (PathLike): Manifest JSON.

    Returns:
        DatasetManifest: Parsed manifest.

    Raises:
        ManifestError: Unreadable manifest, unknown version or bad field.
    """
    path = Path(path)
    if not path.is_file():
        raise ManifestError('manifest not found: {0}'.format(path))
    try:
        content = json.loads(path.read_text())
    except ValueError as exc:
        raise ManifestError(
            '{0}: manifest is not JSON: {1}'.format(path, exc),
        ) from exc
    version = content.get('version')
    if version != MANIFEST_VERSION:
        raise ManifestError(
            '{0}: unsupported manifest version {1!r}'.format(path, version),
        )
    root = path.parent
    try:
        manifest = DatasetManifest(
            path=path,
            version=version,
            images=tuple(
                _image_record(root, record) for record in content['images']
            ),
            persons=tuple(
                _person_record(root, record)
                for record in content['persons']
            ),
            usm_source=content.get('usm', USM_MEAN),
            psm_encoding=content.get('psm_encoding', ENCODING_PSM),
            annotations=_optional_path(root, content.get('annotations')),
            fixation_sigma=content.get('fixation_sigma'),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ManifestError(
            '{0}: invalid manifest field: {1}'.format(path, exc),
        ) from exc
    _check_vocabulary(manifest)
    return manifest


def ingest(
    path: PathLike,
    strict: bool = True,
    target_source: str = TARGET_SOURCE_AUTO,
) -> 'Dataset':
    """Parse and validate a manifest and every file it references.

    Rasters are dimension-checked but not loaded.

    Args:
        path (PathLike): Manifest JSON.
        strict (bool): Restrict target-person data to common images.
        target_source (str): `auto`, `maps` or `fixations`.

    Returns:
        Dataset: Handle with lazy raster loading.

    Raises:
        ManifestError: Missing file, dimension mismatch or bad format,
            naming the offending path.
    """
    manifest = parse_manifest(path)
    _check_files(manifest)
    logger.info(
        'ingested %s: %d images, %d persons',
        manifest.path, len(manifest.images), len(manifest.persons),
    )
    return Dataset(manifest, strict=strict, target_source=target_source)


class Dataset(object):  # noqa: WPS214
    """Validated dataset with lazy raster loading.

    Every read of target-person data is recorded in `accesses`. In strict
    mode, reads for fitting are only allowed on the common images.
    """

    def __init__(
        self,
        manifest: DatasetManifest,
        strict: bool = True,
        target_source: str = TARGET_SOURCE_AUTO,
    ):
        """Init dataset handle.

        Args:
            manifest (DatasetManifest): Validated manifest.
            strict (bool): Restrict target data for fitting to common
                images.
            target_source (str): `auto`, `maps` or `fixations`.
        """
        self.manifest = manifest
        self.strict = strict
        self.target_source = target_source
        self.accesses: list[TargetAccess] = []
        self._common: frozenset[str] = frozenset()
        self._maps: dict[Path, SaliencyMap] = {}
        self._usms: dict[str, SaliencyMap] = {}
        self._fixations: dict[str, dict[str, FixationSet]] = {}

    @property
    def image_ids(self) -> tuple[str, ...]:
        """Image ids in manifest order.

        Returns:
            tuple[str, ...]: Ids.
        """
        return tuple(record.image_id for record in self.manifest.images)

    @property
    def person_ids(self) -> tuple[str, ...]:
        """Person ids in manifest order.

        Returns:
            tuple[str, ...]: Ids.
        """
        return tuple(record.person_id for record in self.manifest.persons)

    def persons_with_role(self, role: str) -> tuple[str, ...]:
        """Persons the manifest assigns to a role.

        Args:
            role (str): `training` or `target`.

        Returns:
            tuple[str, ...]: Ids in manifest order.
        """
        return tuple(
            record.person_id for record in self.manifest.persons
            if record.role == role
        )

    def set_common_images(self, images: Iterable[str]) -> None:
        """Declare the images target persons gaze at.

        Args:
            images (Iterable[str]): Common image ids.
        """
        self._common = frozenset(images)

    def annotations(self) -> list[ObjectAnnotation]:
        """Object annotations, empty when the manifest has none.

        Returns:
            list[ObjectAnnotation]: Annotations.
        """
        if self.manifest.annotations is None:
            return []
        return read_annotations(self.manifest.annotations)

    def training_psm(self, person: str, image: str) -> SaliencyMap:
        """PSM of a training person, composed from M + U when encoded so.

        Args:
            person (str): Training person.
            image (str): Image.

        Returns:
            SaliencyMap: Map at native resolution.

        Raises:
            MissingDataError: The person has no map for the image.
        """
        sidecar = self._map_path(person, image)
        if self.manifest.psm_encoding == ENCODING_DIFFERENCE:
            return compose_psm(
                load_difference_map(sidecar), self._provided_usm(image),
            )
        return self._load(sidecar)

    def usm(self, image: str, training: Sequence[str]) -> SaliencyMap:
        """Universal map: provided raster or mean of training PSMs.

        Args:
            image (str): Image.
            training (Sequence[str]): Training persons for the mean.

        Returns:
            SaliencyMap: USM at native resolution.
        """
        if self.manifest.usm_source == USM_PROVIDED:
            return self._provided_usm(image)
        return usm_mean([
            self.training_psm(person, image) for person in training
        ])

    def has_target_data(self, person: str, image: str) -> bool:
        """Whether target data for the pair exists, without reading it.

        Args:
            person (str): Target person.
            image (str): Image.

        Returns:
            bool: True when a map or fixations are available.
        """
        record = self.manifest.person(person)
        if self._use_maps(record, image):
            return True
        if record.fixations is None or self._denies_fixations():
            return False
        return image in self._person_fixations(record)

    def target_map(self, person: str, image: str, purpose: str) -> SaliencyMap:
        """Ground-truth map of a target person.

        Args:
            person (str): Target person.
            image (str): Image.
            purpose (str): `fit` or `evaluate`.

        Returns:
            SaliencyMap: Provided map or one built from fixations.

        Raises:
            StrictModeViolation: Strict mode and a fit read outside the
                common images.
            MissingDataError: No data for the pair.
            ValidationError: Unknown purpose.
        """
        if purpose not in {PURPOSE_FIT, PURPOSE_EVALUATE}:
            raise ValidationError('unknown purpose {0!r}'.format(purpose))
        if self.strict and purpose == PURPOSE_FIT and (
            image not in self._common
        ):
            raise StrictModeViolation(
                'strict mode: {0} may only be read on common images, '
                'not {1}'.format(person, image),
            )
        self.accesses.append(TargetAccess(person, image, purpose))
        record = self.manifest.person(person)
        if self._use_maps(record, image):
            return self._load(record.maps[image])
        if record.fixations is not None and not self._denies_fixations():
            fixations = self._person_fixations(record).get(image)
            if fixations is not None:
                image_record = self.manifest.image(image)
                return gt_map_from_fixations(
                    fixations,
                    image_record.height,
                    image_record.width,
                    self.manifest.fixation_sigma,
                )
        raise MissingDataError(
            'no data for target {0} on image {1}'.format(person, image),
        )

    def _use_maps(self, record: PersonRecord, image: str) -> bool:
        if self.target_source == TARGET_SOURCE_FIXATIONS:
            return False
        return image in record.maps

    def _denies_fixations(self) -> bool:
        return self.target_source == TARGET_SOURCE_MAPS

    def _map_path(self, person: str, image: str) -> Path:
        record = self.manifest.person(person)
        if image not in record.maps:
            raise MissingDataError(
                'no map for person {0} on image {1}'.format(person, image),
            )
        return record.maps[image]

    def _load(self, sidecar: Path) -> SaliencyMap:
        if sidecar not in self._maps:
            self._maps[sidecar] = load_map(sidecar)
        return self._maps[sidecar]

    def _provided_usm(self, image: str) -> SaliencyMap:
        record = self.manifest.image(image)
        if record.usm is None:
            raise MissingDataError('no USM for image {0}'.format(image))
        if image not in self._usms:
            self._usms[image] = load_map(record.usm)
        return self._usms[image]

    def _person_fixations(
        self,
        record: PersonRecord,
    ) -> dict[str, FixationSet]:
        if record.person_id not in self._fixations:
            by_image = {}
            if record.fixations is not None:
                for fixations in read_fixations(record.fixations):
                    if fixations.person_id == record.person_id:
                        by_image[fixations.image_id] = fixations
            self._fixations[record.person_id] = by_image
        return self._fixations[record.person_id]


def _image_record(root: Path, record: dict[str, Any]) -> ImageRecord:
    image = ImageRecord(
        image_id=str(record['id']),
        height=int(record['d1']),
        width=int(record['d2']),
        usm=_optional_path(root, record.get('usm')),
    )
    if image.height < 1 or image.width < 1:
        raise ValueError('image {0} has empty extent'.format(image.image_id))
    return image


def _person_record(root: Path, record: dict[str, Any]) -> PersonRecord:
    return PersonRecord(
        person_id=str(record['id']),
        role=record.get('role'),
        maps={
            str(image): root / sidecar
            for image, sidecar in record.get('maps', {}).items()
        },
        fixations=_optional_path(root, record.get('fixations')),
    )


def _optional_path(root: Path, relative: Optional[str]) -> Optional[Path]:
    if relative is None:
        return None
    return root / relative


def _check_vocabulary(manifest: DatasetManifest) -> None:
    path = manifest.path
    if manifest.usm_source not in {USM_MEAN, USM_PROVIDED}:
        raise ManifestError(
            '{0}: unknown usm source {1!r}'.format(path, manifest.usm_source),
        )
    if manifest.psm_encoding not in {ENCODING_PSM, ENCODING_DIFFERENCE}:
        raise ManifestError(
            '{0}: unknown psm encoding {1!r}'.format(
                path, manifest.psm_encoding,
            ),
        )
    if manifest.psm_encoding == ENCODING_DIFFERENCE and (
        manifest.usm_source != USM_PROVIDED
    ):
        raise ManifestError(
            '{0}: difference encoding needs provided USMs'.format(path),
        )
    for person in manifest.persons:
        if person.role not in {None, ROLE_TRAINING, ROLE_TARGET}:
            raise ManifestError(
                '{0}: person {1} has unknown role {2!r}'.format(
                    path, person.person_id, person.role,
                ),
            )
    ids = [record.image_id for record in manifest.images]
    if len(set(ids)) != len(ids):
        raise ManifestError('{0}: duplicate image ids'.format(path))
    persons = [record.person_id for record in manifest.persons]
    if len(set(persons)) != len(persons):
        raise ManifestError('{0}: duplicate person ids'.format(path))


def _check_files(manifest: DatasetManifest) -> None:
    shapes = {record.image_id: record.shape for record in manifest.images}
    for image in manifest.images:
        if manifest.usm_source == USM_PROVIDED:
            if image.usm is None:
                raise ManifestError(
                    '{0}: image {1} has no usm raster'.format(
                        manifest.path, image.image_id,
                    ),
                )
            _check_raster(image.usm, image.shape)
    for person in manifest.persons:
        for image_id, sidecar in person.maps.items():
            if image_id not in shapes:
                raise ManifestError(
                    '{0}: person {1} references unknown image {2}'.format(
                        manifest.path, person.person_id, image_id,
                    ),
                )
            _check_raster(sidecar, shapes[image_id])
        if person.fixations is not None:
            check_fixation_header(person.fixations)
        if person.role != ROLE_TARGET:
            missing = sorted(set(shapes) - set(person.maps))
            if missing:
                raise ManifestError(
                    '{0}: training person {1} lacks maps for {2}'.format(
                        manifest.path, person.person_id, ', '.join(missing),
                    ),
                )
    if manifest.annotations is not None:
        if not manifest.annotations.is_file():
            raise ManifestError(
                'annotation file not found: {0}'.format(manifest.annotations),
            )
        for annotation in read_annotations(manifest.annotations):
            if annotation.image_id not in shapes:
                raise ManifestError(
                    '{0}: annotation for unknown image {1}'.format(
                        manifest.annotations, annotation.image_id,
                    ),
                )
            try:
                annotation.check_bounds(*shapes[annotation.image_id])
            except ShapeError as exc:
                raise ManifestError(
                    '{0}: {1}'.format(manifest.annotations, exc),
                ) from exc


def _check_raster(sidecar: Path, shape: tuple[int, int]) -> None:
    header = read_map_header(sidecar)
    if (header.height, header.width) != shape:
        raise ManifestError(
            '{0}: map is {1}x{2}, image is {3}x{4}'.format(
                sidecar, header.height, header.width, *shape,
            ),
        )
