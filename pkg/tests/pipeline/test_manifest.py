"""Tests for manifest ingestion and target-data access."""


import json
from pathlib import Path
from typing import Any

import pytest

from fpsp_py.errors import (
    ManifestError,
    MissingDataError,
    StrictModeViolation,
    ValidationError,
)
from fpsp_py.pipeline.manifest import (
    Dataset,
    TargetAccess,
    ingest,
    parse_manifest,
)
from fpsp_py.pipeline.utils import (
    PURPOSE_EVALUATE,
    PURPOSE_FIT,
    ROLE_TARGET,
    ROLE_TRAINING,
    TARGET_SOURCE_FIXATIONS,
    TARGET_SOURCE_MAPS,
)
from fpsp_py.selection.annotations import read_annotations
from tests.pipeline.utils import SMALL_SHAPE, edit_manifest, person_entry


def test_ingest_synthetic(dataset: Dataset) -> None:
    """Test a synthetic dataset ingests with roles and lazy rasters.

    Args:
        dataset (Dataset): Ingested dataset.
    """
    assert len(dataset.image_ids) == 12
    assert dataset.persons_with_role(ROLE_TRAINING) == (
        'train00', 'train01', 'train02',
    )
    assert dataset.persons_with_role(ROLE_TARGET) == ('target00',)
    assert dataset.annotations()

    # nothing is loaded until asked for
    assert not dataset.accesses
    psm = dataset.training_psm('train01', 'img004')
    assert psm.shape == SMALL_SHAPE
    assert 0 < psm.values.min() <= psm.values.max() <= 1

    usm = dataset.usm('img004', dataset.persons_with_role(ROLE_TRAINING))
    assert usm.shape == SMALL_SHAPE


def test_missing_manifest(tmp_path: Path) -> None:
    """Test absent and malformed manifests.

    Args:
        tmp_path (Path): Temporary directory.
    """
    with pytest.raises(ManifestError, match='manifest not found'):
        parse_manifest(tmp_path / 'absent.json')

    broken = tmp_path / 'broken.json'
    broken.write_text('{"version": 1,')
    with pytest.raises(ManifestError, match='not JSON'):
        parse_manifest(broken)


def test_unsupported_version(manifest_copy: Path) -> None:
    """Test unknown manifest versions are rejected.

    Args:
        manifest_copy (Path): Writable dataset copy.
    """
    def bump(content: dict[str, Any]) -> None:
        content['version'] = 2

    edit_manifest(manifest_copy, bump)
    with pytest.raises(ManifestError, match='unsupported manifest version 2'):
        ingest(manifest_copy)


def test_missing_raster(manifest_copy: Path) -> None:
    """Test an absent raster is reported by path.

    Args:
        manifest_copy (Path): Writable dataset copy.
    """
    raster = manifest_copy.parent / 'maps' / 'train01' / 'img003.raw'
    raster.unlink()

    with pytest.raises(ManifestError, match='raster not found') as excinfo:
        ingest(manifest_copy)
    assert str(raster) in str(excinfo.value)


def test_wrong_byte_length(manifest_copy: Path) -> None:
    """Test a truncated raster reports expected and actual sizes.

    Args:
        manifest_copy (Path): Writable dataset copy.
    """
    raster = manifest_copy.parent / 'maps' / 'target00' / 'img007.raw'
    raster.write_bytes(raster.read_bytes()[:-4])

    with pytest.raises(ManifestError) as excinfo:
        ingest(manifest_copy)
    message = str(excinfo.value)
    assert str(raster) in message
    assert '188 bytes, expected 192' in message


def test_dimension_mismatch(manifest_copy: Path) -> None:
    """Test rasters must match the image geometry.

    Args:
        manifest_copy (Path): Writable dataset copy.
    """
    def grow(content: dict[str, Any]) -> None:
        content['images'][0]['d1'] = 9

    edit_manifest(manifest_copy, grow)
    with pytest.raises(ManifestError, match='map is 8x6, image is 9x6'):
        ingest(manifest_copy)


def test_training_person_lacks_maps(manifest_copy: Path) -> None:
    """Test training persons need a map for every image.

    Args:
        manifest_copy (Path): Writable dataset copy.
    """
    def drop(content: dict[str, Any]) -> None:
        del person_entry(content, ROLE_TRAINING)['maps']['img005']

    edit_manifest(manifest_copy, drop)
    with pytest.raises(ManifestError, match='train00 lacks maps for img005'):
        ingest(manifest_copy)


def test_target_person_may_lack_maps(manifest_copy: Path) -> None:
    """Test target persons need no map on every image.

    Args:
        manifest_copy (Path): Writable dataset copy.
    """
    def drop(content: dict[str, Any]) -> None:
        person_entry(content, ROLE_TARGET)['maps'] = {}

    edit_manifest(manifest_copy, drop)
    dataset = ingest(manifest_copy, target_source=TARGET_SOURCE_MAPS)
    assert not dataset.has_target_data('target00', 'img000')
    with pytest.raises(MissingDataError):
        dataset.target_map('target00', 'img000', PURPOSE_EVALUATE)


def test_vocabulary_and_duplicates(manifest_copy: Path) -> None:
    """Test unknown roles, USM sources and duplicate ids.

    Args:
        manifest_copy (Path): Writable dataset copy.
    """
    original = manifest_copy.read_text()

    def bad_role(content: dict[str, Any]) -> None:
        content['persons'][0]['role'] = 'observer'

    edit_manifest(manifest_copy, bad_role)
    with pytest.raises(ManifestError, match='unknown role'):
        parse_manifest(manifest_copy)

    manifest_copy.write_text(original)

    def bad_usm(content: dict[str, Any]) -> None:
        content['usm'] = 'median'

    edit_manifest(manifest_copy, bad_usm)
    with pytest.raises(ManifestError, match='unknown usm source'):
        parse_manifest(manifest_copy)

    manifest_copy.write_text(original)

    def duplicate(content: dict[str, Any]) -> None:
        content['images'].append(content['images'][0])

    edit_manifest(manifest_copy, duplicate)
    with pytest.raises(ManifestError, match='duplicate image ids'):
        parse_manifest(manifest_copy)


def test_annotation_out_of_bounds(manifest_copy: Path) -> None:
    """Test annotations must lie inside their image.

    Args:
        manifest_copy (Path): Writable dataset copy.
    """
    annotations = manifest_copy.parent / 'annotations.jsonl'
    count = len(read_annotations(annotations))
    with annotations.open('a') as annotation_file:
        annotation_file.write(json.dumps({
            'image_id': 'img002',
            'category': '0',
            'row': 6,
            'col': 0,
            'h': 4,
            'w': 2,
        }) + '\n')
    assert len(read_annotations(annotations)) == count + 1

    with pytest.raises(ManifestError, match='leaves image img002'):
        ingest(manifest_copy)


def test_strict_access(dataset: Dataset) -> None:
    """Test strict mode limits fit reads to common images.

    Args:
        dataset (Dataset): Ingested strict dataset.
    """
    # no common images yet
    with pytest.raises(StrictModeViolation, match='img001'):
        dataset.target_map('target00', 'img001', PURPOSE_FIT)
    assert not dataset.accesses

    dataset.set_common_images(['img001', 'img002'])
    fitted = dataset.target_map('target00', 'img001', PURPOSE_FIT)
    assert fitted.shape == SMALL_SHAPE
    with pytest.raises(StrictModeViolation):
        dataset.target_map('target00', 'img003', PURPOSE_FIT)

    # evaluation reads are never restricted
    dataset.target_map('target00', 'img003', PURPOSE_EVALUATE)
    assert dataset.accesses == [
        TargetAccess('target00', 'img001', PURPOSE_FIT),
        TargetAccess('target00', 'img003', PURPOSE_EVALUATE),
    ]

    with pytest.raises(ValidationError, match='unknown purpose'):
        dataset.target_map('target00', 'img001', 'peek')


def test_lenient_access(synthetic_manifest: Path) -> None:
    """Test lenient mode allows fit reads anywhere.

    Args:
        synthetic_manifest (Path): Shared manifest.
    """
    dataset = ingest(synthetic_manifest, strict=False)
    target_map = dataset.target_map('target00', 'img009', PURPOSE_FIT)
    assert target_map.shape == SMALL_SHAPE


def test_target_from_fixations(synthetic_manifest: Path) -> None:
    """Test ground truth built from fixations.

    Args:
        synthetic_manifest (Path): Shared manifest.
    """
    from_maps = ingest(synthetic_manifest)
    from_fixations = ingest(
        synthetic_manifest, target_source=TARGET_SOURCE_FIXATIONS,
    )
    assert from_fixations.has_target_data('target00', 'img000')

    provided = from_maps.target_map('target00', 'img000', PURPOSE_EVALUATE)
    built = from_fixations.target_map(
        'target00', 'img000', PURPOSE_EVALUATE,
    )
    assert built.shape == provided.shape
    assert built.values.max() == pytest.approx(1)
    assert built.values.min() >= 0

    # training persons have no fixations
    assert not from_fixations.has_target_data('train00', 'img000')
