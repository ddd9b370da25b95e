"""Tests utilities.

Contains shared fixtures.
"""


import shutil
from pathlib import Path

import pytest

from fpsp_py.pipeline.config import RunConfig
from fpsp_py.pipeline.manifest import Dataset, ingest
from fpsp_py.regression.config import RegressionConfig
from fpsp_py.synth.config import SynthConfig
from fpsp_py.synth.dataset import write_dataset
from tests.pipeline.utils import SMALL_SHAPE


@pytest.fixture(scope='session')
def synthetic_manifest(tmp_path_factory: pytest.TempPathFactory) -> Path:
    """Write a small synthetic dataset once per session.

    Three training persons, one target person, 12 images of 8 x 6.

    Args:
        tmp_path_factory (pytest.TempPathFactory): Session temp dirs.

    Returns:
        Path: Manifest path. Treat the directory as read-only.
    """
    config = SynthConfig(
        seed=5,
        persons=3,
        targets=1,
        images=12,
        categories=2,
        components=3,
        shape=SMALL_SHAPE,
        fixations=50,
    )
    return write_dataset(config, tmp_path_factory.mktemp('synthetic'))


@pytest.fixture
def manifest_copy(synthetic_manifest: Path, tmp_path: Path) -> Path:
    """Copy the synthetic dataset so a test may damage it.

    Args:
        synthetic_manifest (Path): Shared manifest.
        tmp_path (Path): Temporary directory.

    Returns:
        Path: Manifest path of the copy.
    """
    root = tmp_path / 'copy'
    shutil.copytree(synthetic_manifest.parent, root)
    return root / synthetic_manifest.name


@pytest.fixture
def dataset(synthetic_manifest: Path) -> Dataset:
    """Ingest the synthetic dataset in strict mode.

    Args:
        synthetic_manifest (Path): Shared manifest.

    Returns:
        Dataset: Fresh handle with no recorded accesses.
    """
    return ingest(synthetic_manifest)


@pytest.fixture
def run_config(tmp_path: Path) -> RunConfig:
    """Return a fast strict run config writing into tmp_path.

    Args:
        tmp_path (Path): Temporary directory.

    Returns:
        RunConfig: Four common images, rank 2.
    """
    return RunConfig(
        common_images=4,
        regression=RegressionConfig(
            rank=2,
            lam=0.1,
            max_sweeps=30,
            working_shape=SMALL_SHAPE,
        ),
        output_dir=tmp_path / 'out',
    )
