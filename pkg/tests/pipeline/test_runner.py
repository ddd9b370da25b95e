"""Tests for the experiment phases and their artifacts."""


import json
from dataclasses import replace
from pathlib import Path
from typing import Any

import numpy as np
import pytest

from fpsp_py.errors import ValidationError
from fpsp_py.pipeline.config import RunConfig
from fpsp_py.pipeline.manifest import Dataset, ingest
from fpsp_py.pipeline.runner import (
    PHASE_FIT,
    ExperimentRunner,
    execute,
    run_experiment,
    split_dataset,
    sweep,
)
from fpsp_py.pipeline.utils import (
    FAILED_MARKER,
    METHOD_PROPOSED,
    METHOD_SIMILARITY,
    METHOD_UNIFORM,
    PURPOSE_FIT,
    REPORT_CSV,
    SWEEP_CSV,
    USM_PROVIDED,
)
from fpsp_py.regression.config import RegressionConfig
from fpsp_py.regression.model import load_model
from fpsp_py.saliency.io import save_map
from fpsp_py.saliency.maps import SaliencyMap
from fpsp_py.synth.config import SynthConfig
from fpsp_py.synth.dataset import write_dataset
from tests.pipeline.utils import SMALL_SHAPE, data_files, edit_manifest


def test_split(dataset: Dataset, run_config: RunConfig) -> None:
    """Test the seeded split is deterministic and disjoint.

    Args:
        dataset (Dataset): Ingested dataset.
        run_config (RunConfig): Fast run config.
    """
    split = split_dataset(dataset, run_config)

    assert split == split_dataset(dataset, run_config)
    assert len(split.test_images) == 4
    assert len(split.train_images) == 8
    assert not set(split.test_images) & set(split.train_images)
    assert split.training_persons == ('train00', 'train01', 'train02')
    assert split.target_persons == ('target00',)

    other = split_dataset(dataset, replace(run_config, seed=1))
    assert sorted(other.train_images + other.test_images) == sorted(
        dataset.image_ids,
    )


def test_split_without_roles(manifest_copy: Path) -> None:
    """Test targets are drawn when the manifest assigns no roles.

    Args:
        manifest_copy (Path): Writable dataset copy.
    """
    content = json.loads(manifest_copy.read_text())
    for person in content['persons']:
        person['role'] = None
    manifest_copy.write_text(json.dumps(content))

    split = split_dataset(ingest(manifest_copy), RunConfig(seed=2))
    assert len(split.target_persons) == 1
    assert len(split.training_persons) == 3
    assert set(split.target_persons + split.training_persons) == {
        'train00', 'train01', 'train02', 'target00',
    }


def test_run_experiment(dataset: Dataset, run_config: RunConfig) -> None:
    """Test a full strict run writes every artifact.

    Args:
        dataset (Dataset): Ingested dataset.
        run_config (RunConfig): Fast run config.
    """
    report = run_experiment(dataset, run_config)
    out = run_config.output_dir

    assert set(report.summaries) == {
        METHOD_PROPOSED, METHOD_SIMILARITY, METHOD_UNIFORM,
    }
    for summary in report.summaries.values():
        assert summary.rows == 4

    selection = json.loads((out / 'selection.json').read_text())
    common = selection['common_images']
    assert len(common) == 4
    assert set(common) <= set(selection['train_images'])
    assert selection['common_pool_remainder'] == 4

    model = load_model(out / 'models' / 'target00.fpsp')
    assert model.weights.rank == 2
    assert model.persons == ('train00', 'train01', 'train02')
    for image in selection['test_images']:
        assert (out / 'predictions' / 'target00' / (image + '.json')).is_file()

    assert (out / REPORT_CSV).read_text().startswith('method,')
    summary = json.loads((out / 'report.json').read_text())
    assert 'note' in summary['methods'][METHOD_SIMILARITY]
    assert (out / 'run.log').is_file()
    assert not (out / FAILED_MARKER).exists()

    # fit reads of target data stay on the common images
    fit_images = {
        access.image for access in dataset.accesses
        if access.purpose == PURPOSE_FIT
    }
    assert fit_images == set(common)


def test_run_is_deterministic(
    synthetic_manifest: Path,
    run_config: RunConfig,
) -> None:
    """Test repeated runs write byte-identical reports.

    Args:
        synthetic_manifest (Path): Shared manifest.
        run_config (RunConfig): Fast run config.
    """
    first = run_config.output_dir / 'first'
    second = run_config.output_dir / 'second'
    run_experiment(
        ingest(synthetic_manifest), replace(run_config, output_dir=first),
    )
    run_experiment(
        ingest(synthetic_manifest),
        replace(run_config, output_dir=second, workers=2),
    )

    first_files = data_files(first)
    second_files = data_files(second)
    del first_files['run.log']
    del second_files['run.log']
    assert first_files == second_files
    assert first_files[REPORT_CSV]


def test_every_training_image_common(
    dataset: Dataset,
    run_config: RunConfig,
) -> None:
    """Test I equal to the training pool completes with no remainder.

    Args:
        dataset (Dataset): Ingested dataset.
        run_config (RunConfig): Fast run config.
    """
    config = replace(run_config, common_images=8)
    runner = execute(dataset, config)

    assert runner.common_pool_remainder == 0
    assert sorted(runner.select().image_ids) == sorted(
        runner.split.train_images,
    )
    assert runner.evaluate().summaries[METHOD_PROPOSED].rows == 4


def test_execute_until_fit(dataset: Dataset, run_config: RunConfig) -> None:
    """Test stopping after a phase writes only its artifacts.

    Args:
        dataset (Dataset): Ingested dataset.
        run_config (RunConfig): Fast run config.
    """
    execute(dataset, run_config, until=PHASE_FIT)
    out = run_config.output_dir

    assert (out / 'selection.json').is_file()
    assert (out / 'models' / 'target00.fpsp').is_file()
    assert not (out / 'predictions').exists()
    assert not (out / REPORT_CSV).exists()

    with pytest.raises(ValidationError, match='unknown phase'):
        execute(dataset, run_config, until='publish')


def test_failure_marker(dataset: Dataset, run_config: RunConfig) -> None:
    """Test a failing run leaves a FAILED marker naming the error.

    Args:
        dataset (Dataset): Ingested dataset.
        run_config (RunConfig): Fast run config.
    """
    config = replace(run_config, common_images=9)
    with pytest.raises(ValidationError, match='9 common images requested'):
        execute(dataset, config)

    marker = run_config.output_dir / FAILED_MARKER
    assert marker.read_text().startswith('ValidationError: 9 common')

    # a later successful run clears the marker
    execute(ingest(dataset.manifest.path), run_config, until=PHASE_FIT)
    assert not marker.exists()


def test_sweep(dataset: Dataset, run_config: RunConfig) -> None:
    """Test sweep rows follow the grid and land in sweep.csv.

    Args:
        dataset (Dataset): Ingested dataset.
        run_config (RunConfig): Fast run config.
    """
    single = sweep(dataset, run_config)
    assert [(row.rank, row.lam) for row in single.rows] == [(2, 0.1)]

    table = sweep(dataset, run_config, grid=[(1, 0.1), (2, 0.1), (2, 1.0)])
    assert [(row.rank, row.lam) for row in table.rows] == [
        (1, 0.1), (2, 0.1), (2, 1.0),
    ]
    written = (run_config.output_dir / SWEEP_CSV).read_text()
    assert written == table.to_csv()
    assert len(written.splitlines()) == 4


def test_training_set_shapes(dataset: Dataset, run_config: RunConfig) -> None:
    """Test common-image samples are stacked at the working shape.

    Args:
        dataset (Dataset): Ingested dataset.
        run_config (RunConfig): Fast run config.
    """
    runner = ExperimentRunner(dataset, run_config)
    data = runner.training_set('target00')

    assert data.inputs.shape == (4, 3, *SMALL_SHAPE)
    assert data.targets.shape == (4, *SMALL_SHAPE)


def test_proposed_beats_baselines(tmp_path: Path) -> None:
    """Test the regression against both baselines over five seeds.

    Five training and two target persons with heterogeneous gaze on 80
    images, 20 common images per target.

    Args:
        tmp_path (Path): Temporary directory.
    """
    similarity_wins = 0
    for seed in range(5):
        manifest = write_dataset(
            SynthConfig(
                seed=seed, persons=5, targets=2, images=80, noise=0.02,
            ),
            tmp_path / 'data{0}'.format(seed),
        )
        config = RunConfig(
            common_images=20,
            regression=RegressionConfig(rank=8, lam=0.01),
            seed=seed,
            output_dir=tmp_path / 'out{0}'.format(seed),
        )
        report = run_experiment(ingest(manifest), config)

        proposed = report.summaries[METHOD_PROPOSED]
        uniform = report.summaries[METHOD_UNIFORM]
        assert proposed.kldiv < uniform.kldiv, seed
        assert proposed.cc > uniform.cc, seed
        if proposed.kldiv < report.summaries[METHOD_SIMILARITY].kldiv:
            similarity_wins += 1
    assert similarity_wins >= 4


def test_planted_run(tmp_path: Path) -> None:
    """Test a noiseless planted-weight dataset is recovered end to end.

    Args:
        tmp_path (Path): Temporary directory.
    """
    manifest = write_dataset(
        SynthConfig(seed=1, persons=3, targets=1, images=60, noise=0.0),
        tmp_path / 'data',
        planted=True,
    )
    config = RunConfig(
        common_images=20,
        regression=RegressionConfig(rank=2, lam=1e-8),
        test_fraction=1 / 3,
        output_dir=tmp_path / 'out',
    )
    report = run_experiment(ingest(manifest), config)

    proposed = report.summaries[METHOD_PROPOSED]
    assert proposed.rows == 20
    assert proposed.cc > 0.99
    assert proposed.kldiv < report.summaries[METHOD_UNIFORM].kldiv


def test_uniform_baseline_is_usm(
    manifest_copy: Path,
    run_config: RunConfig,
) -> None:
    """Test the uniform baseline follows the manifest's USM source.

    Args:
        manifest_copy (Path): Writable dataset copy.
        run_config (RunConfig): Fast run config.
    """
    dataset = ingest(manifest_copy)
    runner = ExperimentRunner(dataset, run_config)
    _, uniform = runner.baselines()
    training = runner.split.training_persons
    for image in runner.split.test_images:
        np.testing.assert_allclose(
            uniform['target00'][image].values,
            np.mean([
                dataset.training_psm(person, image).values
                for person in training
            ], axis=0),
        )

    # provided rasters replace the mean of training PSMs
    root = manifest_copy.parent
    for index, image in enumerate(dataset.image_ids):
        save_map(
            root / 'usm' / '{0}.json'.format(image),
            SaliencyMap(np.full(SMALL_SHAPE, 0.25 + index / 48)),
        )

    def provided(content: dict[str, Any]) -> None:
        content['usm'] = USM_PROVIDED
        for record in content['images']:
            record['usm'] = 'usm/{0}.json'.format(record['id'])

    edit_manifest(manifest_copy, provided)
    dataset = ingest(manifest_copy)
    runner = ExperimentRunner(dataset, run_config)
    _, uniform = runner.baselines()
    for image in runner.split.test_images:
        index = dataset.image_ids.index(image)
        np.testing.assert_allclose(
            uniform['target00'][image].values, 0.25 + index / 48, rtol=1e-6,
        )
    report = runner.evaluate()
    assert USM_PROVIDED in report.notes[METHOD_UNIFORM]
