"""Experiment phases.

A run splits images into training and test sets and persons into
training and target persons, selects common images among the training
images, fits one regression per target person on its common images,
predicts the held-out test images and evaluates the regression next to
the similarity and uniform baselines. Output layout:

    selection.json
    models/<target>.fpsp
    predictions/<target>/<image>.json + .raw
    report.csv, report.json
    sweep.csv
    run.log, FAILED
"""

import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Optional, Sequence, TypeVar

import numpy as np

from fpsp_py.baselines import (
    SIMILARITY_NOTE,
    similarity_weights,
    weighted_average_psm,
)
from fpsp_py.errors import (
    MissingDataError,
    StrictModeViolation,
    ValidationError,
)
from fpsp_py.evaluation.results import EvalReport
from fpsp_py.evaluation.suite import evaluate_suite
from fpsp_py.pipeline.config import RunConfig
from fpsp_py.pipeline.manifest import Dataset
from fpsp_py.pipeline.utils import (
    FAILED_MARKER,
    METHOD_PROPOSED,
    METHOD_SIMILARITY,
    METHOD_UNIFORM,
    MODEL_SUFFIX,
    MODELS_DIR,
    PREDICTIONS_DIR,
    PURPOSE_EVALUATE,
    PURPOSE_FIT,
    REPORT_CSV,
    REPORT_JSON,
    ROLE_TARGET,
    ROLE_TRAINING,
    RUN_LOG,
    SELECTION_FILE,
    SWEEP_CSV,
    UNIFORM_NOTE,
)
from fpsp_py.regression.als import fit
from fpsp_py.regression.config import TrainingSet
from fpsp_py.regression.model import predict, save_model
from fpsp_py.regression.results import FittedModel, SweepRow, SweepTable
from fpsp_py.regression.sweep import GridCell, sweep_hyperparameters
from fpsp_py.saliency.io import save_map
from fpsp_py.saliency.maps import SaliencyMap, resample_to
from fpsp_py.selection.greedy import select_common_images
from fpsp_py.selection.results import SelectionResult
from fpsp_py.selection.variance import image_scores
from fpsp_py.tensors.dense import DenseTensor
from fpsp_py.utils import FloatArray, make_rng

logger = logging.getLogger(__name__)

PHASE_SELECT = 'select'
PHASE_FIT = 'fit'
PHASE_PREDICT = 'predict'
PHASE_EVALUATE = 'evaluate'
PHASES = (PHASE_SELECT, PHASE_FIT, PHASE_PREDICT, PHASE_EVALUATE)

Predictions = dict[str, dict[str, SaliencyMap]]

_Item = TypeVar('_Item')
_Result = TypeVar('_Result')


@dataclass(frozen=True)
class Split(object):
    """Image and person partition of a run."""

    train_images: tuple[str, ...]
    test_images: tuple[str, ...]
    training_persons: tuple[str, ...]
    target_persons: tuple[str, ...]


def split_dataset(dataset: Dataset, config: RunConfig) -> Split:
    """Seeded image split and person roles.

    Images are shuffled and config.test_fraction of them (at least one,
    leaving at least one) held out. Manifest roles are used when given,
    persons without a role then train; otherwise config.target_fraction
    of the shuffled persons become targets.

    Args:
        dataset (Dataset): Ingested dataset.
        config (RunConfig): Split settings and seed.

    Returns:
        Split: Sorted id tuples.

    Raises:
        ValidationError: Fewer than two images, two training persons or
            one target person.
    """
    rng = make_rng(config.seed)
    images = dataset.image_ids
    if len(images) < 2:
        raise ValidationError('need at least two images to split')
    order = rng.permutation(len(images))
    test_count = min(
        max(round(len(images) * config.test_fraction), 1), len(images) - 1,
    )
    test = sorted(images[index] for index in order[:test_count])
    train = sorted(images[index] for index in order[test_count:])

    targets = dataset.persons_with_role(ROLE_TARGET)
    if targets or dataset.persons_with_role(ROLE_TRAINING):
        training = tuple(
            person for person in dataset.person_ids if person not in targets
        )
    else:
        persons = dataset.person_ids
        shuffled = [persons[index] for index in rng.permutation(len(persons))]
        target_count = max(round(len(persons) * config.target_fraction), 1)
        targets = tuple(sorted(shuffled[:target_count]))
        training = tuple(sorted(shuffled[target_count:]))
    if len(training) < 2:
        raise ValidationError('need at least two training persons')
    if not targets:
        raise ValidationError('need at least one target person')
    return Split(
        train_images=tuple(train),
        test_images=tuple(test),
        training_persons=tuple(training),
        target_persons=tuple(targets),
    )


class ExperimentRunner(object):  # noqa: WPS214
    """Runs the phases of one experiment, caching each result."""

    def __init__(self, dataset: Dataset, config: RunConfig):
        """Init runner and split the dataset.

        Args:
            dataset (Dataset): Ingested dataset.
            config (RunConfig): Run settings.
        """
        self.dataset = dataset
        self.config = config
        self.split = split_dataset(dataset, config)
        self._selection: Optional[SelectionResult] = None
        self._fit_images: dict[str, tuple[str, ...]] = {}
        self._models: Optional[dict[str, FittedModel]] = None
        self._predictions: Optional[Predictions] = None
        self._report: Optional[EvalReport] = None
        self._working_inputs: dict[str, FloatArray] = {}

    @property
    def output_dir(self) -> Path:
        """Output directory.

        Returns:
            Path: config.output_dir.
        """
        return self.config.output_dir

    def select(self) -> SelectionResult:
        """Score training images and choose the common images.

        Returns:
            SelectionResult: Common images.

        Raises:
            ValidationError: More common images than training images.
            StrictModeViolation: Strict mode and a target lacks data on a
                common image.
        """
        if self._selection is not None:
            return self._selection
        train_images = self.split.train_images
        if self.config.common_images > len(train_images):
            raise ValidationError(
                '{0} common images requested, {1} training images'.format(
                    self.config.common_images, len(train_images),
                ),
            )
        annotations = self.dataset.annotations()
        annotated = {annotation.image_id for annotation in annotations}
        psms = {
            image: [
                self.dataset.training_psm(person, image)
                for person in self.split.training_persons
            ]
            for image in train_images if image in annotated
        }
        scores = image_scores(annotations, psms, train_images)
        selection = select_common_images(
            scores, annotations, self.config.common_images,
        )
        self.dataset.set_common_images(selection.image_ids)
        self._check_target_coverage(selection)
        if self.common_pool_remainder == 0:
            logger.warning(
                'every training image is common; no images left outside '
                'the common set',
            )
        self._selection = selection
        return selection

    @property
    def common_pool_remainder(self) -> int:
        """Training images not chosen as common images.

        Returns:
            int: Count, 0 when every training image is common.
        """
        return len(self.split.train_images) - self.config.common_images

    def training_set(self, target: str) -> TrainingSet:
        """Stack common-image samples of one target at working shape.

        Args:
            target (str): Target person.

        Returns:
            TrainingSet: Inputs of training persons, target's maps.

        Raises:
            MissingDataError: The target has data on no common image.
        """
        images = self._target_common_images(target)
        shape = self.config.regression.working_shape
        targets = [
            resample_to(
                self.dataset.target_map(target, image, PURPOSE_FIT), shape,
            ).values
            for image in images
        ]
        return TrainingSet(
            inputs=DenseTensor(
                np.stack([self._inputs(image) for image in images]),
            ),
            targets=DenseTensor(np.stack(targets)),
        )

    def fit(self) -> dict[str, FittedModel]:
        """Fit one regression per target person.

        Returns:
            dict[str, FittedModel]: Models in target order.
        """
        if self._models is None:
            self.select()
            models = self._map(self._fit_target, self.split.target_persons)
            self._models = dict(zip(self.split.target_persons, models))
        return self._models

    def predict(self) -> Predictions:
        """Regression predictions for every target on every test image.

        Returns:
            Predictions: Target to image to map at native resolution.
        """
        if self._predictions is None:
            models = self.fit()
            self._predictions = {}
            for target, model in models.items():
                self._predictions[target] = {
                    image: resample_to(
                        predict(model, DenseTensor(self._inputs(image))),
                        self.dataset.manifest.image(image).shape,
                    )
                    for image in self.split.test_images
                }
        return self._predictions

    def baselines(self) -> tuple[Predictions, Predictions]:
        """Similarity and uniform baseline predictions on test images.

        The uniform baseline is the dataset's USM: the mean of the
        training persons' PSMs, or the provided raster.

        Returns:
            tuple[Predictions, Predictions]: (similarity, uniform).
        """
        self.select()
        training = self.split.training_persons
        universal = {
            image: self.dataset.usm(image, training)
            for image in self.split.test_images
        }
        similarity: Predictions = {}
        averaged: Predictions = {}
        for target in self.split.target_persons:
            common = self._target_common_images(target)
            weights = similarity_weights(
                [
                    self.dataset.target_map(target, image, PURPOSE_FIT)
                    for image in common
                ],
                {
                    person: [
                        self.dataset.training_psm(person, image)
                        for image in common
                    ]
                    for person in training
                },
                self.config.temperature,
            )
            logger.info(
                'similarity weights for %s: %s',
                target,
                ', '.join(
                    '{0}={1:.3f}'.format(person, weight)
                    for person, weight in zip(training, weights.weights)
                ),
            )
            similarity[target] = {}
            for image in self.split.test_images:
                maps = {
                    person: self.dataset.training_psm(person, image)
                    for person in training
                }
                similarity[target][image] = weighted_average_psm(weights, maps)
            averaged[target] = dict(universal)
        return (similarity, averaged)

    def evaluate(self) -> EvalReport:
        """Evaluate the regression and both baselines on test images.

        Pairs without target ground truth are skipped.

        Returns:
            EvalReport: Report over all methods.
        """
        if self._report is not None:
            return self._report
        proposed = self.predict()
        similarity, uniform = self.baselines()
        truths = {}
        for target in self.split.target_persons:
            for image in self.split.test_images:
                if not self.dataset.has_target_data(target, image):
                    logger.warning(
                        'no ground truth for %s on test image %s; skipped',
                        target, image,
                    )
                    continue
                truths[(target, image)] = self.dataset.target_map(
                    target, image, PURPOSE_EVALUATE,
                )
        methods = (
            (METHOD_PROPOSED, proposed),
            (METHOD_SIMILARITY, similarity),
            (METHOD_UNIFORM, uniform),
        )
        self._report = evaluate_suite(
            {
                method: {
                    (target, image): prediction
                    for target, images in predictions.items()
                    for image, prediction in images.items()
                    if (target, image) in truths
                }
                for method, predictions in methods
            },
            truths,
            notes={
                METHOD_SIMILARITY: SIMILARITY_NOTE,
                METHOD_UNIFORM: UNIFORM_NOTE.format(
                    self.dataset.manifest.usm_source,
                ),
            },
        )
        return self._report

    def sweep(self, grid: Sequence[GridCell]) -> SweepTable:
        """Validation metrics per grid cell, averaged over targets.

        Each target fits on its common images and is scored on the test
        images it has ground truth for.

        Args:
            grid (Sequence[GridCell]): (rank, lambda) cells.

        Returns:
            SweepTable: One row per cell.
        """
        self.select()
        tables = [
            self._sweep_target(target, grid)
            for target in self.split.target_persons
        ]
        rows = []
        for cells in zip(*(table.rows for table in tables)):
            rows.append(SweepRow(
                rank=cells[0].rank,
                lam=cells[0].lam,
                kldiv=_finite_mean([cell.kldiv for cell in cells]),
                cc=_finite_mean([cell.cc for cell in cells]),
            ))
        return SweepTable(rows=tuple(rows))

    def write_selection(self) -> Path:
        """Write selection.json.

        Returns:
            Path: Written file.
        """
        selection = self.select()
        content: dict[str, Any] = {
            'train_images': list(self.split.train_images),
            'test_images': list(self.split.test_images),
            'training_persons': list(self.split.training_persons),
            'target_persons': list(self.split.target_persons),
            'common_images': list(selection.image_ids),
            'scores': selection.scores,
            'covered_categories': list(selection.covered_categories),
            'common_pool_remainder': self.common_pool_remainder,
        }
        path = self._output(SELECTION_FILE)
        path.write_text(json.dumps(content, indent=2) + '\n')
        return path

    def write_models(self) -> list[Path]:
        """Write models/<target>.fpsp.

        Returns:
            list[Path]: Written files.
        """
        paths = []
        for target, model in self.fit().items():
            path = self._output(MODELS_DIR, target + MODEL_SUFFIX)
            save_model(path, model)
            paths.append(path)
        return paths

    def write_predictions(self) -> list[Path]:
        """Write predictions/<target>/<image> maps.

        Returns:
            list[Path]: Written sidecars.
        """
        paths = []
        for target, images in self.predict().items():
            for image, prediction in images.items():
                sidecar = self._output(
                    PREDICTIONS_DIR, target, '{0}.json'.format(image),
                )
                paths.append(save_map(sidecar, prediction))
        return paths

    def write_report(self) -> tuple[Path, Path]:
        """Write report.csv and report.json.

        Returns:
            tuple[Path, Path]: Written files.
        """
        csv_path = self._output(REPORT_CSV)
        json_path = self._output(REPORT_JSON)
        self.evaluate().write(csv_path, json_path)
        return (csv_path, json_path)

    def _fit_target(self, target: str) -> FittedModel:
        data = self.training_set(target)
        logger.info(
            'fitting %s on %d common images', target, data.samples,
        )
        return fit(data, self.config.regression, self.split.training_persons)

    def _sweep_target(
        self,
        target: str,
        grid: Sequence[GridCell],
    ) -> SweepTable:
        fit_data = self.training_set(target)
        shape = self.config.regression.working_shape
        validation = [
            image for image in self.split.test_images
            if self.dataset.has_target_data(target, image)
        ]
        if not validation:
            raise MissingDataError(
                'target {0} has no test ground truth to sweep on'.format(
                    target,
                ),
            )
        inputs = [fit_data.inputs.values] + [
            self._inputs(image)[np.newaxis] for image in validation
        ]
        targets = [fit_data.targets.values] + [
            resample_to(
                self.dataset.target_map(target, image, PURPOSE_EVALUATE),
                shape,
            ).values[np.newaxis]
            for image in validation
        ]
        data = TrainingSet(
            inputs=DenseTensor(np.concatenate(inputs)),
            targets=DenseTensor(np.concatenate(targets)),
        )
        train_count = fit_data.samples
        return sweep_hyperparameters(
            data,
            grid,
            list(range(train_count)),
            list(range(train_count, data.samples)),
            self.config.regression,
            workers=self.config.workers,
        )

    def _target_common_images(self, target: str) -> tuple[str, ...]:
        if target not in self._fit_images:
            selection = self.select()
            images = tuple(
                image for image in selection.image_ids
                if self.dataset.has_target_data(target, image)
            )
            if not images:
                raise MissingDataError(
                    'target {0} has data on no common image'.format(target),
                )
            self._fit_images[target] = images
        return self._fit_images[target]

    def _check_target_coverage(self, selection: SelectionResult) -> None:
        for target in self.split.target_persons:
            missing = [
                image for image in selection.image_ids
                if not self.dataset.has_target_data(target, image)
            ]
            if not missing:
                continue
            if self.dataset.strict:
                raise StrictModeViolation(
                    'strict mode: target {0} lacks data on common '
                    'images {1}'.format(target, ', '.join(missing)),
                )
            logger.warning(
                'target %s lacks data on %d common images; skipping them',
                target, len(missing),
            )

    def _inputs(self, image: str) -> FloatArray:
        if image not in self._working_inputs:
            shape = self.config.regression.working_shape
            self._working_inputs[image] = np.stack([
                resample_to(
                    self.dataset.training_psm(person, image), shape,
                ).values
                for person in self.split.training_persons
            ])
        return self._working_inputs[image]

    def _map(
        self,
        function: Callable[[_Item], _Result],
        items: Sequence[_Item],
    ) -> list[_Result]:
        with ThreadPoolExecutor(max_workers=self.config.workers) as executor:
            return list(executor.map(function, items))

    def _output(self, *parts: str) -> Path:
        path = self.output_dir.joinpath(*parts)
        path.parent.mkdir(parents=True, exist_ok=True)
        return path


def execute(
    dataset: Dataset,
    config: RunConfig,
    until: str = PHASE_EVALUATE,
) -> ExperimentRunner:
    """Run phases up to `until`, writing each phase's artifacts.

    On failure the completed artifacts stay on disk and a FAILED marker
    with the error is written before the error propagates.

    Args:
        dataset (Dataset): Ingested dataset.
        config (RunConfig): Run settings.
        until (str): Last phase: select, fit, predict or evaluate.

    Returns:
        ExperimentRunner: Runner holding every computed phase.

    Raises:
        ValidationError: Unknown phase.
    """
    if until not in PHASES:
        raise ValidationError('unknown phase {0!r}'.format(until))
    config.output_dir.mkdir(parents=True, exist_ok=True)
    marker = config.output_dir / FAILED_MARKER
    marker.unlink(missing_ok=True)
    writers = (
        (PHASE_SELECT, 'write_selection'),
        (PHASE_FIT, 'write_models'),
        (PHASE_PREDICT, 'write_predictions'),
        (PHASE_EVALUATE, 'write_report'),
    )
    try:
        runner = ExperimentRunner(dataset, config)
        for phase, writer in writers:
            getattr(runner, writer)()
            logger.info('phase %s done', phase)
            if phase == until:
                break
    except Exception as exc:
        marker.write_text('{0}: {1}\n'.format(type(exc).__name__, exc))
        logger.error('run failed: %s', exc)
        raise
    return runner


def run_experiment(dataset: Dataset, config: RunConfig) -> EvalReport:
    """Run every phase and write all artifacts plus run.log.

    Args:
        dataset (Dataset): Ingested dataset.
        config (RunConfig): Run settings.

    Returns:
        EvalReport: Evaluation of all methods.
    """
    config.output_dir.mkdir(parents=True, exist_ok=True)
    handler = logging.FileHandler(config.output_dir / RUN_LOG, mode='w')
    handler.setFormatter(logging.Formatter(
        '%(asctime)s %(levelname)s %(name)s: %(message)s',
    ))
    root = logging.getLogger()
    root.addHandler(handler)
    try:
        report = execute(dataset, config).evaluate()
    finally:
        root.removeHandler(handler)
        handler.close()
    for method, summary in report.summaries.items():
        logger.info(
            '%s: kldiv %.4f, cc %.4f over %d pairs',
            method, summary.kldiv, summary.cc, summary.rows,
        )
    return report


def sweep(
    dataset: Dataset,
    config: RunConfig,
    grid: Optional[Sequence[GridCell]] = None,
) -> SweepTable:
    """Sweep a (rank, lambda) grid and write sweep.csv.

    Args:
        dataset (Dataset): Ingested dataset.
        config (RunConfig): Run settings; its grid is used by default.
        grid (Optional[Sequence[GridCell]]): Cells to evaluate.

    Returns:
        SweepTable: One row per cell.
    """
    config.output_dir.mkdir(parents=True, exist_ok=True)
    marker = config.output_dir / FAILED_MARKER
    marker.unlink(missing_ok=True)
    try:
        table = ExperimentRunner(dataset, config).sweep(
            config.grid() if grid is None else grid,
        )
    except Exception as exc:
        marker.write_text('{0}: {1}\n'.format(type(exc).__name__, exc))
        raise
    (config.output_dir / SWEEP_CSV).write_text(table.to_csv())
    return table


def _finite_mean(values: Sequence[float]) -> float:
    finite = [value for value in values if math.isfinite(value)]
    if not finite:
        return float('nan')
    return float(np.mean(finite))
