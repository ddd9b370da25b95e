"""Hyperparameter sweeps over (rank, lambda) grids."""

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from typing import Sequence

import numpy as np

from fpsp_py.errors import ExcludedSampleError, ValidationError
from fpsp_py.evaluation.metrics import cross_correlation, kl_divergence
from fpsp_py.regression.als import fit
from fpsp_py.regression.config import RegressionConfig, TrainingSet
from fpsp_py.regression.model import predict_batch
from fpsp_py.regression.results import SweepRow, SweepTable
from fpsp_py.regression.utils import REFERENCE_LAMBDAS, REFERENCE_RANKS
from fpsp_py.saliency.maps import SaliencyMap

logger = logging.getLogger(__name__)

GridCell = tuple[int, float]

METRIC_KLDIV = 'kldiv'
METRIC_CC = 'cc'


def reference_grid() -> list[GridCell]:
    """Published grid: ranks 5..50 step 5 by lambdas 0.01..10000.

    Returns:
        list[GridCell]: 70 cells.
    """
    return list(itertools.product(REFERENCE_RANKS, REFERENCE_LAMBDAS))


def sweep_hyperparameters(
    data: TrainingSet,
    grid: Sequence[GridCell],
    train_indices: Sequence[int],
    validation_indices: Sequence[int],
    base_config: RegressionConfig,
    workers: int = 1,
) -> SweepTable:
    """Fit every grid cell on the training split, score on validation.

    Validation targets are max-normalized before scoring and samples
    where a metric is undefined are skipped. Cells are independent and
    run on up to `workers` threads; the table is the same for any worker
    count.

    Args:
        data (TrainingSet): All samples.
        grid (Sequence[GridCell]): (rank, lambda) cells.
        train_indices (Sequence[int]): Samples to fit on.
        validation_indices (Sequence[int]): Samples to score on.
        base_config (RegressionConfig): Everything but rank and lambda.
        workers (int): Thread count.

    Returns:
        SweepTable: One row per distinct cell, sorted by (rank, lambda).

    Raises:
        ValidationError: Empty grid, empty split or overlapping splits.
    """
    cells = sorted({(int(rank), float(lam)) for rank, lam in grid})
    if not cells:
        raise ValidationError('hyperparameter grid is empty')
    if not train_indices:
        raise ValidationError('split leaves no training samples')
    if not validation_indices:
        raise ValidationError('split leaves no validation samples')
    if set(train_indices) & set(validation_indices):
        raise ValidationError('validation split overlaps training split')

    train = data.subset(train_indices)
    validation = data.subset(validation_indices)
    truths = [SaliencyMap(target) for target in validation.targets.values]

    def run_cell(cell: GridCell) -> SweepRow:
        config = replace(base_config, rank=cell[0], lam=cell[1])
        model = fit(train, config)
        predictions = predict_batch(model, validation.inputs.values)
        kldiv, cc = _score(predictions, truths)
        logger.info(
            'sweep rank=%d lambda=%g kldiv=%.4f cc=%.4f',
            cell[0], cell[1], kldiv, cc,
        )
        return SweepRow(rank=cell[0], lam=cell[1], kldiv=kldiv, cc=cc)

    with ThreadPoolExecutor(max_workers=max(workers, 1)) as executor:
        rows = tuple(executor.map(run_cell, cells))
    return SweepTable(rows=rows)


def best_setting(table: SweepTable, metric: str = METRIC_KLDIV) -> SweepRow:
    """Pick the best row: lowest KLdiv or highest CC.

    Ties keep the first row in table order.

    Args:
        table (SweepTable): Sweep results.
        metric (str): `kldiv` or `cc`.

    Returns:
        SweepRow: Best row.

    Raises:
        ValidationError: Unknown metric or no row with a finite value.
    """
    if metric not in {METRIC_KLDIV, METRIC_CC}:
        raise ValidationError('unknown metric {0!r}'.format(metric))
    scored = [
        row for row in table.rows if math.isfinite(getattr(row, metric))
    ]
    if not scored:
        raise ValidationError('no sweep row has a finite {0}'.format(metric))
    if metric == METRIC_KLDIV:
        return min(scored, key=lambda row: row.kldiv)
    return max(scored, key=lambda row: row.cc)


def _score(
    predictions: Sequence[SaliencyMap],
    truths: Sequence[SaliencyMap],
) -> tuple[float, float]:
    kldivs = []
    ccs = []
    for prediction, truth in zip(predictions, truths):
        try:
            kldiv = kl_divergence(prediction, truth.normalized())
            cc = cross_correlation(prediction, truth)
        except ExcludedSampleError:
            continue
        kldivs.append(kldiv)
        ccs.append(cc)
    if not kldivs:
        return (float('nan'), float('nan'))
    return (float(np.mean(kldivs)), float(np.mean(ccs)))
