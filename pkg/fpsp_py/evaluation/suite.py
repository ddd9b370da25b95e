"""Evaluation of several methods against shared ground truth."""

import logging
from typing import Mapping, Optional

import numpy as np

from fpsp_py.errors import ExcludedSampleError, MissingDataError
from fpsp_py.evaluation.metrics import cross_correlation, kl_divergence
from fpsp_py.evaluation.results import EvalReport, EvalRow, MethodSummary
from fpsp_py.saliency.maps import SaliencyMap, resample_to

logger = logging.getLogger(__name__)

PairKey = tuple[str, str]


def evaluate_suite(
    predictions: Mapping[str, Mapping[PairKey, SaliencyMap]],
    ground_truths: Mapping[PairKey, SaliencyMap],
    notes: Optional[Mapping[str, str]] = None,
) -> EvalReport:
    """Score every method's predictions against ground truth.

    Predictions are resampled to ground-truth resolution first. Pairs
    where a metric is undefined are logged and left out of rows and
    means.

    Args:
        predictions (Mapping[str, Mapping[PairKey, SaliencyMap]]): Method
            name to maps keyed by (person, image).
        ground_truths (Mapping[PairKey, SaliencyMap]): Maps keyed by
            (person, image).
        notes (Optional[Mapping[str, str]]): Remarks per method.

    Returns:
        EvalReport: Rows and per-method means.

    Raises:
        MissingDataError: A prediction has no ground truth.
    """
    rows = []
    summaries = {}
    for method, method_predictions in predictions.items():
        method_rows = []
        excluded = 0
        for key in sorted(method_predictions):
            if key not in ground_truths:
                raise MissingDataError(
                    'no ground truth for person {0}, image {1}'.format(*key),
                )
            truth = ground_truths[key]
            prediction = method_predictions[key]
            if prediction.shape != truth.shape:
                prediction = resample_to(prediction, truth.shape)
            try:
                kldiv = kl_divergence(prediction, truth)
                cc = cross_correlation(prediction, truth)
            except ExcludedSampleError as exc:
                logger.warning(
                    'excluded %s person=%s image=%s: %s',
                    method, key[0], key[1], exc,
                )
                excluded += 1
                continue
            method_rows.append(EvalRow(method, key[0], key[1], kldiv, cc))
        summaries[method] = _summarize(method_rows, excluded)
        rows.extend(method_rows)
    return EvalReport(
        rows=tuple(rows),
        summaries=summaries,
        notes=dict(notes or {}),
    )


def _summarize(rows: list[EvalRow], excluded: int) -> MethodSummary:
    if not rows:
        return MethodSummary(
            kldiv=float('nan'), cc=float('nan'), rows=0, excluded=excluded,
        )
    return MethodSummary(
        kldiv=float(np.mean([row.kldiv for row in rows])),
        cc=float(np.mean([row.cc for row in rows])),
        rows=len(rows),
        excluded=excluded,
    )
