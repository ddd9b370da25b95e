"""Saliency metrics.

KLdiv follows the saliency-benchmark convention KL(GT || prediction):
both maps are sum-normalized to distributions Q (ground truth) and
P (prediction) and the result is sum_x Q(x) * ln(eps + Q(x) / (P(x) + eps)).
"""

import numpy as np

from fpsp_py.errors import ExcludedSampleError, ShapeError
from fpsp_py.evaluation.utils import KL_EPS
from fpsp_py.saliency.maps import SaliencyMap


def kl_divergence(
    prediction: SaliencyMap,
    ground_truth: SaliencyMap,
    eps: float = KL_EPS,
) -> float:
    """KL divergence of the prediction from the ground truth.

    Swap the arguments for the other direction.

    Args:
        prediction (SaliencyMap): Predicted map P.
        ground_truth (SaliencyMap): Ground-truth map Q.
        eps (float): Regularizer added to the ratio and its denominator.

    Returns:
        float: KL(Q || P), >= 0 up to rounding.

    Raises:
        ExcludedSampleError: Ground truth is all zero.
    """
    _check_shapes(prediction, ground_truth)
    gt_mass = ground_truth.values.sum()
    if gt_mass <= 0:
        raise ExcludedSampleError('ground truth map is all zero')
    target = ground_truth.values / gt_mass
    predicted_mass = prediction.values.sum()
    predicted = prediction.values
    if predicted_mass > 0:
        predicted = predicted / predicted_mass
    return float(np.sum(target * np.log(eps + target / (predicted + eps))))


def cross_correlation(
    prediction: SaliencyMap,
    ground_truth: SaliencyMap,
) -> float:
    """Pearson correlation over pixels.

    Args:
        prediction (SaliencyMap): Predicted map.
        ground_truth (SaliencyMap): Ground-truth map.

    Returns:
        float: Correlation in [-1, 1].

    Raises:
        ExcludedSampleError: Either map is constant.
    """
    _check_shapes(prediction, ground_truth)
    centered_prediction = prediction.values - prediction.values.mean()
    centered_truth = ground_truth.values - ground_truth.values.mean()
    prediction_energy = np.sum(centered_prediction ** 2)
    truth_energy = np.sum(centered_truth ** 2)
    if prediction_energy <= 0 or truth_energy <= 0:
        raise ExcludedSampleError('correlation undefined for a constant map')
    correlation = np.sum(centered_prediction * centered_truth) / np.sqrt(
        prediction_energy * truth_energy,
    )
    return float(np.clip(correlation, -1, 1))


def _check_shapes(prediction: SaliencyMap, ground_truth: SaliencyMap) -> None:
    if prediction.shape != ground_truth.shape:
        raise ShapeError(
            'prediction {0} and ground truth {1} differ in shape'.format(
                prediction.shape, ground_truth.shape,
            ),
        )
