"""Tests utilities.

Contains dense oracles for single factor updates.
"""


import numpy as np

from fpsp_py.regression.config import TrainingSet
from fpsp_py.tensors.cp import CpFactors, cp_reconstruct
from fpsp_py.utils import FloatArray


def dense_predictions(weights: CpFactors, inputs: FloatArray) -> FloatArray:
    """Contract every sample with materialized weights.

    Args:
        weights (CpFactors): Regression weights.
        inputs (FloatArray): (I, P, d1, d2) inputs.

    Returns:
        FloatArray: (I, d1, d2) predictions.
    """
    dense = cp_reconstruct(weights).values
    return np.einsum('ipab,pabcd->icd', inputs, dense)


def solve_factor_directly(
    weights: CpFactors,
    data: TrainingSet,
    lam: float,
    mode: int,
) -> FloatArray:
    """Minimize the exact objective over one factor with a dense solver.

    Predictions and the materialized weights are both linear in the
    factor, so each unit factor yields one design column.

    Args:
        weights (CpFactors): Current weights.
        data (TrainingSet): Samples.
        lam (float): Lambda.
        mode (int): Factor to solve for.

    Returns:
        FloatArray: Optimal factor.
    """
    shape = weights.factors[mode].shape
    design = []
    penalty = []
    for unit in np.eye(int(np.prod(shape))):
        factors = list(weights.factors)
        factors[mode] = unit.reshape(shape)
        trial = CpFactors(tuple(factors))
        design.append(dense_predictions(trial, data.inputs.values).ravel())
        penalty.append(cp_reconstruct(trial).values.ravel())
    design_matrix = np.array(design).T
    penalty_matrix = np.array(penalty).T
    lhs = design_matrix.T @ design_matrix
    lhs = lhs + lam * penalty_matrix.T @ penalty_matrix
    rhs = design_matrix.T @ data.targets.values.ravel()
    return np.linalg.solve(lhs, rhs).reshape(shape)
