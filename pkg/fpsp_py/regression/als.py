"""Alternating least squares for the CP tensor-to-matrix regression.

The model predicts sample i as sum_r c[i, r] * outer(B1[:, r], B2[:, r])
with c[i, r] = <X_i, A0[:, r] o A1[:, r] o A2[:, r]>, where X_i is the
(P, d1', d2') stack of training-person maps. A sweep updates A0, A1, A2,
B1, B2 once each, in that order; every update solves the normal
equations of its block in closed form with the other blocks fixed.

||W||_F^2 restricted to one factor A_k is tr(A_k H_k A_k^T), with H_k the
Hadamard product of the other factors' Gram matrices, so the exact
penalty keeps each update closed-form.
"""

import logging
from dataclasses import dataclass
from functools import reduce
from typing import Optional, Sequence

import numpy as np
from scipy import linalg

from fpsp_py.errors import (
    NonFiniteError,
    ShapeError,
    SingularSystemError,
    ValidationError,
)
from fpsp_py.regression.config import RegressionConfig, TrainingSet
from fpsp_py.regression.results import FittedModel
from fpsp_py.regression.utils import (
    DIAGONAL_JITTER,
    FACTOR_NAMES,
    INPUT_MODES,
    OBJECTIVE_FLOOR,
    PENALTY_EXACT,
)
from fpsp_py.tensors.cp import (
    CpFactors,
    cp_reconstruct,
    khatri_rao_chain,
    mttkrp,
)
from fpsp_py.tensors.dense import unfold_array
from fpsp_py.utils import FloatArray, make_rng

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepResult(object):
    """Factors after one sweep and the objective they reach.

    update_objectives is filled only when tracking was requested and has
    one entry per factor update.
    """

    weights: CpFactors
    objective: float
    update_objectives: tuple[float, ...] = ()


@dataclass(frozen=True)
class _Problem(object):
    inputs: FloatArray
    targets: FloatArray

    @classmethod
    def from_data(
        cls,
        data: TrainingSet,
        offset: Optional[FloatArray] = None,
    ) -> '_Problem':
        targets = data.targets.values
        if offset is not None:
            targets = targets - offset
        return cls(inputs=data.inputs.values, targets=targets)


@dataclass(frozen=True)
class _NormalEquations(object):
    # shared: lhs is R x R and applies to every row of the factor;
    # otherwise lhs acts on the row-major flattened factor.
    lhs: FloatArray
    rhs: FloatArray
    shared: bool


def regression_shape(data: TrainingSet) -> tuple[int, ...]:
    """Shape (P, d1', d2', d1', d2') of the weight tensor for data.

    Args:
        data (TrainingSet): Training samples.

    Returns:
        tuple[int, ...]: Weight tensor shape.
    """
    persons, rows, cols = data.inputs.shape[1:]
    return (persons, rows, cols, rows, cols)


def initialize_factors(
    shape: Sequence[int],
    rank: int,
    seed: int,
) -> CpFactors:
    """Draw i.i.d. standard normal factors scaled by 1/sqrt(rank).

    Args:
        shape (Sequence[int]): Weight tensor shape.
        rank (int): CP rank.
        seed (int): Seed.

    Returns:
        CpFactors: Initial factors.
    """
    rng = make_rng(seed)
    scale = 1 / np.sqrt(rank)
    return CpFactors(tuple(
        rng.standard_normal((extent, rank)) * scale for extent in shape
    ))


def frobenius_norm_sq(weights: CpFactors) -> float:
    """Squared Frobenius norm of a CP tensor without materializing it.

    Args:
        weights (CpFactors): Factors.

    Returns:
        float: Sum of the Hadamard product of all factor Gram matrices.
    """
    grams = [factor.T @ factor for factor in weights.factors]
    return float(reduce(np.multiply, grams).sum())


def sample_coefficients(
    weights: CpFactors,
    inputs: FloatArray,
) -> FloatArray:
    """Per-sample rank coefficients c[i, r].

    Args:
        weights (CpFactors): Regression weights.
        inputs (FloatArray): (I, P, d1', d2') inputs.

    Returns:
        FloatArray: I x R coefficients.
    """
    design = khatri_rao_chain(weights.factors[:INPUT_MODES][::-1])
    return np.asarray(unfold_array(inputs, 0) @ design, dtype=np.float64)


def predict_samples(weights: CpFactors, inputs: FloatArray) -> FloatArray:
    """Unprocessed predictions for a batch of inputs.

    Args:
        weights (CpFactors): Regression weights.
        inputs (FloatArray): (I, P, d1', d2') inputs.

    Returns:
        FloatArray: (I, d1', d2') predictions.
    """
    coefficients = sample_coefficients(weights, inputs)
    outputs = weights.factors[INPUT_MODES:]
    return cp_reconstruct(CpFactors((coefficients, *outputs))).values


def objective(weights: CpFactors, data: TrainingSet, lam: float) -> float:
    """Penalized sum of squared errors with the exact ||W||_F^2 term.

    Args:
        weights (CpFactors): Regression weights.
        data (TrainingSet): Training samples.
        lam (float): Lambda.

    Returns:
        float: Objective value.
    """
    _check_weights(weights, data)
    problem = _Problem.from_data(data)
    return _residual(weights, problem) + lam * frobenius_norm_sq(weights)


def surrogate_objective(
    weights: CpFactors,
    data: TrainingSet,
    lam: float,
) -> float:
    """Objective minimized by `ridge` updates: residual + lambda sum ||A_k||^2.

    Args:
        weights (CpFactors): Regression weights.
        data (TrainingSet): Training samples.
        lam (float): Lambda.

    Returns:
        float: Surrogate objective value.
    """
    _check_weights(weights, data)
    problem = _Problem.from_data(data)
    return _residual(weights, problem) + lam * _factor_norms_sq(weights)


def gradient(
    weights: CpFactors,
    data: TrainingSet,
    lam: float,
    penalty: str = PENALTY_EXACT,
) -> tuple[FloatArray, ...]:
    """Analytic gradient of the objective with respect to every factor.

    Computed from the normal equations of each block as
    2 * (lhs applied to A_k - rhs).

    Args:
        weights (CpFactors): Regression weights.
        data (TrainingSet): Training samples.
        lam (float): Lambda.
        penalty (str): `exact` for objective, `ridge` for the surrogate.

    Returns:
        tuple[FloatArray, ...]: One gradient per factor.
    """
    _check_weights(weights, data)
    problem = _Problem.from_data(data)
    gradients = []
    for mode, factor in enumerate(weights.factors):
        equations = _normal_equations(weights, problem, mode, lam, penalty)
        if equations.shared:
            residual = factor @ equations.lhs - equations.rhs
        else:
            flat = equations.lhs @ factor.ravel() - equations.rhs
            residual = flat.reshape(factor.shape)
        gradients.append(2 * residual)
    return tuple(gradients)


def als_sweep(
    weights: CpFactors,
    data: TrainingSet,
    config: RegressionConfig,
    track_updates: bool = False,
) -> SweepResult:
    """Update every factor once, in FACTOR_NAMES order.

    Args:
        weights (CpFactors): Current factors.
        data (TrainingSet): Training samples.
        config (RegressionConfig): Lambda and penalty mode.
        track_updates (bool): Record the objective after each update.

    Returns:
        SweepResult: Updated factors and objective.
    """
    _check_weights(weights, data)
    return _sweep(weights, _Problem.from_data(data), config, track_updates)


def balance_factors(weights: CpFactors) -> CpFactors:
    """Rescale each rank term so its factor columns share one norm.

    The represented tensor is unchanged; terms with a zero column are
    left alone.

    Args:
        weights (CpFactors): Factors.

    Returns:
        CpFactors: Balanced factors.
    """
    norms = np.stack([
        np.linalg.norm(factor, axis=0) for factor in weights.factors
    ])
    balanced = np.all(norms > 0, axis=0)
    geometric = np.ones(weights.rank)
    geometric[balanced] = np.exp(np.log(norms[:, balanced]).mean(axis=0))
    scales = np.ones_like(norms)
    scales[:, balanced] = geometric[balanced] / norms[:, balanced]
    return CpFactors(tuple(
        factor * scales[mode][np.newaxis, :]
        for mode, factor in enumerate(weights.factors)
    ))


def fit(
    data: TrainingSet,
    config: RegressionConfig,
    persons: Optional[Sequence[str]] = None,
) -> FittedModel:
    """Fit the CP-constrained regression weights.

    Stops when the relative objective change drops below config.rel_tol
    or after config.max_sweeps sweeps. Deterministic for a given seed.

    Args:
        data (TrainingSet): Training samples at config.working_shape.
        config (RegressionConfig): Hyperparameters.
        persons (Optional[Sequence[str]]): Training person ids, in the
            order of the inputs' person mode.

    Returns:
        FittedModel: Fitted weights and objective trace.

    Raises:
        ShapeError: Data does not match the working shape or persons.
        NonFiniteError: The objective stopped being finite.
    """
    if data.map_shape != config.working_shape:
        raise ShapeError(
            'data maps {0} do not match working shape {1}'.format(
                data.map_shape, config.working_shape,
            ),
        )
    if persons is None:
        persons = [str(index) for index in range(data.persons)]
    if len(persons) != data.persons:
        raise ShapeError(
            '{0} person ids for {1} persons'.format(
                len(persons), data.persons,
            ),
        )

    offset = None
    if config.center_targets:
        offset = data.targets.values.mean(axis=0)
    problem = _Problem.from_data(data, offset)

    weights = initialize_factors(
        regression_shape(data), config.rank, config.seed,
    )
    previous = _training_objective(weights, problem, config)
    logger.debug('initial objective %.6e', previous)
    trace: list[float] = []
    stop_reason = 'max_sweeps'
    for sweep in range(1, config.max_sweeps + 1):
        sweep_result = _sweep(weights, problem, config)
        weights = balance_factors(sweep_result.weights)
        current = sweep_result.objective
        if not np.isfinite(current):
            raise NonFiniteError(
                'objective is not finite after sweep {0}'.format(sweep),
            )
        trace.append(current)
        logger.debug('sweep %d objective %.6e', sweep, current)
        change = abs(previous - current) / max(previous, OBJECTIVE_FLOOR)
        if change < config.rel_tol:
            stop_reason = 'converged'
            break
        previous = current

    logger.info(
        'fit rank=%d lambda=%g stopped (%s) after %d sweeps, objective %.6e',
        config.rank,
        config.lam,
        stop_reason,
        len(trace),
        trace[-1],
    )
    return FittedModel(
        weights=weights,
        config=config,
        objective_trace=tuple(trace),
        persons=tuple(persons),
        target_offset=offset,
        stop_reason=stop_reason,
    )


def _sweep(
    weights: CpFactors,
    problem: _Problem,
    config: RegressionConfig,
    track_updates: bool = False,
) -> SweepResult:
    factors = list(weights.factors)
    update_objectives = []
    for mode in range(len(factors)):
        current = CpFactors(tuple(factors))
        equations = _normal_equations(
            current, problem, mode, config.lam, config.penalty,
        )
        factors[mode] = _solve(equations, factors[mode].shape, mode)
        if track_updates:
            update_objectives.append(_training_objective(
                CpFactors(tuple(factors)), problem, config,
            ))
    updated = CpFactors(tuple(factors))
    return SweepResult(
        weights=updated,
        objective=_training_objective(updated, problem, config),
        update_objectives=tuple(update_objectives),
    )


def _normal_equations(
    weights: CpFactors,
    problem: _Problem,
    mode: int,
    lam: float,
    penalty: str,
) -> _NormalEquations:
    factors = weights.factors
    grams = [factor.T @ factor for factor in factors]
    if penalty == PENALTY_EXACT:
        others = [gram for index, gram in enumerate(grams) if index != mode]
        penalty_block = reduce(np.multiply, others)
    else:
        penalty_block = np.eye(weights.rank)

    if mode < INPUT_MODES:
        return _input_equations(
            weights, problem, mode, grams, lam * penalty_block,
        )

    coefficients = sample_coefficients(weights, problem.inputs)
    output_factors = [coefficients, *factors[INPUT_MODES:]]
    output_grams = [coefficients.T @ coefficients, *grams[INPUT_MODES:]]
    local_mode = mode - INPUT_MODES + 1
    design_gram = reduce(np.multiply, [
        gram for index, gram in enumerate(output_grams) if index != local_mode
    ])
    return _NormalEquations(
        lhs=design_gram + lam * penalty_block,
        rhs=mttkrp(problem.targets, output_factors, local_mode),
        shared=True,
    )


def _input_equations(
    weights: CpFactors,
    problem: _Problem,
    mode: int,
    grams: list[FloatArray],
    penalty_block: FloatArray,
) -> _NormalEquations:
    # Unknowns are A_k flattened row-major: index row * R + r.
    factors = weights.factors
    extent, rank = factors[mode].shape
    input_factors = factors[:INPUT_MODES]
    partial = np.stack([
        mttkrp(sample, input_factors, mode) for sample in problem.inputs
    ])
    design = partial.reshape(len(problem.inputs), extent * rank)
    output_gram = reduce(np.multiply, grams[INPUT_MODES:])
    projected = np.einsum(
        'iab,ar,br->ir',
        problem.targets,
        factors[INPUT_MODES],
        factors[INPUT_MODES + 1],
    )
    lhs = (design.T @ design) * np.tile(output_gram, (extent, extent))
    lhs = lhs + np.kron(np.eye(extent), penalty_block)
    rhs = (design * np.tile(projected, (1, extent))).sum(axis=0)
    return _NormalEquations(lhs=lhs, rhs=rhs, shared=False)


def _solve(
    equations: _NormalEquations,
    shape: tuple[int, ...],
    mode: int,
) -> FloatArray:
    lhs = equations.lhs + DIAGONAL_JITTER * np.eye(len(equations.lhs))
    rhs = equations.rhs.T if equations.shared else equations.rhs
    try:
        solution = linalg.solve(lhs, rhs, assume_a='pos')
    except (linalg.LinAlgError, ValueError) as exc:
        raise SingularSystemError(
            'normal equations for the {0} factor are singular; '.format(
                FACTOR_NAMES[mode],
            ) + 'increase lambda or reduce rank',
        ) from exc
    if not np.all(np.isfinite(solution)):
        raise SingularSystemError(
            'non-finite {0} factor update; increase lambda or reduce rank'
            .format(FACTOR_NAMES[mode]),
        )
    if equations.shared:
        return np.asarray(solution.T, dtype=np.float64)
    return np.asarray(solution, dtype=np.float64).reshape(shape)


def _residual(weights: CpFactors, problem: _Problem) -> float:
    predictions = predict_samples(weights, problem.inputs)
    return float(np.sum((problem.targets - predictions) ** 2))


def _factor_norms_sq(weights: CpFactors) -> float:
    return float(sum(np.sum(factor ** 2) for factor in weights.factors))


def _training_objective(
    weights: CpFactors,
    problem: _Problem,
    config: RegressionConfig,
) -> float:
    if config.penalty == PENALTY_EXACT:
        penalty = frobenius_norm_sq(weights)
    else:
        penalty = _factor_norms_sq(weights)
    return _residual(weights, problem) + config.lam * penalty


def _check_weights(weights: CpFactors, data: TrainingSet) -> None:
    if weights.shape != regression_shape(data):
        raise ShapeError(
            'weights {0} do not match data shape {1}'.format(
                weights.shape, regression_shape(data),
            ),
        )
    if data.samples < 1:
        raise ValidationError('training set is empty')
