"""Applying and storing fitted models.

Model file layout, all integers little-endian:

    8 bytes   magic b'FPSPCP01'
    8 bytes   unsigned header length n
    n bytes   UTF-8 JSON header
    ...       float64 blocks, row-major, in header `blocks` order

The header holds format, shape, rank, lambda, seed, persons,
objective_trace, stop_reason, the full regression config and one
{"name", "shape"} entry per block: the five factors in update order,
then `target_offset` when the model was fitted on centered targets.
"""

import json
import struct
from dataclasses import asdict
from pathlib import Path
from typing import Any, Union

import numpy as np

from fpsp_py.errors import ShapeError, ValidationError
from fpsp_py.regression.als import predict_samples
from fpsp_py.regression.config import RegressionConfig
from fpsp_py.regression.results import FittedModel
from fpsp_py.regression.utils import FACTOR_NAMES, INPUT_MODES
from fpsp_py.saliency.maps import SaliencyMap
from fpsp_py.tensors.cp import CpFactors, contract_leading
from fpsp_py.tensors.dense import DenseTensor
from fpsp_py.utils import FloatArray

MODEL_MAGIC = b'FPSPCP01'
MODEL_FORMAT = 1
OFFSET_BLOCK = 'target_offset'

_LENGTH = struct.Struct('<Q')
_BLOCK_DTYPE = np.dtype('<f8')


def predict_raw(model: FittedModel, inputs: DenseTensor) -> FloatArray:
    """Contract one input with the weights, before post-processing.

    Linear in the input when the model has no target offset.

    Args:
        model (FittedModel): Fitted model.
        inputs (DenseTensor): (P, d1', d2') stack of training-person maps.

    Returns:
        FloatArray: (d1', d2') prediction, possibly negative.

    Raises:
        ShapeError: Input does not match the model.
    """
    expected = model.weights.shape[:INPUT_MODES]
    if inputs.shape != expected:
        raise ShapeError(
            'model expects input {0}, got {1}'.format(expected, inputs.shape),
        )
    raw = contract_leading(inputs, model.weights, INPUT_MODES).values
    if model.target_offset is not None:
        raw = raw + model.target_offset
    return np.asarray(raw, dtype=np.float64)


def predict(model: FittedModel, inputs: DenseTensor) -> SaliencyMap:
    """Predict the target person's map for one image.

    Negative values are clamped to 0 and the result max-normalized; an
    all-zero prediction stays all-zero.

    Args:
        model (FittedModel): Fitted model.
        inputs (DenseTensor): (P, d1', d2') stack of training-person maps.

    Returns:
        SaliencyMap: Prediction at the working shape.
    """
    return SaliencyMap.from_unbounded(predict_raw(model, inputs))


def predict_batch(
    model: FittedModel,
    inputs: FloatArray,
) -> list[SaliencyMap]:
    """Predict maps for a stack of inputs.

    Args:
        model (FittedModel): Fitted model.
        inputs (FloatArray): (I, P, d1', d2') inputs.

    Returns:
        list[SaliencyMap]: One post-processed prediction per input.

    Raises:
        ShapeError: Inputs do not match the model.
    """
    expected = model.weights.shape[:INPUT_MODES]
    if inputs.ndim != INPUT_MODES + 1 or inputs.shape[1:] != expected:
        raise ShapeError(
            'model expects inputs (I, *{0}), got {1}'.format(
                expected, inputs.shape,
            ),
        )
    raw = predict_samples(model.weights, inputs)
    if model.target_offset is not None:
        raw = raw + model.target_offset
    return [SaliencyMap.from_unbounded(sample) for sample in raw]


def save_model(path: Union[str, Path], model: FittedModel) -> None:
    """Write a model file.

    Args:
        path (Union[str, Path]): Destination.
        model (FittedModel): Model to store.
    """
    blocks = list(zip(FACTOR_NAMES, model.weights.factors))
    if model.target_offset is not None:
        blocks.append((OFFSET_BLOCK, model.target_offset))
    header = {
        'format': MODEL_FORMAT,
        'shape': list(model.weights.shape),
        'rank': model.weights.rank,
        'lambda': model.config.lam,
        'seed': model.config.seed,
        'persons': list(model.persons),
        'objective_trace': list(model.objective_trace),
        'stop_reason': model.stop_reason,
        'config': asdict(model.config),
        'blocks': [
            {'name': name, 'shape': list(block.shape)}
            for name, block in blocks
        ],
    }
    encoded = json.dumps(header, sort_keys=True).encode('utf-8')
    with open(path, 'wb') as model_file:
        model_file.write(MODEL_MAGIC)
        model_file.write(_LENGTH.pack(len(encoded)))
        model_file.write(encoded)
        for _, block in blocks:
            model_file.write(
                np.ascontiguousarray(block, dtype=_BLOCK_DTYPE).tobytes(),
            )


def load_model(path: Union[str, Path]) -> FittedModel:
    """Read a model file written by save_model.

    Args:
        path (Union[str, Path]): Model file.

    Returns:
        FittedModel: Stored model.

    Raises:
        ValidationError: The file is not a valid model file.
    """
    payload = Path(path).read_bytes()
    prefix = len(MODEL_MAGIC) + _LENGTH.size
    if len(payload) < prefix or not payload.startswith(MODEL_MAGIC):
        raise ValidationError('{0} is not a model file'.format(path))
    (header_length,) = _LENGTH.unpack_from(payload, len(MODEL_MAGIC))
    header = _parse_header(path, payload[prefix:prefix + header_length])
    arrays = _read_blocks(path, payload, prefix + header_length, header)
    factors = tuple(arrays[name] for name in FACTOR_NAMES)
    return FittedModel(
        weights=CpFactors(factors),
        config=RegressionConfig(**header['config']),
        objective_trace=tuple(header['objective_trace']),
        persons=tuple(header['persons']),
        target_offset=arrays.get(OFFSET_BLOCK),
        stop_reason=header.get('stop_reason', ''),
    )


def _parse_header(path: Union[str, Path], raw: bytes) -> dict[str, Any]:
    try:
        header: dict[str, Any] = json.loads(raw.decode('utf-8'))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ValidationError(
            '{0}: unreadable model header'.format(path),
        ) from exc
    if header.get('format') != MODEL_FORMAT:
        raise ValidationError(
            '{0}: unsupported model format {1!r}'.format(
                path, header.get('format'),
            ),
        )
    return header


def _read_blocks(
    path: Union[str, Path],
    payload: bytes,
    offset: int,
    header: dict[str, Any],
) -> dict[str, FloatArray]:
    arrays = {}
    for block in header['blocks']:
        shape = tuple(block['shape'])
        count = int(np.prod(shape))
        end = offset + count * _BLOCK_DTYPE.itemsize
        if end > len(payload):
            raise ValidationError(
                '{0}: truncated block {1}'.format(path, block['name']),
            )
        values = np.frombuffer(
            payload, dtype=_BLOCK_DTYPE, count=count, offset=offset,
        )
        arrays[block['name']] = values.astype(np.float64).reshape(shape)
        offset = end
    if offset != len(payload):
        raise ValidationError(
            '{0}: {1} trailing bytes'.format(path, len(payload) - offset),
        )
    missing = [name for name in FACTOR_NAMES if name not in arrays]
    if missing:
        raise ValidationError(
            '{0}: missing blocks {1}'.format(path, ', '.join(missing)),
        )
    return arrays
