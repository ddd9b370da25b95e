"""Tests utilities.

Contains shared fixtures.
"""


import pytest

from fpsp_py.regression.config import RegressionConfig, TrainingSet
from fpsp_py.synth.config import SynthConfig
from fpsp_py.synth.planted import plant_regression_instance
from fpsp_py.tensors.cp import CpFactors
from fpsp_py.tensors.dense import DenseTensor
from fpsp_py.utils import make_rng


@pytest.fixture(scope='session')
def planted() -> tuple[TrainingSet, CpFactors]:
    """Return a noiseless instance generated by rank-2 weights.

    P = 3, maps are 4 x 4 and I = 40.

    Returns:
        tuple[TrainingSet, CpFactors]: Samples and planted weights.
    """
    config = SynthConfig(
        seed=3,
        persons=3,
        images=40,
        shape=(4, 4),
        planted_rank=2,
        noise=0.0,
    )
    return plant_regression_instance(config)


@pytest.fixture
def random_data() -> TrainingSet:
    """Return six random samples with P = 2 and 3 x 2 maps.

    Returns:
        TrainingSet: Random samples.
    """
    rng = make_rng(11)
    return TrainingSet(
        inputs=DenseTensor(rng.random((6, 2, 3, 2))),
        targets=DenseTensor(rng.random((6, 3, 2))),
    )


@pytest.fixture
def small_config() -> RegressionConfig:
    """Return a rank-2 configuration matching random_data.

    Returns:
        RegressionConfig: Configuration.
    """
    return RegressionConfig(
        rank=2,
        lam=0.5,
        max_sweeps=50,
        seed=1,
        working_shape=(3, 2),
    )
