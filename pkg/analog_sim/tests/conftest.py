"""
Shared fixtures: seeded generators, devices, synthetic IDX data and small configs
"""

import numpy as np
import pytest

from analog_sim.hardware.device import DeviceModel
from analog_sim.models.experiment import AlgorithmConfig, ExperimentConfig, ProblemConfig
from analog_sim.parsers.idx_parser import write_synthetic_mnist


@pytest.fixture(autouse=True)
def _isolated_env(monkeypatch):
    for name in ("SIM_SEED", "ANALOG_SIM_DATA_DIR", "ANALOG_SIM_DEBUG"):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def ideal_device():
    return DeviceModel.ideal(tau=1.0, dw_min=0.5)


@pytest.fixture
def ald_device():
    return DeviceModel.asymmetric_linear(tau=1.0, dw_min=0.5)


@pytest.fixture
def fine_ald_device():
    return DeviceModel.asymmetric_linear(tau=1.0, dw_min=0.05)


@pytest.fixture
def idx_dir(tmp_path):
    out = tmp_path / "mnist"
    write_synthetic_mnist(out, train=48, test=16, seed=3)
    return out


@pytest.fixture
def quadratic_config(tmp_path):
    def build(algorithm="analog_sgd", steps=200, seeds=(0,), **algo_kwargs):
        return ExperimentConfig(
            name="quad",
            problem=ProblemConfig(kind="quadratic", dim=3, sigma=0.05, noise="gaussian"),
            device=DeviceModel.asymmetric_linear(tau=1.0, dw_min=0.05),
            algorithm=AlgorithmConfig(name=algorithm, alpha=0.1, **algo_kwargs),
            seeds=tuple(seeds),
            steps=steps,
            log_interval=10,
            output_dir=str(tmp_path / "runs"),
        )

    return build


@pytest.fixture
def toy_config(tmp_path):
    def build(num_tiles=2, steps=400, seeds=(0,), **overrides):
        return ExperimentConfig(
            name="toy",
            problem=ProblemConfig(kind="toy"),
            device=DeviceModel.asymmetric_linear(tau=1.0, dw_min=0.5),
            algorithm=AlgorithmConfig(
                name="residual", num_tiles=num_tiles, alpha=1.0, gamma=0.4, transfer_lr=0.1,
                transfer_every_vec=(40, 8, 8, 8, 8, 8, 8),
            ),
            seeds=tuple(seeds),
            steps=steps,
            log_interval=100,
            output_dir=str(tmp_path / "runs"),
            **overrides,
        )

    return build
