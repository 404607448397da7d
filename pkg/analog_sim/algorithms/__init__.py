"""
Training algorithms over analog tiles
"""

from typing import Optional, Tuple

from ..core.exceptions import ConfigError
from ..hardware.device import DeviceModel
from ..hardware.tile import TileInit
from ..models.experiment import AlgorithmConfig
from ..utils.rng import StreamFactory
from .analog_sgd import AnalogSGDTrainer, analog_sgd_step
from .base_trainer import BaseTrainer, TrainerState
from .mixed_precision import MixedPrecisionTrainer, mp_step
from .residual import ResidualTrainer, loss_plateau, residual_step
from .tiki_taka import TikiTakaV1Trainer, TikiTakaV2Trainer, ttv1_step, ttv2_step

TRAINERS = {
    'analog_sgd': AnalogSGDTrainer,
    'ttv1': TikiTakaV1Trainer,
    'ttv2': TikiTakaV2Trainer,
    'mp': MixedPrecisionTrainer,
    'residual': ResidualTrainer,
}


def build_trainer(config: AlgorithmConfig, device: DeviceModel, streams: StreamFactory,
                  shape: Tuple[int, int], layer: int = 0,
                  init: Optional[TileInit] = None) -> BaseTrainer:
    trainer_cls = TRAINERS.get(config.name)
    if trainer_cls is None:
        raise ConfigError(f"unknown algorithm '{config.name}'", "algorithm.name")
    return trainer_cls(config, device, streams, shape, layer, init)


__all__ = [
    'AnalogSGDTrainer', 'BaseTrainer', 'MixedPrecisionTrainer', 'ResidualTrainer',
    'TikiTakaV1Trainer', 'TikiTakaV2Trainer', 'TrainerState', 'TRAINERS',
    'analog_sgd_step', 'build_trainer', 'loss_plateau', 'mp_step', 'residual_step',
    'ttv1_step', 'ttv2_step',
]
