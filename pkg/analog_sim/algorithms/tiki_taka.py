#!/usr/bin/env python3
"""
Tiki-Taka v1/v2 - gradient accumulation on an auxiliary tile with periodic column transfer

v1 writes the aux column straight into the core tile. v2 routes it through
a digital buffer: the column is accumulated, written to core every
``buffer_write_every`` reads and then multiplied by ``buffer_decay``.
"""

from typing import List, Optional, Tuple

import numpy as np

from ..hardware.device import DeviceModel
from ..hardware.tile import Tile, TileInit, new_tile
from ..models.experiment import AlgorithmConfig
from ..utils.rng import StreamFactory
from .base_trainer import BaseTrainer, TrainerState

CORE = 0
AUX = 1


class TikiTakaV1Trainer(BaseTrainer):
    algorithm = "ttv1"

    def __init__(self, config: AlgorithmConfig, device: DeviceModel, streams: StreamFactory,
                 shape: Tuple[int, int], layer: int = 0, init: Optional[TileInit] = None):
        super().__init__(config, device, streams, layer)
        self.core = new_tile(shape[0], shape[1], device, init, streams.init(layer))
        self.aux = new_tile(shape[0], shape[1], device)
        self.state.beta = config.transfer_lr if config.transfer_lr is not None else 0.1

    @property
    def tiles(self) -> List[Tile]:
        return [self.core, self.aux]

    @property
    def gradient_tile(self) -> Tile:
        return self.aux

    def effective_weights(self) -> np.ndarray:
        if self.config.tt_gamma == 0.0:
            return self.core.weights
        return self.core.weights + self.config.tt_gamma * self.aux.weights

    def is_transfer_step(self) -> bool:
        return (self.steps_taken + 1) % self.config.transfer_period == 0

    def step(self, x: np.ndarray, delta: np.ndarray) -> None:
        ttv1_step(self, x, delta)


class TikiTakaV2Trainer(TikiTakaV1Trainer):
    algorithm = "ttv2"

    def __init__(self, config: AlgorithmConfig, device: DeviceModel, streams: StreamFactory,
                 shape: Tuple[int, int], layer: int = 0, init: Optional[TileInit] = None):
        super().__init__(config, device, streams, shape, layer, init)
        self.state.digital_buffer = np.zeros(shape)
        self.reads = 0

    def step(self, x: np.ndarray, delta: np.ndarray) -> None:
        ttv2_step(self, x, delta)


def ttv1_step(trainer: TikiTakaV1Trainer, x: np.ndarray, delta: np.ndarray) -> TrainerState:
    trainer.pulse_gradient(trainer.aux, AUX, x, delta, trainer.config.alpha)
    if trainer.is_transfer_step():
        col = trainer.aux.advance_cursor()
        trainer.pulse_transfer(trainer.core, CORE, trainer.aux.read_column(col), col,
                               trainer.state.beta, AUX)
    trainer.steps_taken += 1
    return trainer.state


def ttv2_step(trainer: TikiTakaV2Trainer, x: np.ndarray, delta: np.ndarray) -> TrainerState:
    trainer.pulse_gradient(trainer.aux, AUX, x, delta, trainer.config.alpha)
    if trainer.is_transfer_step():
        buffer = trainer.state.digital_buffer
        col = trainer.aux.advance_cursor()
        buffer[:, col] += trainer.aux.read_column(col)
        trainer.reads += 1
        if trainer.reads % trainer.config.buffer_write_every == 0:
            trainer.pulse_transfer(trainer.core, CORE, buffer[:, col].copy(), col,
                                   trainer.state.beta, AUX, "buffered")
            buffer[:, col] *= trainer.config.buffer_decay
    trainer.steps_taken += 1
    return trainer.state
