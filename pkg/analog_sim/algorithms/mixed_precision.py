#!/usr/bin/env python3
"""
Mixed Precision - digital gradient accumulation programmed into the tile past a threshold
"""

from typing import List, Optional, Tuple

import numpy as np

from ..hardware.device import DeviceModel
from ..hardware.tile import Tile, TileInit, new_tile
from ..models.experiment import AlgorithmConfig
from ..utils.rng import StreamFactory
from .base_trainer import BaseTrainer, TrainerState


def program_pulses(tile: Tile, counts: np.ndarray, signs: np.ndarray) -> int:
    """Apply ``counts`` deterministic pulses of the given polarity per cell"""
    model = tile.model
    weights = tile.weights
    total = int(counts.sum())
    for k in range(1, int(counts.max(initial=0)) + 1):
        cells = counts >= k
        values = weights[cells]
        polarity = signs[cells]
        response = np.where(polarity > 0, model.response_plus(values), model.response_minus(values))
        weights[cells] = np.clip(values + polarity * model.step * response, model.w_min, model.w_max)
    tile.pulse_count += total
    return total


class MixedPrecisionTrainer(BaseTrainer):
    algorithm = "mp"

    def __init__(self, config: AlgorithmConfig, device: DeviceModel, streams: StreamFactory,
                 shape: Tuple[int, int], layer: int = 0, init: Optional[TileInit] = None):
        super().__init__(config, device, streams, layer)
        self.tile = new_tile(shape[0], shape[1], device, init, streams.init(layer))
        self.state.digital_buffer = np.zeros(shape)
        self.state.transfer_threshold = device.step

    @property
    def tiles(self) -> List[Tile]:
        return [self.tile]

    @property
    def gradient_tile(self) -> Tile:
        return self.tile

    def effective_weights(self) -> np.ndarray:
        return self.tile.weights

    def step(self, x: np.ndarray, delta: np.ndarray) -> None:
        mp_step(self, x, delta)


def mp_step(trainer: MixedPrecisionTrainer, x: np.ndarray, delta: np.ndarray) -> TrainerState:
    state = trainer.state
    acc = state.digital_buffer
    acc -= trainer.config.alpha * np.outer(x, delta)
    if (trainer.steps_taken + 1) % trainer.config.program_every == 0:
        threshold = state.transfer_threshold
        counts = np.floor(np.abs(acc) / threshold).astype(np.int64)
        if counts.any():
            signs = np.sign(acc)
            program_pulses(trainer.tile, counts, signs)
            acc -= signs * counts * threshold
    trainer.steps_taken += 1
    return state
