#!/usr/bin/env python3
"""
Analog SGD - the gradient is pulsed straight into a single tile
"""

from typing import List, Optional, Tuple

import numpy as np

from ..hardware.device import DeviceModel
from ..hardware.pulse_engine import plan_update
from ..hardware.tile import Tile, TileInit, new_tile
from ..models.experiment import AlgorithmConfig
from ..utils.rng import StreamFactory
from .base_trainer import BaseTrainer


def analog_sgd_step(tile: Tile, x: np.ndarray, delta: np.ndarray, alpha: float,
                    rng: np.random.Generator, bl: Optional[int] = None) -> np.ndarray:
    """W <- W - alpha * outer(x, delta) through the device; returns the realized change"""
    plan = plan_update(x, -np.asarray(delta, dtype=float), alpha, tile.model, bl)
    return tile.apply(plan, rng)


class AnalogSGDTrainer(BaseTrainer):
    algorithm = "analog_sgd"

    def __init__(self, config: AlgorithmConfig, device: DeviceModel, streams: StreamFactory,
                 shape: Tuple[int, int], layer: int = 0, init: Optional[TileInit] = None):
        super().__init__(config, device, streams, layer)
        self.tile = new_tile(shape[0], shape[1], device, init, streams.init(layer))

    @property
    def tiles(self) -> List[Tile]:
        return [self.tile]

    @property
    def gradient_tile(self) -> Tile:
        return self.tile

    def effective_weights(self) -> np.ndarray:
        return self.tile.weights

    def forward(self, x: np.ndarray) -> np.ndarray:
        return self.tile.read_forward(x)

    def backward(self, d: np.ndarray) -> np.ndarray:
        return self.tile.read_backward(d)

    def step(self, x: np.ndarray, delta: np.ndarray) -> None:
        rng = self.streams.pulse(self.layer, 0, self.steps_taken)
        analog_sgd_step(self.tile, x, delta, self.config.alpha, rng, self.config.bl)
        self.steps_taken += 1
