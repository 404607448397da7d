#!/usr/bin/env python3
"""
Residual - multi-timescale residual learning over a composite of tiles

Tile N accumulates the pulsed gradient of the composite weight every step.
Each slower tile n is written from one cursor column of tile n+1 whenever
tile n+1 completes its inner loop, so tile n tracks the scaled residual
left by tiles 0..n-1. An optional warm start first seeds tiles 0..N-1 one
at a time from tile N, moving on whenever the loss plateaus.
"""

from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..hardware.composite import CompositeWeight
from ..hardware.device import DeviceModel
from ..hardware.tile import Tile, TileInit
from ..models.experiment import AlgorithmConfig
from ..utils.rng import StreamFactory
from .base_trainer import BaseTrainer, TrainerState

AGGRESSIVE_SWITCHES = 3
MILD_WINDOW = 5
MILD_INCREASES = 2


def loss_plateau(history: Sequence[float], k: int) -> bool:
    """
    Plateau test on the recorded loss series

    For the first switches (k <= 3) any increase counts; afterwards at least
    two increases over the last five transitions are needed.
    """
    history = list(history)
    if k <= AGGRESSIVE_SWITCHES:
        if len(history) < 2:
            return False
        return history[-1] > history[-2]
    if len(history) < MILD_WINDOW + 1:
        return False
    window = history[-(MILD_WINDOW + 1):]
    increases = sum(1 for prev, cur in zip(window, window[1:]) if cur > prev)
    return increases >= MILD_INCREASES


class ResidualTrainer(BaseTrainer):
    algorithm = "residual"

    def __init__(self, config: AlgorithmConfig, device: DeviceModel, streams: StreamFactory,
                 shape: Tuple[int, int], layer: int = 0, init: Optional[TileInit] = None):
        super().__init__(config, device, streams, layer)
        transfer_every = config.resolved_transfer_every()
        init_rng = streams.init(layer)
        if config.gamma_vec is not None:
            self.composite = CompositeWeight.from_gamma_vec(
                shape[0], shape[1], device, config.gamma_vec, transfer_every, init, init_rng)
        else:
            self.composite = CompositeWeight.from_gamma(
                shape[0], shape[1], device, config.num_tiles, config.gamma, transfer_every, init, init_rng)
        self.transfer_lrs = config.resolved_transfer_lrs()
        self.state.beta = self.transfer_lrs[0] if self.transfer_lrs else None
        n_last = self.composite.n_last
        # without warm start the cascade runs from the first step
        self.state.warm_k = 0 if config.warm_start and n_last > 0 else n_last

    @property
    def tiles(self) -> List[Tile]:
        return self.composite.tiles

    @property
    def gradient_tile(self) -> Tile:
        return self.composite.gradient_tile

    @property
    def in_warm_start(self) -> bool:
        return self.state.warm_k < self.composite.n_last

    def effective_weights(self) -> np.ndarray:
        return self.composite.effective_weights()

    def forward(self, x: np.ndarray) -> np.ndarray:
        return self.composite.composite_forward(x)

    def backward(self, d: np.ndarray) -> np.ndarray:
        return self.composite.composite_backward(d)

    def record_loss(self, loss: float) -> None:
        super().record_loss(loss)
        if self.in_warm_start and loss_plateau(self.state.loss_history, self.state.warm_k):
            self.state.warm_k += 1
            self.logger.info("layer %d: loss plateau, warm start moves to tile %d",
                             self.layer, self.state.warm_k)

    def step(self, x: np.ndarray, delta: np.ndarray) -> None:
        residual_step(self, x, delta)

    def to_checkpoint(self) -> Dict[str, Any]:
        data = super().to_checkpoint()
        schedule = self.composite.to_checkpoint()
        schedule.pop("tiles")
        data["schedule"] = schedule
        return data


def _transfer_column(trainer: ResidualTrainer, source: int, destination: int, kind: str) -> None:
    composite = trainer.composite
    src = composite.tiles[source]
    col = src.advance_cursor()
    trainer.pulse_transfer(composite.tiles[destination], destination, src.read_column(col), col,
                           trainer.transfer_lrs[destination], source, kind)


def residual_step(trainer: ResidualTrainer, x: np.ndarray, delta: np.ndarray) -> TrainerState:
    """Gradient on tile N, then the warm-start or cascade transfers due at this step"""
    composite = trainer.composite
    n_last = composite.n_last
    t = composite.t_global

    trainer.pulse_gradient(composite.gradient_tile, n_last, x, delta, trainer.config.alpha)

    if trainer.in_warm_start:
        if composite.is_transfer_step(n_last - 1, t):
            _transfer_column(trainer, n_last, trainer.state.warm_k, "warm_start")
    else:
        for n in range(n_last - 1, -1, -1):
            if composite.is_transfer_step(n, t):
                _transfer_column(trainer, n + 1, n, "cascade")

    composite.tick()
    trainer.steps_taken += 1
    return trainer.state
