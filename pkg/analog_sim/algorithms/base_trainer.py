#!/usr/bin/env python3
"""
Base Trainer Class
Foundation for all training algorithms acting on analog tiles
"""

from collections import deque
from dataclasses import dataclass, field
from typing import Any, Deque, Dict, List, Optional

import numpy as np

from ..core.algorithm_config import ALGORITHM_DISPLAY_NAMES
from ..core.logger import get_logger
from ..hardware.device import DeviceModel
from ..hardware.pulse_engine import plan_update, transfer_write
from ..hardware.tile import Tile
from ..models.experiment import AlgorithmConfig
from ..utils.rng import StreamFactory


@dataclass
class TrainerState:
    algo: str
    alpha: float
    beta: Optional[float] = None
    warm_k: int = 0
    loss_history: Deque[float] = field(default_factory=deque)
    digital_buffer: Optional[np.ndarray] = None
    transfer_threshold: Optional[float] = None

    def summary(self) -> Dict[str, Any]:
        return {
            'algo': self.algo,
            'alpha': self.alpha,
            'beta': self.beta,
            'warm_k': self.warm_k,
            'history': list(self.loss_history),
            'buffer_norm': None if self.digital_buffer is None else float(np.abs(self.digital_buffer).max()),
            'transfer_threshold': self.transfer_threshold,
        }


class BaseTrainer:
    """Owns the tiles of one layer and applies its algorithm's update per sample"""

    algorithm = "base"

    def __init__(self, config: AlgorithmConfig, device: DeviceModel, streams: StreamFactory,
                 layer: int = 0):
        self.config = config
        self.device = device
        self.streams = streams
        self.layer = layer
        self.name = ALGORITHM_DISPLAY_NAMES.get(self.algorithm, self.algorithm)
        self.state = TrainerState(
            algo=self.algorithm,
            alpha=config.alpha,
            loss_history=deque(maxlen=config.history_size),
        )
        self.events: List[Dict[str, Any]] = []
        self.steps_taken = 0
        self.logger = get_logger(f"algorithms.{self.algorithm}")

    # ---- structure -------------------------------------------------------

    @property
    def tiles(self) -> List[Tile]:
        raise NotImplementedError

    @property
    def gradient_tile(self) -> Tile:
        """Tile receiving the pulsed gradient"""
        raise NotImplementedError

    def effective_weights(self) -> np.ndarray:
        raise NotImplementedError

    def forward(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(x, dtype=float) @ self.effective_weights()

    def backward(self, d: np.ndarray) -> np.ndarray:
        return np.asarray(d, dtype=float) @ self.effective_weights().T

    # ---- updates ---------------------------------------------------------

    def step(self, x: np.ndarray, delta: np.ndarray) -> None:
        """Descend along -outer(x, delta) for one sample, then advance the clock"""
        raise NotImplementedError

    def record_loss(self, loss: float) -> None:
        self.state.loss_history.append(float(loss))

    def pulse_gradient(self, tile: Tile, tile_index: int, x: np.ndarray, delta: np.ndarray,
                       alpha: float) -> np.ndarray:
        plan = plan_update(x, -np.asarray(delta, dtype=float), alpha, tile.model, self.config.bl)
        rng = self.streams.pulse(self.layer, tile_index, self.steps_taken)
        return tile.apply(plan, rng)

    def pulse_transfer(self, dst: Tile, dst_index: int, values: np.ndarray, col: int,
                       beta: float, source: int, kind: str = "transfer") -> np.ndarray:
        rng = self.streams.pulse(self.layer, dst_index, self.steps_taken)
        realized = transfer_write(dst, values, col, beta, rng)
        self.events.append({
            'step': self.steps_taken, 'kind': kind, 'source': source,
            'destination': dst_index, 'column': col,
        })
        self.logger.debug("t=%d %s %s -> %s col %d", self.steps_taken, kind, source, dst_index, col)
        return realized

    # ---- reporting -------------------------------------------------------

    def pulse_count(self) -> int:
        return sum(tile.pulse_count for tile in self.tiles)

    def transfer_count(self, destination: int, kind: Optional[str] = None) -> int:
        return sum(1 for event in self.events
                   if event['destination'] == destination and (kind is None or event['kind'] == kind))

    def to_checkpoint(self) -> Dict[str, Any]:
        return {
            'algorithm': self.algorithm,
            'layer': self.layer,
            'steps_taken': self.steps_taken,
            'state': self.state.summary(),
            'tiles': [tile.to_checkpoint() for tile in self.tiles],
        }

    def get_info(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'algorithm': self.algorithm,
            'layer': self.layer,
            'tiles': len(self.tiles),
            'shape': list(self.tiles[0].shape),
            'steps': self.steps_taken,
            'pulses': self.pulse_count(),
        }
