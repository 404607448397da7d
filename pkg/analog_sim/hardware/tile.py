#!/usr/bin/env python3
"""
Tile - one analog crossbar array

Weights are stored as logical weights (kappa folded in), rows = input
dimension, columns = output dimension. The only mutation path is the pulse
engine; reads are exact.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Tuple

import numpy as np

from ..core.exceptions import AnalogSimError, DeviceDomainError, TileIndexError, TileShapeError
from .device import DeviceModel
from .pulse_engine import PulsePlan, apply_rank_update

_BOUND_TOL = 1e-12


class InitKind(str, Enum):
    ZERO = "zero"
    UNIFORM = "uniform"
    GIVEN = "given"


@dataclass(frozen=True)
class TileInit:
    kind: InitKind = InitKind.ZERO
    low: float = 0.0
    high: float = 0.0
    matrix: Optional[np.ndarray] = None

    @classmethod
    def zero(cls) -> "TileInit":
        return cls(InitKind.ZERO)

    @classmethod
    def uniform(cls, low: float, high: float) -> "TileInit":
        if high < low:
            raise DeviceDomainError(f"uniform init needs low <= high, got ({low}, {high})")
        return cls(InitKind.UNIFORM, float(low), float(high))

    @classmethod
    def given(cls, matrix) -> "TileInit":
        return cls(InitKind.GIVEN, matrix=np.array(matrix, dtype=float, ndmin=2))


class Tile:
    """Bounded weight matrix updated only through pulse events"""

    def __init__(self, weights: np.ndarray, model: DeviceModel, transfer_cursor: int = 0):
        weights = np.array(weights, dtype=float, ndmin=2)
        if weights.ndim != 2:
            raise TileShapeError(f"tile weights must be 2-D, got shape {weights.shape}")
        if np.any(weights < model.w_min - _BOUND_TOL) or np.any(weights > model.w_max + _BOUND_TOL):
            raise DeviceDomainError(
                f"tile weights outside device bounds [{model.w_min}, {model.w_max}]"
            )
        self.weights = np.clip(weights, model.w_min, model.w_max)
        self.model = model
        self.transfer_cursor = int(transfer_cursor) % weights.shape[1]
        self.pulse_count = 0

    @property
    def shape(self) -> Tuple[int, int]:
        return self.weights.shape

    @property
    def rows(self) -> int:
        return self.weights.shape[0]

    @property
    def cols(self) -> int:
        return self.weights.shape[1]

    def read_forward(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.rows:
            raise TileShapeError(f"forward input of size {x.shape[-1]} for tile with {self.rows} rows")
        return x @ self.weights

    def read_backward(self, d: np.ndarray) -> np.ndarray:
        d = np.asarray(d, dtype=float)
        if d.shape[-1] != self.cols:
            raise TileShapeError(f"backward input of size {d.shape[-1]} for tile with {self.cols} columns")
        return d @ self.weights.T

    def read_column(self, j: int) -> np.ndarray:
        if not 0 <= j < self.cols:
            raise TileIndexError(f"column {j} out of range for tile with {self.cols} columns")
        return self.weights[:, j].copy()

    def advance_cursor(self) -> int:
        current = self.transfer_cursor
        self.transfer_cursor = (current + 1) % self.cols
        return current

    def apply(self, plan: PulsePlan, rng: np.random.Generator) -> np.ndarray:
        return apply_rank_update(self, plan, rng)

    def linf(self) -> float:
        return float(np.max(np.abs(self.weights)))

    def conductance(self) -> np.ndarray:
        return self.model.to_conductance(self.weights)

    def to_checkpoint(self) -> Dict[str, Any]:
        return {
            "shape": list(self.shape),
            "device": self.model.to_dict(),
            "device_hash": self.model.config_hash(),
            "transfer_cursor": self.transfer_cursor,
            "pulse_count": self.pulse_count,
            "weights": self.weights.ravel().tolist(),
        }

    @classmethod
    def from_checkpoint(cls, data: Dict[str, Any], model: Optional[DeviceModel] = None) -> "Tile":
        model = model or DeviceModel.from_config(data["device"])
        if model.config_hash() != data.get("device_hash", model.config_hash()):
            raise AnalogSimError("checkpoint device hash does not match the supplied device")
        rows, cols = data["shape"]
        weights = np.asarray(data["weights"], dtype=float).reshape(rows, cols)
        tile = cls(weights, model, data.get("transfer_cursor", 0))
        tile.pulse_count = int(data.get("pulse_count", 0))
        return tile

    def __repr__(self) -> str:
        return f"Tile(shape={self.shape}, kind={self.model.kind.value}, linf={self.linf():.4g})"


def new_tile(rows: int, cols: int, model: DeviceModel, init: Optional[TileInit] = None,
             rng: Optional[np.random.Generator] = None) -> Tile:
    if rows < 1 or cols < 1:
        raise TileShapeError(f"tile dimensions must be positive, got ({rows}, {cols})")
    init = init or TileInit.zero()

    if init.kind == InitKind.ZERO:
        return Tile(np.zeros((rows, cols)), model)

    if init.kind == InitKind.UNIFORM:
        if init.low < model.w_min - _BOUND_TOL or init.high > model.w_max + _BOUND_TOL:
            raise DeviceDomainError(
                f"uniform init ({init.low}, {init.high}) exceeds bounds [{model.w_min}, {model.w_max}]"
            )
        if rng is None:
            raise AnalogSimError("uniform init requires a random stream")
        return Tile(rng.uniform(init.low, init.high, size=(rows, cols)), model)

    matrix = init.matrix
    if matrix.shape != (rows, cols):
        raise TileShapeError(f"given init of shape {matrix.shape} for tile ({rows}, {cols})")
    return Tile(matrix, model)
