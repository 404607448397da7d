#!/usr/bin/env python3
"""
Composite - multi-tile weight W_bar = sum_n scale_n * W^(n) and its timescale schedule

Tiles are kept in math order: tile 0 is the coarsest and slowest, tile N
receives the gradient. ``transfer_every[k]`` holds T_{k+1}, the number of
updates of tile k+1 per update of tile k.
"""

from math import prod
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..core.exceptions import DeviceDomainError, TileIndexError, TileShapeError
from .device import DeviceModel
from .tile import Tile, TileInit, new_tile


def local_counter(t: int, n: int, transfer_every: Sequence[int]) -> int:
    """t_n = floor((t + 1) / prod(T_{n+1..N})); the gradient tile counts t itself"""
    num_edges = len(transfer_every)
    if n == num_edges:
        return t
    if not 0 <= n < num_edges:
        raise TileIndexError(f"tile index {n} out of range for {num_edges + 1} tiles")
    return (t + 1) // prod(transfer_every[n:])


def is_transfer_step(t: int, edge_n: int, transfer_every: Sequence[int]) -> bool:
    """
    True when tile ``edge_n + 1`` completes an inner loop at global step t

    The faster counter has to move at this step and land on a positive
    multiple of T_{n+1}, so tile n is written floor(t_{n+1} / T_{n+1})
    times over steps 0..t.
    """
    if not 0 <= edge_n < len(transfer_every):
        raise TileIndexError(f"transfer edge {edge_n} out of range for {len(transfer_every)} edges")
    faster = edge_n + 1
    current = local_counter(t, faster, transfer_every)
    previous = local_counter(t - 1, faster, transfer_every)
    return current > 0 and current != previous and current % transfer_every[edge_n] == 0


def transfer_every_from_vec(vec: Sequence[int], num_tiles: int) -> List[int]:
    """
    Map a gradient-tile-first period list onto math-order edges

    ``vec[i]`` is the period of the i-th fastest tile, so T_N = vec[0]
    and T_{k+1} = vec[N - 1 - k]. Entries past the slowest edge are unused.
    """
    num_edges = num_tiles - 1
    if len(vec) < num_edges:
        raise TileShapeError(f"{len(vec)} periods for {num_edges} transfer edges")
    return [int(vec[num_edges - 1 - k]) for k in range(num_edges)]


class CompositeWeight:
    """Ordered tiles with per-tile scales and a global step counter"""

    def __init__(self, tiles: List[Tile], scales: Sequence[float],
                 transfer_every: Optional[Sequence[int]] = None, gamma: Optional[float] = None):
        if not tiles:
            raise TileShapeError("composite weight needs at least one tile")
        shape = tiles[0].shape
        if any(tile.shape != shape for tile in tiles):
            raise TileShapeError("all tiles of a composite weight must share one shape")
        if len(scales) != len(tiles):
            raise TileShapeError(f"{len(scales)} scales for {len(tiles)} tiles")
        if any(s <= 0 for s in scales):
            raise DeviceDomainError("tile scales must be positive")
        if gamma is not None and not 0.0 < gamma < 1.0:
            raise DeviceDomainError(f"gamma must lie in (0, 1), got {gamma}")
        transfer_every = [1] * (len(tiles) - 1) if transfer_every is None else [int(v) for v in transfer_every]
        if len(transfer_every) != len(tiles) - 1:
            raise TileShapeError(
                f"{len(transfer_every)} transfer periods for {len(tiles) - 1} transfer edges"
            )
        if any(v < 1 for v in transfer_every):
            raise DeviceDomainError("transfer periods must be >= 1")

        self.tiles = tiles
        self.scales = np.asarray(scales, dtype=float)
        self.transfer_every = transfer_every
        self.gamma = gamma
        self.t_global = 0

    @classmethod
    def from_gamma(cls, rows: int, cols: int, model: DeviceModel, num_tiles: int, gamma: float,
                   transfer_every: Optional[Sequence[int]] = None,
                   first_init: Optional[TileInit] = None,
                   rng: Optional[np.random.Generator] = None) -> "CompositeWeight":
        """Tile 0 gets ``first_init``; every other tile starts at the symmetric point"""
        if num_tiles < 1:
            raise TileShapeError(f"num_tiles must be >= 1, got {num_tiles}")
        tiles = [new_tile(rows, cols, model, first_init, rng)]
        tiles += [new_tile(rows, cols, model) for _ in range(num_tiles - 1)]
        scales = [gamma ** n for n in range(num_tiles)]
        return cls(tiles, scales, transfer_every, gamma if num_tiles > 1 else None)

    @classmethod
    def from_gamma_vec(cls, rows: int, cols: int, model: DeviceModel, gamma_vec: Sequence[float],
                       transfer_every: Optional[Sequence[int]] = None,
                       first_init: Optional[TileInit] = None,
                       rng: Optional[np.random.Generator] = None) -> "CompositeWeight":
        """``gamma_vec`` lists scales gradient tile first, as the reference configs do"""
        num_tiles = len(gamma_vec)
        if num_tiles < 1:
            raise TileShapeError("gamma_vec must not be empty")
        tiles = [new_tile(rows, cols, model, first_init, rng)]
        tiles += [new_tile(rows, cols, model) for _ in range(num_tiles - 1)]
        scales = [float(gamma_vec[num_tiles - 1 - n]) for n in range(num_tiles)]
        return cls(tiles, scales, transfer_every)

    @property
    def num_tiles(self) -> int:
        return len(self.tiles)

    @property
    def n_last(self) -> int:
        """Index N of the gradient tile"""
        return len(self.tiles) - 1

    @property
    def gradient_tile(self) -> Tile:
        return self.tiles[-1]

    @property
    def shape(self):
        return self.tiles[0].shape

    def effective_weights(self) -> np.ndarray:
        return self.partial_sum(self.num_tiles)

    def partial_sum(self, n: int) -> np.ndarray:
        if not 0 <= n <= self.num_tiles:
            raise TileIndexError(f"partial sum index {n} out of range [0, {self.num_tiles}]")
        total = np.zeros(self.shape)
        for scale, tile in zip(self.scales[:n], self.tiles[:n]):
            total += scale * tile.weights
        return total

    def composite_forward(self, x: np.ndarray) -> np.ndarray:
        out = None
        for scale, tile in zip(self.scales, self.tiles):
            term = scale * tile.read_forward(x)
            out = term if out is None else out + term
        return out

    def composite_backward(self, d: np.ndarray) -> np.ndarray:
        out = None
        for scale, tile in zip(self.scales, self.tiles):
            term = scale * tile.read_backward(d)
            out = term if out is None else out + term
        return out

    forward = composite_forward
    backward = composite_backward

    def local_counter(self, n: int, t: Optional[int] = None) -> int:
        return local_counter(self.t_global if t is None else t, n, self.transfer_every)

    def is_transfer_step(self, edge_n: int, t: Optional[int] = None) -> bool:
        return is_transfer_step(self.t_global if t is None else t, edge_n, self.transfer_every)

    def tick(self) -> int:
        self.t_global += 1
        return self.t_global

    def pulse_count(self) -> int:
        return sum(tile.pulse_count for tile in self.tiles)

    def to_checkpoint(self) -> Dict[str, Any]:
        return {
            "tiles": [tile.to_checkpoint() for tile in self.tiles],
            "gamma_vec": [float(s) for s in self.scales[::-1]],
            "transfer_every": list(self.transfer_every),
            "t_global": self.t_global,
            "counters": [self.local_counter(n) for n in range(self.num_tiles)],
        }

    @classmethod
    def from_checkpoint(cls, data: Dict[str, Any]) -> "CompositeWeight":
        tiles = [Tile.from_checkpoint(entry) for entry in data["tiles"]]
        gamma_vec = data["gamma_vec"]
        scales = [gamma_vec[len(gamma_vec) - 1 - n] for n in range(len(gamma_vec))]
        composite = cls(tiles, scales, data.get("transfer_every"))
        composite.t_global = int(data.get("t_global", 0))
        return composite

    def __repr__(self) -> str:
        return (f"CompositeWeight(tiles={self.num_tiles}, shape={self.shape}, "
                f"scales={np.round(self.scales, 6).tolist()}, T={self.transfer_every})")
