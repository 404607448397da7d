#!/usr/bin/env python3
"""
Toy least squares (w - b)^2 with a 16-bit quantized target
"""

from typing import Optional, Tuple

import numpy as np

from ..core.exceptions import PreconditionError

TARGET_BITS = 16
TARGET_LEVELS = 2 ** TARGET_BITS - 1


def target_from_index(k: int) -> float:
    """b = -1 + k * 2 / (2^16 - 1)"""
    if not 0 <= k <= TARGET_LEVELS:
        raise PreconditionError(f"target index must lie in [0, {TARGET_LEVELS}], got {k}")
    return -1.0 + k * 2.0 / TARGET_LEVELS


def toy_target_16bit(rng: np.random.Generator) -> float:
    return target_from_index(int(rng.integers(0, TARGET_LEVELS + 1)))


class ToyProblem:
    """Scalar least squares on a (1, 1) tile"""

    kind = "toy"
    shape: Tuple[int, int] = (1, 1)
    noisy = False

    def __init__(self, target: float):
        if not -1.0 <= target <= 1.0:
            raise PreconditionError(f"toy target must lie in [-1, 1], got {target}")
        self.target = float(target)
        self.w_star = np.array([self.target])

    def loss(self, W: np.ndarray) -> float:
        return float((np.asarray(W, dtype=float).ravel()[0] - self.target) ** 2)

    def dist2(self, W: np.ndarray) -> float:
        return self.loss(W)

    def gradient(self, W: np.ndarray, rng: Optional[np.random.Generator] = None) -> np.ndarray:
        return 2.0 * (np.asarray(W, dtype=float).ravel() - self.target)

    def sample(self, W: np.ndarray, rng: Optional[np.random.Generator] = None
               ) -> Tuple[np.ndarray, np.ndarray]:
        return self.gradient(W), np.ones(1)
