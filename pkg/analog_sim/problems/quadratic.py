#!/usr/bin/env python3
"""
Quadratic - f(W) = L/2 ||W - W*||^2 with configurable gradient noise

Weights are column vectors stored on (D, 1) tiles; a gradient g reaches the
trainer as the rank-1 pair (g, [1]).
"""

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..core.exceptions import PreconditionError
from ..utils.rng import StreamFactory

NOISE_KINDS = ("none", "gaussian", "two_point")
_REPLICA_TOL = 1e-12
_P_EPS = 1e-12


@dataclass(frozen=True)
class NoiseModel:
    kind: str = "none"
    sigma: float = 0.0
    tau_max: float = 1.0

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise PreconditionError(f"unknown noise model '{self.kind}'")
        if self.sigma < 0:
            raise PreconditionError(f"sigma must be non-negative, got {self.sigma}")


def two_point_probability(w: float, tau_max: float) -> float:
    """p = (1 - w / tau_max) / 2"""
    p = 0.5 * (1.0 - w / tau_max)
    if abs(w) <= tau_max:
        assert -_P_EPS <= p <= 1.0 + _P_EPS, f"two-point probability {p} outside [0, 1]"
    # unbounded iterates (digital reference runs) are clipped
    return min(max(p, 0.0), 1.0)


def max_two_point_sigma(tau_max: float, L: float, dim: int) -> float:
    """Largest sigma for which the two-point construction stays well defined"""
    return tau_max * L * math.sqrt(dim) / (4.0 * math.sqrt(3.0))


def two_point_noise(w: float, sigma: float, dim: int, tau_max: float,
                    rng: np.random.Generator) -> float:
    """
    Zero-mean two-point draw with variance sigma^2 / dim

    Takes eps+ = s * sqrt((1-p)/p) with probability p and
    eps- = -s * sqrt(p/(1-p)) otherwise, s = sigma / sqrt(dim).
    """
    p = min(max(two_point_probability(w, tau_max), _P_EPS), 1.0 - _P_EPS)
    scale = sigma / math.sqrt(dim)
    if rng.random() < p:
        return scale * math.sqrt((1.0 - p) / p)
    return -scale * math.sqrt(p / (1.0 - p))


def quadratic_grad(W: np.ndarray, w_star: np.ndarray, L: float, noise: NoiseModel,
                   rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """L (W - W*) plus one noise sample"""
    W = np.asarray(W, dtype=float)
    grad = L * (W - np.asarray(w_star, dtype=float))
    if noise.kind == "none" or noise.sigma == 0.0:
        return grad
    if rng is None:
        raise PreconditionError("noisy gradients need a random stream")
    dim = W.size
    if noise.kind == "gaussian":
        return grad + rng.normal(0.0, noise.sigma / math.sqrt(dim), size=W.shape)
    if np.ptp(W) > _REPLICA_TOL:
        raise PreconditionError("two-point noise needs identical coordinates in W")
    return grad + two_point_noise(float(W.flat[0]), noise.sigma, dim, noise.tau_max, rng)


class QuadraticProblem:
    """Noisy quadratic with a known optimum"""

    kind = "quadratic"

    def __init__(self, w_star: np.ndarray, L: float = 1.0, noise: Optional[NoiseModel] = None):
        self.w_star = np.asarray(w_star, dtype=float).ravel()
        if L <= 0:
            raise PreconditionError(f"L must be positive, got {L}")
        self.L = float(L)
        self.noise = noise or NoiseModel()

    @property
    def noisy(self) -> bool:
        return self.noise.kind != "none" and self.noise.sigma > 0.0

    @property
    def dim(self) -> int:
        return self.w_star.size

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.dim, 1)

    def loss(self, W: np.ndarray) -> float:
        diff = np.asarray(W, dtype=float).ravel() - self.w_star
        return 0.5 * self.L * float(diff @ diff)

    def dist2(self, W: np.ndarray) -> float:
        diff = np.asarray(W, dtype=float).ravel() - self.w_star
        return float(diff @ diff)

    def gradient(self, W: np.ndarray, rng: Optional[np.random.Generator] = None) -> np.ndarray:
        return quadratic_grad(np.asarray(W, dtype=float).ravel(), self.w_star, self.L, self.noise, rng)

    def sample(self, W: np.ndarray, rng: Optional[np.random.Generator] = None
               ) -> Tuple[np.ndarray, np.ndarray]:
        """Rank-1 pair (x, delta) whose outer product is the sampled gradient"""
        return self.gradient(W, rng), np.ones(1)


def digital_sgd(problem: QuadraticProblem, w0: np.ndarray, alpha: float, steps: int,
                streams: StreamFactory) -> Dict[str, List[float]]:
    """
    Exact-arithmetic SGD on the same problem, drawing noise from the same streams

    Returns the per-step loss and squared distance to the optimum.
    """
    W = np.asarray(w0, dtype=float).ravel().copy()
    losses: List[float] = []
    dist2: List[float] = []
    for t in range(steps):
        losses.append(problem.loss(W))
        dist2.append(problem.dist2(W))
        W = W - alpha * problem.gradient(W, streams.noise(t))
    return {"loss": losses, "dist2": dist2}
