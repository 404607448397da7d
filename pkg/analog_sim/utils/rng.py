#!/usr/bin/env python3
"""
Seeded stream derivation

master seed -> run -> (domain, layer, tile, step) keys, each mapped to an
independent numpy Generator through SeedSequence spawn keys. A stream is a
pure function of its key, so adding a tile or a layer never perturbs the
streams of the others and parallel execution stays reproducible.
"""

from typing import Tuple

import numpy as np

# Stream domains
PULSE = 0
NOISE = 1
DATA = 2
INIT = 3
VALIDATE = 4


class StreamFactory:
    """Hands out generators keyed by (domain, *indices)"""

    def __init__(self, seed: int):
        if seed < 0:
            raise ValueError(f"seed must be non-negative, got {seed}")
        self.seed = int(seed)

    def key(self, domain: int, *indices: int) -> Tuple[int, ...]:
        return (int(domain),) + tuple(int(i) for i in indices)

    def stream(self, domain: int, *indices: int) -> np.random.Generator:
        sequence = np.random.SeedSequence(self.seed, spawn_key=self.key(domain, *indices))
        return np.random.Generator(np.random.PCG64(sequence))

    def pulse(self, layer: int, tile: int, step: int) -> np.random.Generator:
        return self.stream(PULSE, layer, tile, step)

    def noise(self, step: int) -> np.random.Generator:
        return self.stream(NOISE, step)

    def data(self, epoch: int) -> np.random.Generator:
        return self.stream(DATA, epoch)

    def init(self, layer: int) -> np.random.Generator:
        return self.stream(INIT, layer)

    def __repr__(self) -> str:
        return f"StreamFactory(seed={self.seed})"
