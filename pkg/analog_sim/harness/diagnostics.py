#!/usr/bin/env python3
"""
Diagnostics - saturation amplification factors and error-floor estimates

With r_t = ||W_t||_inf^2 / tau_max^2:
    S_T = mean_t r_t / (1 - r_t)
    R_T = mean_t 2L / (1 - r_t)
A trajectory touching the bounds makes both diverge; they are reported as inf.
"""

import math
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from ..core.exceptions import PreconditionError
from ..models.record import RunRecord


def _saturation_ratio(linf: float, tau_max: float) -> float:
    return (linf / tau_max) ** 2


def diagnostics_sr(trajectory: Iterable[float], tau_max: float, L: float) -> Tuple[float, float]:
    """S_T and R_T over a series of ||W_t||_inf values"""
    if tau_max <= 0:
        raise PreconditionError(f"tau_max must be positive, got {tau_max}")
    ratios = np.array([_saturation_ratio(float(v), tau_max) for v in trajectory])
    if ratios.size == 0:
        raise PreconditionError("diagnostics need a non-empty trajectory")
    if np.any(ratios >= 1.0):
        return math.inf, math.inf
    headroom = 1.0 - ratios
    return float(np.mean(ratios / headroom)), float(np.mean(2.0 * L / headroom))


class RunningSR:
    """Accumulates S_T and R_T one iterate at a time"""

    def __init__(self, tau_max: float, L: float = 1.0):
        self.tau_max = tau_max
        self.L = L
        self.count = 0
        self._s_sum = 0.0
        self._r_sum = 0.0
        self.saturated = False

    def update(self, linf: float) -> None:
        ratio = _saturation_ratio(linf, self.tau_max)
        self.count += 1
        if ratio >= 1.0:
            self.saturated = True
            return
        self._s_sum += ratio / (1.0 - ratio)
        self._r_sum += 2.0 * self.L / (1.0 - ratio)

    @property
    def values(self) -> Tuple[float, float]:
        if self.count == 0:
            return math.nan, math.nan
        if self.saturated:
            return math.inf, math.inf
        return self._s_sum / self.count, self._r_sum / self.count


def tail_mean(series: Sequence[float], tail_fraction: float) -> float:
    if not 0.0 < tail_fraction <= 1.0:
        raise PreconditionError(f"tail_fraction must lie in (0, 1], got {tail_fraction}")
    values = np.asarray(series, dtype=float)
    count = int(math.floor(values.size * tail_fraction))
    if count < 1:
        raise PreconditionError(
            f"empty tail: {values.size} intervals with tail_fraction {tail_fraction}"
        )
    return float(np.mean(values[-count:]))


def floor_estimate(record: RunRecord, tail_fraction: float = 0.2,
                   metric: Optional[str] = None) -> float:
    """Mean squared distance to the optimum (or loss when unknown) over the record's tail"""
    if metric is None:
        metric = "dist2" if record.dist2 is not None else "loss"
    series = record.dist2 if metric == "dist2" else record.losses
    if series is None:
        raise PreconditionError("record has no distance-to-optimum series")
    return tail_mean(series, tail_fraction)


def lower_bound_shape(sigma: float, S_T: float, L: float) -> float:
    """sigma^2 * S_T / L^2, the asymmetry floor shape for Analog SGD"""
    return sigma ** 2 * S_T / L ** 2
