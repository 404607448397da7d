#!/usr/bin/env python3
"""
Device - pulse response models and the weight/conductance mapping

Parameters (tau_min, tau_max, dw_min) are in conductance units with the
symmetric point shifted to zero. A tile stores logical weights
w = kappa * c, so logical bounds are kappa * tau and one pulse moves a
logical weight by kappa * dw_min * q(w / kappa).
"""

import hashlib
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, Optional, Sequence, Union

import numpy as np

from ..core.exceptions import DeviceDomainError

ArrayLike = Union[float, np.ndarray]
ResponseFn = Callable[[np.ndarray], np.ndarray]

_BOUND_TOL = 1e-12
_VALIDATION_TOL = 1e-9
VALIDATION_POINTS = 1001


class DeviceKind(str, Enum):
    IDEAL = "ideal"
    ASYMMETRIC_LINEAR = "asymmetric_linear"
    CUSTOM = "custom"


DEVICE_KIND_ALIASES = {
    "ideal": DeviceKind.IDEAL,
    "symmetric": DeviceKind.IDEAL,
    "asymmetric_linear": DeviceKind.ASYMMETRIC_LINEAR,
    "asymmetric-linear": DeviceKind.ASYMMETRIC_LINEAR,
    "ald": DeviceKind.ASYMMETRIC_LINEAR,
    # soft-bounds reduces to the asymmetric linear device with symmetric bounds
    "softbounds": DeviceKind.ASYMMETRIC_LINEAR,
    "soft_bounds": DeviceKind.ASYMMETRIC_LINEAR,
    "custom": DeviceKind.CUSTOM,
}


@dataclass(frozen=True)
class ResponseTable:
    """Monotone piecewise-linear response curve, linearly interpolated"""

    grid: tuple
    values: tuple

    def __post_init__(self):
        if len(self.grid) != len(self.values) or len(self.grid) < 2:
            raise DeviceDomainError("response table needs >= 2 matching grid/value points")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise DeviceDomainError("response table grid must be strictly increasing")

    def __call__(self, w: np.ndarray) -> np.ndarray:
        return np.interp(w, self.grid, self.values)

    @classmethod
    def from_lists(cls, grid: Sequence[float], values: Sequence[float]) -> "ResponseTable":
        return cls(tuple(float(g) for g in grid), tuple(float(v) for v in values))


@dataclass(frozen=True)
class DeviceModel:
    """Immutable device description; safe to share across threads"""

    tau_min: float
    tau_max: float
    dw_min: float
    kind: DeviceKind = DeviceKind.ASYMMETRIC_LINEAR
    kappa: float = 1.0
    custom_plus: Optional[ResponseFn] = field(default=None, compare=False, repr=False)
    custom_minus: Optional[ResponseFn] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not (self.tau_min < 0.0 < self.tau_max):
            raise DeviceDomainError(
                f"bounds must satisfy tau_min < 0 < tau_max, got [{self.tau_min}, {self.tau_max}]"
            )
        if not (0.0 < self.dw_min <= self.tau_max - self.tau_min):
            raise DeviceDomainError(
                f"dw_min must lie in (0, tau_max - tau_min], got {self.dw_min}"
            )
        if not self.kappa > 0.0:
            raise DeviceDomainError(f"kappa must be positive, got {self.kappa}")
        if self.kind == DeviceKind.CUSTOM:
            if self.custom_plus is None or self.custom_minus is None:
                raise DeviceDomainError("custom device needs both q_plus and q_minus curves")
            self._validate_custom()

    # ---- constructors ----------------------------------------------------

    @classmethod
    def ideal(cls, tau: float = 1.0, dw_min: float = 0.01, kappa: float = 1.0) -> "DeviceModel":
        return cls(-tau, tau, dw_min, DeviceKind.IDEAL, kappa)

    @classmethod
    def asymmetric_linear(cls, tau: float = 1.0, dw_min: float = 0.01,
                          kappa: float = 1.0) -> "DeviceModel":
        return cls(-tau, tau, dw_min, DeviceKind.ASYMMETRIC_LINEAR, kappa)

    @classmethod
    def custom(cls, tau_min: float, tau_max: float, dw_min: float,
               q_plus: Union[ResponseFn, ResponseTable],
               q_minus: Union[ResponseFn, ResponseTable],
               kappa: float = 1.0) -> "DeviceModel":
        return cls(tau_min, tau_max, dw_min, DeviceKind.CUSTOM, kappa, q_plus, q_minus)

    @classmethod
    def from_config(cls, config: Dict[str, Any]) -> "DeviceModel":
        kind_name = str(config.get("kind", "asymmetric_linear")).strip().lower()
        if kind_name not in DEVICE_KIND_ALIASES:
            raise DeviceDomainError(f"unknown device kind '{kind_name}'")
        kind = DEVICE_KIND_ALIASES[kind_name]
        tau_max = float(config.get("tau_max", 1.0))
        tau_min = float(config.get("tau_min", -tau_max))
        dw_min = float(config["dw_min"]) if "dw_min" in config else (tau_max - tau_min) / float(
            config.get("n_states", 100))
        kappa = float(config.get("kappa", 1.0))
        if kind != DeviceKind.CUSTOM:
            return cls(tau_min, tau_max, dw_min, kind, kappa)
        table = config.get("table") or {}
        try:
            plus = ResponseTable.from_lists(table["grid"], table["q_plus"])
            minus = ResponseTable.from_lists(table["grid"], table["q_minus"])
        except KeyError as exc:
            raise DeviceDomainError(f"custom device table is missing '{exc.args[0]}'") from exc
        return cls.custom(tau_min, tau_max, dw_min, plus, minus, kappa)

    # ---- response factors (conductance units) ----------------------------

    def _check_domain(self, w: np.ndarray) -> None:
        if np.any(w < self.tau_min - _BOUND_TOL) or np.any(w > self.tau_max + _BOUND_TOL):
            raise DeviceDomainError(
                f"weight outside device bounds [{self.tau_min}, {self.tau_max}]"
            )

    def raw_q_plus(self, w: np.ndarray) -> np.ndarray:
        if self.kind == DeviceKind.IDEAL:
            return np.ones_like(w, dtype=float)
        if self.kind == DeviceKind.ASYMMETRIC_LINEAR:
            return 1.0 - w / self.tau_max
        return np.asarray(self.custom_plus(w), dtype=float)

    def raw_q_minus(self, w: np.ndarray) -> np.ndarray:
        if self.kind == DeviceKind.IDEAL:
            return np.ones_like(w, dtype=float)
        if self.kind == DeviceKind.ASYMMETRIC_LINEAR:
            return 1.0 - w / self.tau_min
        return np.asarray(self.custom_minus(w), dtype=float)

    def q_plus(self, w: ArrayLike) -> ArrayLike:
        arr = np.asarray(w, dtype=float)
        self._check_domain(arr)
        return _unwrap(self.raw_q_plus(arr), w)

    def q_minus(self, w: ArrayLike) -> ArrayLike:
        arr = np.asarray(w, dtype=float)
        self._check_domain(arr)
        return _unwrap(self.raw_q_minus(arr), w)

    def symmetric_F(self, w: ArrayLike) -> ArrayLike:
        arr = np.asarray(w, dtype=float)
        self._check_domain(arr)
        return _unwrap(0.5 * (self.raw_q_minus(arr) + self.raw_q_plus(arr)), w)

    def asymmetric_G(self, w: ArrayLike) -> ArrayLike:
        arr = np.asarray(w, dtype=float)
        self._check_domain(arr)
        return _unwrap(0.5 * (self.raw_q_minus(arr) - self.raw_q_plus(arr)), w)

    def saturation_H(self, w: ArrayLike) -> ArrayLike:
        arr = np.asarray(w, dtype=float)
        self._check_domain(arr)
        return _unwrap(self.raw_q_plus(arr) * self.raw_q_minus(arr), w)

    # ---- logical-weight view ---------------------------------------------

    @property
    def w_min(self) -> float:
        return self.kappa * self.tau_min

    @property
    def w_max(self) -> float:
        return self.kappa * self.tau_max

    @property
    def step(self) -> float:
        """Logical per-pulse increment at the symmetric point"""
        return self.kappa * self.dw_min

    def response_plus(self, weights: np.ndarray) -> np.ndarray:
        return self.raw_q_plus(weights / self.kappa)

    def response_minus(self, weights: np.ndarray) -> np.ndarray:
        return self.raw_q_minus(weights / self.kappa)

    def to_conductance(self, weights: np.ndarray) -> np.ndarray:
        return np.asarray(weights, dtype=float) / self.kappa

    # ---- summary ---------------------------------------------------------

    @property
    def n_states(self) -> int:
        return int(math.floor((self.tau_max - self.tau_min) / self.dw_min + _VALIDATION_TOL))

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "kind": self.kind.value,
            "tau_min": self.tau_min,
            "tau_max": self.tau_max,
            "dw_min": self.dw_min,
            "kappa": self.kappa,
        }
        if self.kind == DeviceKind.CUSTOM:
            data["table"] = self._response_table()
        return data

    def _response_table(self) -> Dict[str, list]:
        """Both curves on one grid, in the layout from_config reads back"""
        curves = (self.custom_plus, self.custom_minus)
        if all(isinstance(c, ResponseTable) for c in curves):
            # piecewise-linear curves are exact on the union of their knots
            grid = np.union1d(curves[0].grid, curves[1].grid)
        else:
            grid = np.linspace(self.tau_min, self.tau_max, VALIDATION_POINTS)
        return {
            "grid": [float(g) for g in grid],
            "q_plus": [float(v) for v in np.asarray(curves[0](grid), dtype=float)],
            "q_minus": [float(v) for v in np.asarray(curves[1](grid), dtype=float)],
        }

    def config_hash(self) -> str:
        payload = json.dumps(self.to_dict(), sort_keys=True).encode("utf-8")
        return hashlib.sha256(payload).hexdigest()[:16]

    def _validate_custom(self) -> None:
        grid = np.linspace(self.tau_min, self.tau_max, VALIDATION_POINTS)
        plus = self.raw_q_plus(grid)
        minus = self.raw_q_minus(grid)
        if abs(plus[-1]) > _VALIDATION_TOL or abs(minus[0]) > _VALIDATION_TOL:
            raise DeviceDomainError("custom responses must saturate: q_plus(tau_max) = q_minus(tau_min) = 0")
        if np.any(plus[:-1] <= 0.0) or np.any(minus[1:] <= 0.0):
            raise DeviceDomainError("custom responses must be positive inside the bounds")
        zero = np.array([0.0])
        if abs(self.raw_q_plus(zero)[0] - self.raw_q_minus(zero)[0]) > _VALIDATION_TOL:
            raise DeviceDomainError("custom responses must be symmetric at zero (G(0) = 0)")


def _unwrap(result: np.ndarray, original: ArrayLike) -> ArrayLike:
    if np.ndim(original) == 0:
        return float(result)
    return result


# Module-level operations

def q_plus(model: DeviceModel, w: ArrayLike) -> ArrayLike:
    return model.q_plus(w)


def q_minus(model: DeviceModel, w: ArrayLike) -> ArrayLike:
    return model.q_minus(w)


def symmetric_F(model: DeviceModel, w: ArrayLike) -> ArrayLike:
    return model.symmetric_F(w)


def asymmetric_G(model: DeviceModel, w: ArrayLike) -> ArrayLike:
    return model.asymmetric_G(w)


def saturation_H(model: DeviceModel, w: ArrayLike) -> ArrayLike:
    return model.saturation_H(w)


def n_states(model: DeviceModel) -> int:
    return model.n_states


def gamma_lower_bound(model: DeviceModel) -> float:
    """1 / n_states: the next tile's full range fits inside one pulse of this one"""
    return 1.0 / max(model.n_states, 1)


def kappa_schedule(sigma: float, lipschitz_g: float, w_max: float,
                   gamma: float, num_extra_tiles: int, dw_min: float) -> float:
    """
    Mapping constant kappa = (sigma * L_G * W_max)^(1/2) * (gamma^N * dw_min)^(-1/4)

    Analysis constants are supplied by the caller; the simulator never
    applies this automatically.
    """
    if min(sigma, lipschitz_g, w_max, gamma, dw_min) <= 0:
        raise DeviceDomainError("kappa schedule inputs must all be positive")
    return math.sqrt(sigma * lipschitz_g * w_max) * (gamma ** num_extra_tiles * dw_min) ** -0.25
