#!/usr/bin/env python3
"""
Cost Model - per-sample update latency and digital storage estimates

Pure functions over CostParams. FP time is the FP-op count divided by an
effective throughput shared by ``tiles_sharing`` tiles; analog time is the
pulse and readout time of each algorithm's update.
"""

from dataclasses import asdict, dataclass
from typing import Dict

from ..core.algorithm_config import COST_TABLE_ORDER, normalize_algorithm_name
from ..core.exceptions import CostParameterError

# 1 ns = 1e-9 s, so FLOP/ns = FLOPS * 1e-9
_NS_PER_S = 1e9


@dataclass(frozen=True)
class CostParams:
    D: int = 512
    B: int = 100
    n_s: int = 2
    l_avg: float = 5.0
    t_sp: float = 5.0
    t_M: float = 40.0
    throughput: float = 0.7e12
    tiles_sharing: int = 4

    def __post_init__(self):
        for name, value in asdict(self).items():
            if value <= 0:
                raise CostParameterError(f"cost parameter {name} must be positive, got {value}")

    @property
    def flops_per_ns(self) -> float:
        return self.throughput / self.tiles_sharing / _NS_PER_S


@dataclass(frozen=True)
class LatencyBreakdown:
    algorithm: str
    fp_ops: float
    fp_ns: float
    analog_ns: float

    @property
    def total_ns(self) -> float:
        return self.fp_ns + self.analog_ns


def _canonical(algo: str) -> str:
    name = normalize_algorithm_name(algo)
    if name not in COST_TABLE_ORDER:
        raise CostParameterError(f"no cost model for algorithm '{algo}'")
    return name


def _require_period(name: str, params: CostParams) -> None:
    if name in ("residual", "ttv2") and params.n_s < 2:
        raise CostParameterError(f"{name} cost needs a transfer period n_s >= 2, got {params.n_s}")


def fp_ops(algo: str, params: CostParams) -> float:
    name = _canonical(algo)
    D = params.D
    if name == "ttv2":
        return 2 * D + 2 * D / params.n_s
    if name == "mp":
        return 2 * D * D + D
    # analog SGD and residual only scale x and delta by their max magnitudes
    return 2 * D


def analog_ns(algo: str, params: CostParams) -> float:
    name = _canonical(algo)
    _require_period(name, params)
    p = params
    if name == "analog_sgd":
        return p.l_avg * p.t_sp
    if name == "ttv2":
        return (p.l_avg + 1.0 / p.n_s) * p.t_sp + p.t_M / p.n_s
    if name == "mp":
        return p.D / p.B * p.t_sp
    # geometric sum over tiles, bounded independently of the tile count
    return p.l_avg * p.t_sp * p.n_s / (p.n_s - 1) + p.t_M / (p.n_s - 1)


def latency_breakdown(algo: str, params: CostParams) -> LatencyBreakdown:
    name = _canonical(algo)
    ops = fp_ops(name, params)
    return LatencyBreakdown(name, ops, ops / params.flops_per_ns, analog_ns(name, params))


def latency_ns(algo: str, params: CostParams) -> float:
    return latency_breakdown(algo, params).total_ns


def storage_bytes(algo: str, D: int, B: int = 1) -> int:
    """Digital buffer size at one byte per element"""
    if D <= 0 or B <= 0:
        raise CostParameterError(f"storage needs positive D and B, got D={D}, B={B}")
    name = _canonical(algo)
    if name == "ttv2":
        return D * D + 2 * D
    if name == "mp":
        return D * D + 2 * D * B
    return 2 * D


def memory_ops_bits(algo: str, params: CostParams) -> float:
    name = _canonical(algo)
    if name == "ttv2":
        return 16 * params.D / params.n_s
    if name == "mp":
        return 16 * params.D ** 2 / params.B
    return 1.0


def cost_table(params: CostParams) -> Dict[str, Dict[str, float]]:
    """All cost rows keyed by canonical algorithm name, in table order"""
    table = {}
    for name in COST_TABLE_ORDER:
        breakdown = latency_breakdown(name, params)
        table[name] = {
            "storage_bytes": storage_bytes(name, params.D, params.B),
            "memory_ops_bits": memory_ops_bits(name, params),
            "fp_ops": breakdown.fp_ops,
            "fp_ns": breakdown.fp_ns,
            "analog_ns": breakdown.analog_ns,
            "total_ns": breakdown.total_ns,
        }
    return table
