#!/usr/bin/env python3
"""
Experiment models - frozen descriptions of what a run trains and how
"""

from dataclasses import asdict, dataclass, field, replace
from typing import Any, Dict, List, Optional, Tuple

from ..core.algorithm_config import normalize_algorithm_name
from ..core.exceptions import ConfigError
from ..hardware.composite import transfer_every_from_vec
from ..hardware.device import DeviceModel

CONFIG_VERSION = 1


def _plain(value: Any) -> Any:
    """Tuples to lists, recursively, so configs dump as plain YAML/JSON"""
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


@dataclass(frozen=True)
class AlgorithmConfig:
    """Hyperparameters shared by every trainer; each trainer reads what it needs"""

    name: str = "residual"
    alpha: float = 0.1
    transfer_lr: Optional[float] = None
    transfer_lr_vec: Optional[Tuple[float, ...]] = None
    num_tiles: int = 1
    gamma: float = 0.5
    gamma_vec: Optional[Tuple[float, ...]] = None
    transfer_every: Optional[Tuple[int, ...]] = None
    transfer_every_vec: Optional[Tuple[int, ...]] = None
    warm_start: bool = False
    bl: Optional[int] = None
    # Tiki-Taka
    transfer_period: int = 1
    tt_gamma: float = 0.0
    buffer_decay: float = 0.0
    buffer_write_every: int = 1
    # Mixed precision
    program_every: int = 1
    history_size: int = 64

    def __post_init__(self):
        object.__setattr__(self, "name", normalize_algorithm_name(self.name))
        if self.alpha <= 0:
            raise ConfigError(f"must be positive, got {self.alpha}", "algorithm.alpha")
        if self.transfer_lr is not None and self.transfer_lr <= 0:
            raise ConfigError(f"must be positive, got {self.transfer_lr}", "algorithm.transfer_lr")
        if self.transfer_lr_vec is not None and any(b <= 0 for b in self.transfer_lr_vec):
            raise ConfigError("entries must be positive", "algorithm.transfer_lr_vec")
        if self.num_tiles < 1:
            raise ConfigError(f"must be >= 1, got {self.num_tiles}", "algorithm.num_tiles")
        if self.gamma_vec is not None and len(self.gamma_vec) != self.num_tiles:
            raise ConfigError(
                f"length {len(self.gamma_vec)} does not match num_tiles={self.num_tiles}",
                "algorithm.gamma_vec",
            )
        if self.gamma_vec is None and self.num_tiles > 1 and not 0.0 < self.gamma < 1.0:
            raise ConfigError(f"must lie in (0, 1), got {self.gamma}", "algorithm.gamma")
        for key in ("transfer_period", "buffer_write_every", "program_every", "history_size"):
            if getattr(self, key) < 1:
                raise ConfigError(f"must be >= 1, got {getattr(self, key)}", f"algorithm.{key}")
        if not 0.0 <= self.buffer_decay <= 1.0:
            raise ConfigError(f"must lie in [0, 1], got {self.buffer_decay}", "algorithm.buffer_decay")

    @property
    def num_edges(self) -> int:
        return self.num_tiles - 1

    def resolved_transfer_every(self) -> List[int]:
        """Math-order periods T_1..T_N"""
        if self.transfer_every is not None:
            periods = [int(v) for v in self.transfer_every]
        elif self.transfer_every_vec is not None:
            if len(self.transfer_every_vec) < self.num_edges:
                raise ConfigError(
                    f"needs at least {self.num_edges} entries", "algorithm.transfer_every_vec"
                )
            periods = transfer_every_from_vec(self.transfer_every_vec, self.num_tiles)
        else:
            periods = [1] * self.num_edges
        if len(periods) != self.num_edges:
            raise ConfigError(
                f"{len(periods)} periods for {self.num_edges} transfer edges", "algorithm.transfer_every"
            )
        return periods

    def resolved_transfer_lrs(self) -> List[float]:
        """Transfer rate per destination tile 0..N-1"""
        if self.transfer_lr_vec is not None:
            if len(self.transfer_lr_vec) < self.num_edges:
                raise ConfigError(f"needs at least {self.num_edges} entries", "algorithm.transfer_lr_vec")
            return [float(b) for b in self.transfer_lr_vec[:self.num_edges]]
        if self.transfer_lr is not None:
            return [float(self.transfer_lr)] * self.num_edges
        return [0.1 * 1.2 ** n for n in range(self.num_edges)]

    def with_tiles(self, num_tiles: int) -> "AlgorithmConfig":
        gamma_vec = None
        if self.gamma_vec is not None:
            # keep the per-tile ratio of the configured vector
            ratio = self.gamma_vec[0] / self.gamma_vec[1] if len(self.gamma_vec) > 1 else self.gamma
            gamma_vec = tuple(ratio ** (num_tiles - 1 - i) for i in range(num_tiles))
        transfer_every = None
        if self.transfer_every is not None:
            base = list(self.transfer_every) or [1]
            transfer_every = tuple((base * num_tiles)[:num_tiles - 1])
        return replace(self, num_tiles=num_tiles, gamma_vec=gamma_vec, transfer_every=transfer_every)

    def to_dict(self) -> Dict[str, Any]:
        return _plain(asdict(self))


@dataclass(frozen=True)
class ProblemConfig:
    kind: str = "quadratic"
    dim: int = 1
    L: float = 1.0
    sigma: float = 0.0
    noise: str = "none"
    w_star: Optional[Tuple[float, ...]] = None
    w_star_scale: float = 0.25
    target_k: Optional[int] = None
    hidden: int = 64
    loss: str = "cross_entropy"
    data_dir: Optional[str] = None
    train_subset: Optional[int] = None
    test_subset: Optional[int] = None
    epochs: int = 1
    init_scale: float = 0.1
    analog_mask: Optional[Tuple[bool, ...]] = None

    def __post_init__(self):
        kinds = ("quadratic", "toy", "mlp")
        if self.kind not in kinds:
            raise ConfigError(f"unknown problem kind '{self.kind}', expected one of {kinds}", "problem.kind")
        if self.noise not in ("none", "gaussian", "two_point"):
            raise ConfigError(f"unknown noise model '{self.noise}'", "problem.noise")
        if self.loss not in ("cross_entropy", "mse"):
            raise ConfigError(f"unknown loss '{self.loss}'", "problem.loss")
        if self.dim < 1 or self.hidden < 1 or self.epochs < 1:
            raise ConfigError("dimensions and epochs must be positive", "problem")
        if self.L <= 0 or self.sigma < 0:
            raise ConfigError("L must be positive and sigma non-negative", "problem")
        if self.w_star is not None and len(self.w_star) != self.dim:
            raise ConfigError(f"length {len(self.w_star)} does not match dim={self.dim}", "problem.w_star")
        if self.analog_mask is not None and not any(self.analog_mask):
            raise ConfigError("at least one layer must be analog", "problem.analog_mask")


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    problem: ProblemConfig
    device: DeviceModel
    algorithm: AlgorithmConfig
    seeds: Tuple[int, ...] = (0,)
    steps: int = 1000
    log_interval: Optional[int] = None
    tail_fraction: float = 0.2
    output_dir: str = "runs"
    checkpoint: bool = False
    expect: Dict[str, float] = field(default_factory=dict)
    config_version: int = CONFIG_VERSION

    def __post_init__(self):
        if not self.seeds:
            raise ConfigError("at least one seed is required", "seeds")
        if any(s < 0 for s in self.seeds):
            raise ConfigError("seeds must be non-negative", "seeds")
        if self.steps < 1:
            raise ConfigError(f"must be >= 1, got {self.steps}", "steps")
        if self.log_interval is not None and self.log_interval < 1:
            raise ConfigError(f"must be >= 1, got {self.log_interval}", "log_interval")
        if not 0.0 < self.tail_fraction <= 1.0:
            raise ConfigError(f"must lie in (0, 1], got {self.tail_fraction}", "tail_fraction")
        unknown = set(self.expect) - {"max_final_loss", "max_floor", "min_accuracy"}
        if unknown:
            raise ConfigError(f"unknown expectation(s) {sorted(unknown)}", "expect")

    def with_seeds(self, seeds: Tuple[int, ...]) -> "ExperimentConfig":
        return replace(self, seeds=tuple(seeds))

    def with_tiles(self, num_tiles: int) -> "ExperimentConfig":
        return replace(self, algorithm=self.algorithm.with_tiles(num_tiles))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "config_version": self.config_version,
            "name": self.name,
            "problem": _plain(asdict(self.problem)),
            "device": self.device.to_dict(),
            "algorithm": self.algorithm.to_dict(),
            "seeds": list(self.seeds),
            "steps": self.steps,
            "log_interval": self.log_interval,
            "tail_fraction": self.tail_fraction,
            "output_dir": self.output_dir,
            "checkpoint": self.checkpoint,
            "expect": dict(self.expect),
        }
