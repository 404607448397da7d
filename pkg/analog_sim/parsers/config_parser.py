#!/usr/bin/env python3
"""
Config Parser - YAML experiment files into frozen ExperimentConfig objects

Every problem is reported with its key path before any compute starts.
"""

from dataclasses import fields
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Type

import yaml

from ..core.exceptions import AnalogSimError, ConfigError
from ..core.settings import env_seed
from ..hardware.device import DeviceModel
from ..models.experiment import CONFIG_VERSION, AlgorithmConfig, ExperimentConfig, ProblemConfig
from .base_parser import BaseParser, PathLike

TOP_LEVEL_KEYS = {
    "config_version", "name", "problem", "device", "algorithm", "seeds", "seed", "steps",
    "log_interval", "tail_fraction", "output_dir", "checkpoint", "expect",
}
DEVICE_KEYS = {"kind", "tau_min", "tau_max", "dw_min", "n_states", "kappa", "table"}

# accepted spellings from reference configurations
ALGORITHM_KEY_ALIASES = {
    "fast_lr": "alpha",
    "lr": "alpha",
    "beta": "transfer_lr",
    "n_s": "transfer_period",
    "transfer_every_tt": "transfer_period",
    "num_tile": "num_tiles",
}

_TUPLE_FIELDS = {"transfer_lr_vec", "gamma_vec", "transfer_every", "transfer_every_vec", "w_star",
                 "analog_mask"}


def _section(data: Dict[str, Any], key: str) -> Dict[str, Any]:
    value = data.get(key, {})
    if value is None:
        return {}
    if not isinstance(value, dict):
        raise ConfigError("must be a mapping", key)
    return dict(value)


def _build(cls: Type, values: Dict[str, Any], prefix: str):
    allowed = {f.name for f in fields(cls)}
    unknown = sorted(set(values) - allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) {unknown}", prefix)
    converted = {}
    for key, value in values.items():
        if key in _TUPLE_FIELDS and value is not None:
            if not isinstance(value, (list, tuple)):
                raise ConfigError("must be a list", f"{prefix}.{key}")
            value = tuple(value)
        converted[key] = value
    try:
        return cls(**converted)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc), prefix) from exc


def parse_device(section: Dict[str, Any]) -> DeviceModel:
    unknown = sorted(set(section) - DEVICE_KEYS)
    if unknown:
        raise ConfigError(f"unknown key(s) {unknown}", "device")
    try:
        return DeviceModel.from_config(section)
    except AnalogSimError as exc:
        raise ConfigError(str(exc), "device") from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc), "device") from exc


def parse_algorithm(section: Dict[str, Any]) -> AlgorithmConfig:
    normalized = {}
    for key, value in section.items():
        target = ALGORITHM_KEY_ALIASES.get(key, key)
        if target in normalized:
            raise ConfigError(f"'{key}' duplicates '{target}'", "algorithm")
        normalized[target] = value
    return _build(AlgorithmConfig, normalized, "algorithm")


def _seeds(data: Dict[str, Any]) -> Tuple[int, ...]:
    override = env_seed()
    if override is not None:
        return (override,)
    if "seeds" in data and "seed" in data:
        raise ConfigError("give either 'seed' or 'seeds'", "seeds")
    raw = data.get("seeds", data.get("seed", 0))
    seeds = raw if isinstance(raw, (list, tuple)) else [raw]
    try:
        return tuple(int(s) for s in seeds)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"seeds must be integers, got {raw!r}", "seeds") from exc


class ConfigParser(BaseParser):
    def __init__(self):
        super().__init__()
        self.supported_extensions = [".yaml", ".yml"]
        self.format = "yaml"

    def parse(self, content: str, file_path: Optional[PathLike] = None) -> ExperimentConfig:
        try:
            data = yaml.safe_load(content)
        except yaml.YAMLError as exc:
            raise ConfigError(f"invalid YAML: {exc}", str(file_path or "<config>")) from exc
        return self.from_dict(data, default_name=Path(file_path).stem if file_path else "experiment")

    def from_dict(self, data: Any, default_name: str = "experiment") -> ExperimentConfig:
        if not isinstance(data, dict):
            raise ConfigError("top level must be a mapping", "config")
        unknown = sorted(set(data) - TOP_LEVEL_KEYS)
        if unknown:
            raise ConfigError(f"unknown key(s) {unknown}", "config")
        version = data.get("config_version")
        if version is None:
            raise ConfigError("missing required key", "config_version")
        if version != CONFIG_VERSION:
            raise ConfigError(f"unsupported version {version}, expected {CONFIG_VERSION}", "config_version")
        for required in ("problem", "device", "algorithm"):
            if required not in data:
                raise ConfigError("missing required section", required)

        problem = _build(ProblemConfig, _section(data, "problem"), "problem")
        device = parse_device(_section(data, "device"))
        algorithm = parse_algorithm(_section(data, "algorithm"))
        expect = {k: float(v) for k, v in _section(data, "expect").items()}

        top = {
            "name": str(data.get("name", default_name)),
            "problem": problem,
            "device": device,
            "algorithm": algorithm,
            "seeds": _seeds(data),
            "expect": expect,
        }
        for key in ("steps", "log_interval", "tail_fraction", "output_dir", "checkpoint"):
            if key in data:
                top[key] = data[key]
        config = _build(ExperimentConfig, top, "config")
        # schedules resolve eagerly so bad vectors fail before any compute
        config.algorithm.resolved_transfer_every()
        config.algorithm.resolved_transfer_lrs()
        return config


def load_config(path: PathLike) -> ExperimentConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"file not found: {path}", "config")
    return ConfigParser().parse_file(path)


def dump_config(config: ExperimentConfig) -> str:
    return yaml.safe_dump(config.to_dict(), sort_keys=False)
