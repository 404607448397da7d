#!/usr/bin/env python3
"""
Settings - Environment-driven runtime switches (.env supported)
"""

import os
from typing import Optional

from dotenv import load_dotenv

from .exceptions import ConfigError

load_dotenv()

DEFAULT_LOG_INTERVAL_TOY = 100


def env_seed() -> Optional[int]:
    """SIM_SEED overrides every configured seed when set"""
    raw = os.getenv("SIM_SEED")
    if raw is None or raw.strip() == "":
        return None
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"expected an integer seed, got '{raw}'", "SIM_SEED") from exc


def debug_enabled() -> bool:
    return os.getenv("ANALOG_SIM_DEBUG", "").strip().lower() in ("1", "true", "yes", "on")


def default_data_dir() -> Optional[str]:
    return os.getenv("ANALOG_SIM_DATA_DIR") or None
