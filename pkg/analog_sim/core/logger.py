#!/usr/bin/env python3
"""
Logger - rich-backed logging for library modules

Library code logs through ``get_logger``; the CLI keeps printing its own
status lines on the same shared console.
"""

import logging
import os
from typing import Optional

from rich.console import Console
from rich.logging import RichHandler

console = Console()

_ROOT_NAME = "analog_sim"
_configured = False


def _resolve_level(level: Optional[str]) -> int:
    name = (level or os.getenv("ANALOG_SIM_LOG_LEVEL") or "WARNING").upper()
    return getattr(logging, name, logging.WARNING)


def configure_logging(level: Optional[str] = None) -> logging.Logger:
    """Attach a single RichHandler to the package root logger"""
    global _configured
    root = logging.getLogger(_ROOT_NAME)
    if not _configured:
        handler = RichHandler(console=console, show_path=False, rich_tracebacks=True)
        handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
        root.addHandler(handler)
        root.propagate = False
        _configured = True
    root.setLevel(_resolve_level(level))
    return root


def get_logger(name: str) -> logging.Logger:
    if not _configured:
        configure_logging()
    if not name.startswith(_ROOT_NAME):
        name = f"{_ROOT_NAME}.{name}"
    return logging.getLogger(name)
