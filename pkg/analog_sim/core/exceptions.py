#!/usr/bin/env python3
"""
Exceptions - Error hierarchy shared by every analog_sim package
"""

from typing import Optional


class AnalogSimError(Exception):
    """Base class for all simulator errors"""


class DeviceDomainError(AnalogSimError, ValueError):
    """Device model is invalid or a response was evaluated outside its bounds"""


class TileShapeError(AnalogSimError, ValueError):
    """Vector or matrix dimensions do not match the tile"""


class TileIndexError(AnalogSimError, IndexError):
    """Column, tile or partial-sum index out of range"""


class PreconditionError(AnalogSimError, ValueError):
    """An operation was called outside its documented precondition"""


class CostParameterError(AnalogSimError, ValueError):
    """Hardware cost model parameters are invalid for the requested row"""


class ConfigError(AnalogSimError):
    """Experiment configuration cannot be resolved"""

    def __init__(self, message: str, key: Optional[str] = None):
        self.key = key
        if key:
            message = f"{key}: {message}"
        super().__init__(message)


class IdxFormatError(AnalogSimError):
    """IDX file is malformed"""

    def __init__(self, message: str, path: str = "", offset: Optional[int] = None):
        self.path = path
        self.offset = offset
        where = path or "<bytes>"
        if offset is not None:
            where = f"{where} @ byte {offset}"
        super().__init__(f"{where}: {message}")
