#!/usr/bin/env python3
"""
Run record - per-interval time series of one training run
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from ..core.exceptions import PreconditionError


def _num(value: float) -> str:
    return repr(float(value))


@dataclass
class RecordRow:
    t: int
    loss: float
    dist2: Optional[float]
    linf_tiles: List[float]
    pulses: int
    S_T: float
    R_T: float
    accuracy: Optional[float] = None


@dataclass
class RunRecord:
    algorithm: str
    seed: int
    num_tiles: int
    rows: List[RecordRow] = field(default_factory=list)
    events: List[Dict[str, Any]] = field(default_factory=list)
    final_accuracy: Optional[float] = None

    def append(self, row: RecordRow) -> None:
        if self.rows and row.t <= self.rows[-1].t:
            raise PreconditionError(f"record rows must increase in t: {row.t} after {self.rows[-1].t}")
        if not math.isfinite(row.loss):
            raise PreconditionError(f"non-finite loss at t={row.t}")
        self.rows.append(row)

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def steps(self) -> np.ndarray:
        return np.array([row.t for row in self.rows])

    @property
    def losses(self) -> np.ndarray:
        return np.array([row.loss for row in self.rows])

    @property
    def dist2(self) -> Optional[np.ndarray]:
        if not self.rows or self.rows[0].dist2 is None:
            return None
        return np.array([row.dist2 for row in self.rows])

    @property
    def final_loss(self) -> float:
        return self.rows[-1].loss if self.rows else math.nan

    def csv_header(self) -> List[str]:
        return (["t", "loss", "dist2"] + [f"linf_tile_{n}" for n in range(self.num_tiles)]
                + ["pulses", "S_T", "R_T"])

    def csv_rows(self) -> List[List[str]]:
        out = []
        for row in self.rows:
            out.append(
                [str(row.t), _num(row.loss), "" if row.dist2 is None else _num(row.dist2)]
                + [_num(v) for v in row.linf_tiles]
                + [str(int(row.pulses)), _num(row.S_T), _num(row.R_T)]
            )
        return out
