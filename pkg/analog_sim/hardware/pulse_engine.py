#!/usr/bin/env python3
"""
Pulse Engine - stochastic rank-1 updates as coincidences of Bernoulli pulse streams

A rank-1 update alpha * x * delta^T is encoded as BL pulse slots. In every
slot each row fires with probability p_row[i] and each column with
probability p_col[j]; a cell receives one pulse when its row and column fire
together. The expected number of coincidences is BL * p_row[i] * p_col[j],
which the planner makes equal to alpha * |x_i * delta_j| / step.
"""

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional, Tuple

import numpy as np

from ..core.exceptions import PreconditionError, TileIndexError, TileShapeError
from ..core.logger import get_logger
from ..core.settings import debug_enabled
from .device import DeviceModel

if TYPE_CHECKING:
    from .tile import Tile

logger = get_logger(__name__)

_P_TOL = 1e-12


@dataclass(frozen=True)
class PulsePlan:
    """Per-line firing probabilities and polarities for one rank-1 update"""

    bl: int
    p_row: np.ndarray
    p_col: np.ndarray
    sign_row: np.ndarray
    sign_col: np.ndarray
    alpha: float
    step: float

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.p_row.size, self.p_col.size)

    @property
    def is_noop(self) -> bool:
        return not (np.any(self.p_row > 0.0) and np.any(self.p_col > 0.0))

    def coincidence_sign(self) -> np.ndarray:
        return np.outer(self.sign_row, self.sign_col)

    def expected_update(self) -> np.ndarray:
        """Expected signed step count times step, for an ideal device"""
        return (self.bl * self.step) * np.outer(self.sign_row * self.p_row, self.sign_col * self.p_col)


def _noop_plan(rows: int, cols: int, alpha: float, step: float) -> PulsePlan:
    zeros_r = np.zeros(rows)
    zeros_c = np.zeros(cols)
    return PulsePlan(1, zeros_r, zeros_c, zeros_r.copy(), zeros_c.copy(), alpha, step)


def plan_update(x: np.ndarray, delta: np.ndarray, alpha: float, model: DeviceModel,
                bl: Optional[int] = None) -> PulsePlan:
    """
    Plan the pulse streams realizing alpha * x * delta^T on a tile of ``model``

    Args:
        x: row-side vector (one entry per tile row)
        delta: column-side vector (one entry per tile column)
        alpha: learning rate, non-negative
        model: device of the target tile; its logical step sets the pulse size
        bl: fixed bit length; by default the smallest BL keeping p <= 1

    Returns:
        PulsePlan; all-zero probabilities when x, delta or alpha vanish
    """
    x = np.asarray(x, dtype=float).ravel()
    delta = np.asarray(delta, dtype=float).ravel()
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(delta)) and math.isfinite(alpha)):
        raise PreconditionError("pulse plan inputs must be finite")
    if alpha < 0.0:
        raise PreconditionError(f"learning rate must be non-negative, got {alpha}")

    step = model.step
    x_max = float(np.max(np.abs(x))) if x.size else 0.0
    d_max = float(np.max(np.abs(delta))) if delta.size else 0.0
    if alpha == 0.0 or x_max == 0.0 or d_max == 0.0:
        return _noop_plan(x.size, delta.size, alpha, step)

    magnitude = alpha * x_max * d_max / step
    if bl is None:
        bl = max(1, math.ceil(magnitude - _P_TOL))
    else:
        bl = int(bl)
        if bl < 1:
            raise PreconditionError(f"bit length must be >= 1, got {bl}")
        if magnitude / bl > 1.0 + _P_TOL:
            raise PreconditionError(
                f"bit length {bl} too short: coincidence probability {magnitude / bl:.4f} > 1"
            )

    amplitude = math.sqrt(alpha / (bl * step))
    balance = math.sqrt(x_max / d_max)
    p_row = np.clip(np.abs(x) * amplitude / balance, 0.0, 1.0)
    p_col = np.clip(np.abs(delta) * amplitude * balance, 0.0, 1.0)
    return PulsePlan(bl, p_row, p_col, np.sign(x), np.sign(delta), float(alpha), step)


def _pulse_cells(model: DeviceModel, values: np.ndarray, signs: np.ndarray) -> np.ndarray:
    """One pulse on each cell; the sign picks the up or down response"""
    response = np.where(signs > 0, model.response_plus(values), model.response_minus(values))
    return np.clip(values + signs * model.step * response, model.w_min, model.w_max)


def apply_rank_update(tile: "Tile", plan: PulsePlan, rng: np.random.Generator) -> np.ndarray:
    """
    Fire the planned pulse streams into ``tile`` and return the realized change

    Slots are drawn in order; within a slot a cell sees at most one
    coincidence, so applying the slot's pulses together equals applying
    them one by one. Weights are clamped to the device bounds after each
    pulse.
    """
    if plan.shape != tile.shape:
        raise TileShapeError(f"plan shape {plan.shape} does not match tile shape {tile.shape}")
    if plan.is_noop:
        return np.zeros(tile.shape)

    model = tile.model
    weights = tile.weights
    before = weights.copy()
    signs = plan.coincidence_sign()
    rows, cols = tile.shape
    check_bounds = debug_enabled()
    pulses = 0

    for _ in range(plan.bl):
        row_fire = np.flatnonzero(rng.random(rows) < plan.p_row)
        col_fire = np.flatnonzero(rng.random(cols) < plan.p_col)
        if row_fire.size == 0 or col_fire.size == 0:
            continue
        cells = np.ix_(row_fire, col_fire)
        weights[cells] = _pulse_cells(model, weights[cells], signs[cells])
        pulses += row_fire.size * col_fire.size
        if check_bounds:
            assert np.all(weights >= model.w_min) and np.all(weights <= model.w_max), \
                "weight left device bounds"

    tile.pulse_count += pulses
    return weights - before


def noise_moments_oracle(x_i: float, delta_j: float, alpha: float, dw_min: float,
                         bl: int) -> Tuple[float, float]:
    """
    Closed-form mean and variance of a single-cell pulsed update (ideal device)

    The cell sees a Binomial(BL, p) pulse count with p = alpha|x delta| / (BL dw_min).
    """
    magnitude = alpha * abs(x_i * delta_j)
    p = magnitude / (bl * dw_min)
    if p > 1.0 + _P_TOL:
        raise PreconditionError(f"coincidence probability {p:.4f} exceeds 1; increase BL")
    mean = alpha * x_i * delta_j
    variance = magnitude * dw_min * (1.0 - p)
    return mean, variance


def transfer_write(dst: "Tile", values: np.ndarray, col: int, beta: float,
                   rng: np.random.Generator) -> np.ndarray:
    """
    Pulse ``beta * values`` into column ``col`` of ``dst``

    The row streams carry the transferred values and the column streams a
    one-hot selector, so the write is quantized and asymmetric exactly like
    a gradient update. Returns the realized column change.
    """
    rows, cols = dst.shape
    if not 0 <= col < cols:
        raise TileIndexError(f"column {col} out of range for tile with {cols} columns")
    values = np.asarray(values, dtype=float).ravel()
    if values.size != rows:
        raise TileShapeError(f"transfer of {values.size} values into a tile with {rows} rows")
    selector = np.zeros(cols)
    selector[col] = 1.0
    plan = plan_update(values, selector, beta, dst.model)
    realized = apply_rank_update(dst, plan, rng)
    return realized[:, col]


def simulate_cell_trials(model: DeviceModel, w0: float, plan: PulsePlan,
                         rng: np.random.Generator, trials: int,
                         row: int = 0, col: int = 0) -> np.ndarray:
    """
    Run ``trials`` independent single-cell realizations of ``plan`` at once

    Returns the realized change of cell (row, col) per trial.
    """
    if trials < 1:
        raise PreconditionError(f"trials must be >= 1, got {trials}")
    weights = np.full(trials, float(w0))
    p_row = float(plan.p_row[row])
    p_col = float(plan.p_col[col])
    sign = float(plan.sign_row[row] * plan.sign_col[col])
    if p_row == 0.0 or p_col == 0.0 or sign == 0.0:
        return np.zeros(trials)

    signs = np.full(trials, sign)
    for _ in range(plan.bl):
        hit = (rng.random(trials) < p_row) & (rng.random(trials) < p_col)
        if np.any(hit):
            weights[hit] = _pulse_cells(model, weights[hit], signs[hit])
    logger.debug("simulated %d single-cell trials over %d slots", trials, plan.bl)
    return weights - w0
