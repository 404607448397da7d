"""
Hardware layer: device responses, pulse updates, tiles, composites and costs
"""

from .composite import CompositeWeight, is_transfer_step, local_counter, transfer_every_from_vec
from .device import (
    DeviceKind,
    DeviceModel,
    ResponseTable,
    asymmetric_G,
    gamma_lower_bound,
    kappa_schedule,
    n_states,
    q_minus,
    q_plus,
    saturation_H,
    symmetric_F,
)
from .pulse_engine import (
    PulsePlan,
    apply_rank_update,
    noise_moments_oracle,
    plan_update,
    simulate_cell_trials,
    transfer_write,
)
from .tile import InitKind, Tile, TileInit, new_tile

__all__ = [
    'CompositeWeight', 'is_transfer_step', 'local_counter', 'transfer_every_from_vec',
    'DeviceKind', 'DeviceModel', 'ResponseTable', 'asymmetric_G', 'gamma_lower_bound',
    'kappa_schedule', 'n_states', 'q_minus', 'q_plus', 'saturation_H', 'symmetric_F',
    'PulsePlan', 'apply_rank_update', 'noise_moments_oracle', 'plan_update',
    'simulate_cell_trials', 'transfer_write',
    'InitKind', 'Tile', 'TileInit', 'new_tile',
]
