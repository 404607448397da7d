"""
Experiment harness: runs, sweeps, diagnostics and validators
"""

from .diagnostics import RunningSR, diagnostics_sr, floor_estimate, lower_bound_shape, tail_mean
from .output import OutputRenderer
from .validators import (
    AsymmetryReport,
    PulseMomentsReport,
    asymmetry_config,
    check_expectations,
    compare_asymmetry_floor,
    validate_pulse_moments,
)
from .workflow import ExperimentRunner, RunResult, parse_tile_range, sweep

__all__ = [
    'AsymmetryReport', 'ExperimentRunner', 'PulseMomentsReport', 'OutputRenderer', 'RunResult',
    'RunningSR', 'asymmetry_config', 'check_expectations', 'compare_asymmetry_floor',
    'diagnostics_sr', 'floor_estimate', 'lower_bound_shape', 'parse_tile_range', 'sweep',
    'tail_mean', 'validate_pulse_moments',
]
