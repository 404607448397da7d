#!/usr/bin/env python3
"""
Algorithm Configuration - Shared name mappings for trainers, cost model and CLI
"""

# Algorithm mapping - maps all accepted inputs to canonical algorithm names
ALGORITHM_MAP = {
    # Analog SGD
    '1': 'analog_sgd',
    'sgd': 'analog_sgd',
    'analog-sgd': 'analog_sgd',
    'analog_sgd': 'analog_sgd',
    'analogsgd': 'analog_sgd',

    # Tiki-Taka v1
    '2': 'ttv1',
    'tt1': 'ttv1',
    'ttv1': 'ttv1',
    'tt-v1': 'ttv1',
    'tiki-taka': 'ttv1',

    # Tiki-Taka v2
    '3': 'ttv2',
    'tt2': 'ttv2',
    'ttv2': 'ttv2',
    'tt-v2': 'ttv2',

    # Mixed Precision
    '4': 'mp',
    'mp': 'mp',
    'mixed-precision': 'mp',
    'mixed_precision': 'mp',
    'mixedprecision': 'mp',

    # Multi-timescale residual learning
    '5': 'residual',
    'ours': 'residual',
    'residual': 'residual',
    'multi-tile': 'residual',
    'multi_tile': 'residual',
}

# Algorithm display names
ALGORITHM_DISPLAY_NAMES = {
    'analog_sgd': 'Analog SGD',
    'ttv1': 'Tiki-Taka v1',
    'ttv2': 'Tiki-Taka v2',
    'mp': 'Mixed Precision',
    'residual': 'Residual (multi-tile)',
}

# Cost table column order
COST_TABLE_ORDER = ['ttv2', 'analog_sgd', 'mp', 'residual']


def normalize_algorithm_name(algorithm_input: str) -> str:
    """
    Normalize algorithm input to canonical algorithm name

    Args:
        algorithm_input: User input ('sgd', 'ours', 'TT-v2', etc.)

    Returns:
        Canonical name ('analog_sgd', 'residual', 'ttv2', ...); unknown
        inputs are returned lower-cased so callers can report them
    """
    key = str(algorithm_input).strip().lower()
    return ALGORITHM_MAP.get(key, key)
