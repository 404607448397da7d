"""
Frozen experiment descriptions and run records
"""

from .experiment import AlgorithmConfig, ExperimentConfig, ProblemConfig
from .record import RecordRow, RunRecord

__all__ = ['AlgorithmConfig', 'ExperimentConfig', 'ProblemConfig', 'RecordRow', 'RunRecord']
