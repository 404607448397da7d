"""
Parsers for experiment configs (YAML) and datasets (IDX)
"""

from .base_parser import BaseParser
from .config_parser import ConfigParser, dump_config, load_config
from .idx_parser import Dataset, IdxParser, load_idx, load_idx_pair, load_mnist, write_idx, write_synthetic_mnist

__all__ = [
    'BaseParser', 'ConfigParser', 'Dataset', 'IdxParser', 'dump_config', 'load_config',
    'load_idx', 'load_idx_pair', 'load_mnist', 'write_idx', 'write_synthetic_mnist',
]
