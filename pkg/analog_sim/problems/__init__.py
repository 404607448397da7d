"""
Objectives and data driving training
"""

import numpy as np

from ..hardware.device import DeviceModel
from ..models.experiment import ProblemConfig
from ..utils.rng import StreamFactory
from .mlp import DigitalLayer, MlpModel, MlpSpec, mlp_forward_backward, mlp_loss
from .quadratic import NoiseModel, QuadraticProblem, digital_sgd, max_two_point_sigma, quadratic_grad
from .toy import ToyProblem, target_from_index, toy_target_16bit


def build_objective(config: ProblemConfig, device: DeviceModel, streams: StreamFactory):
    """Quadratic or toy objective for a run; MLP runs are assembled by the workflow"""
    if config.kind == "toy":
        if config.target_k is not None:
            return ToyProblem(target_from_index(config.target_k))
        return ToyProblem(toy_target_16bit(streams.data(0)))
    if config.w_star is not None:
        w_star = np.asarray(config.w_star, dtype=float)
    elif config.noise == "two_point":
        w_star = np.full(config.dim, config.w_star_scale * device.w_max)
    else:
        w_star = streams.data(0).uniform(-1.0, 1.0, size=config.dim) * config.w_star_scale * device.w_max
    noise = NoiseModel(config.noise, config.sigma, device.w_max)
    return QuadraticProblem(w_star, config.L, noise)


__all__ = [
    'DigitalLayer', 'MlpModel', 'MlpSpec', 'NoiseModel', 'QuadraticProblem', 'ToyProblem',
    'build_objective', 'digital_sgd', 'max_two_point_sigma', 'mlp_forward_backward', 'mlp_loss', 'quadratic_grad',
    'target_from_index', 'toy_target_16bit',
]
