#!/usr/bin/env python3
"""
Validators - statistical checks of the simulator against closed-form results
"""

import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Mapping, Optional, Sequence

import numpy as np

from ..core.exceptions import PreconditionError
from ..core.logger import get_logger
from ..hardware.device import DeviceModel
from ..hardware.pulse_engine import noise_moments_oracle, plan_update, simulate_cell_trials
from ..models.experiment import AlgorithmConfig, ExperimentConfig, ProblemConfig
from ..problems import build_objective, digital_sgd, max_two_point_sigma
from ..utils.rng import VALIDATE, StreamFactory
from .diagnostics import floor_estimate, lower_bound_shape, tail_mean
from .workflow import ExperimentRunner

logger = get_logger(__name__)

Z_LIMIT = 4.0
VAR_TOLERANCE = 0.05
FLOOR_SHAPE_FACTOR = 10.0
DIGITAL_GAP = 5.0


@dataclass
class PulseMomentsReport:
    alpha: float
    x: float
    delta: float
    dw_min: float
    bl: int
    trials: int
    seed: int
    empirical_mean: float
    empirical_var: float
    oracle_mean: float
    oracle_var: float
    z_mean: float
    var_rel_error: float
    passed: bool

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def validate_pulse_moments(alpha: float, x: float, delta: float, dw_min: float, bl: int,
                    trials: int = 100_000, seed: int = 0) -> PulseMomentsReport:
    """
    Compare the empirical single-cell update against its closed-form moments

    The cell sits at zero on an ideal device wide enough that no trial can
    reach a bound, so the realized change is dw_min times a binomial count.
    Passes when the mean lies within four standard errors and the variance
    within 5% of the oracle.
    """
    if bl < 1:
        raise PreconditionError(f"BL must be >= 1, got {bl}")
    oracle_mean, oracle_var = noise_moments_oracle(x, delta, alpha, dw_min, bl)
    tau = 2.0 * bl * dw_min + 1.0
    model = DeviceModel.ideal(tau=tau, dw_min=dw_min)
    plan = plan_update(np.array([x]), np.array([delta]), alpha, model, bl)
    rng = StreamFactory(seed).stream(VALIDATE)
    changes = simulate_cell_trials(model, 0.0, plan, rng, trials)

    mean = float(np.mean(changes))
    var = float(np.var(changes, ddof=1)) if trials > 1 else 0.0
    stderr = math.sqrt(var / trials)
    if stderr > 0:
        z = (mean - oracle_mean) / stderr
    else:
        z = 0.0 if math.isclose(mean, oracle_mean, abs_tol=1e-15) else math.inf
    if oracle_var > 0:
        rel = abs(var / oracle_var - 1.0)
    else:
        rel = 0.0 if var == 0.0 else math.inf
    passed = abs(z) < Z_LIMIT and rel < VAR_TOLERANCE
    logger.info("single-cell moments: mean %.3e vs %.3e (z=%.2f), var %.3e vs %.3e (%.2f%%)",
                mean, oracle_mean, z, var, oracle_var, 100 * rel)
    return PulseMomentsReport(alpha, x, delta, dw_min, bl, trials, seed, mean, var,
                        oracle_mean, oracle_var, z, rel, passed)


@dataclass
class AsymmetryReport:
    sigma: float
    L: float
    seeds: List[int]
    analog_floor: float
    digital_floor: float
    S_T: float
    predicted_shape: float

    @property
    def ratio(self) -> float:
        return self.analog_floor / self.digital_floor if self.digital_floor > 0 else math.inf

    @property
    def shape_ratio(self) -> float:
        return self.analog_floor / self.predicted_shape if self.predicted_shape > 0 else math.inf

    @property
    def passed(self) -> bool:
        """Positive analog floor on the predicted scale, digital floor at least DIGITAL_GAP times lower"""
        on_scale = 1.0 / FLOOR_SHAPE_FACTOR <= self.shape_ratio <= FLOOR_SHAPE_FACTOR
        return self.analog_floor > 0 and on_scale and self.ratio >= DIGITAL_GAP

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["ratio"] = self.ratio
        data["shape_ratio"] = self.shape_ratio
        data["passed"] = self.passed
        return data


def asymmetry_config(sigma: float = 0.05, L: float = 1.0, dw_min: float = 0.1, tau: float = 1.0,
                     w_star_scale: float = 0.8, steps: int = 5000,
                     seeds: Sequence[int] = (0, 1, 2)) -> ExperimentConfig:
    """
    Analog SGD on a 1-D quadratic with two-point noise at alpha = 1/(2L)

    The optimum sits at w_star_scale * tau, where the asymmetric response
    makes S_T large enough to separate the analog floor from the digital one.
    """
    bound = max_two_point_sigma(tau, L, 1)
    if sigma > bound:
        raise PreconditionError(f"sigma={sigma} exceeds the two-point bound {bound:.4f}")
    return ExperimentConfig(
        name="asymmetry",
        problem=ProblemConfig(kind="quadratic", dim=1, L=L, sigma=sigma, noise="two_point",
                              w_star_scale=w_star_scale),
        device=DeviceModel.asymmetric_linear(tau=tau, dw_min=dw_min),
        algorithm=AlgorithmConfig(name="analog_sgd", alpha=1.0 / (2.0 * L)),
        seeds=tuple(seeds),
        steps=steps,
        log_interval=1,
    )


def compare_asymmetry_floor(config: Optional[ExperimentConfig] = None) -> AsymmetryReport:
    """
    Median analog and digital error floors for the same noisy quadratic

    The digital reference runs plain SGD with the same seeds, step size and
    noise streams; the analog floor should exceed it by the asymmetry term.
    """
    config = config or asymmetry_config()
    if config.algorithm.name != "analog_sgd" or config.problem.kind != "quadratic":
        raise PreconditionError("asymmetry comparison needs Analog SGD on a quadratic problem")
    runner = ExperimentRunner(write_files=False)
    analog, digital, s_values = [], [], []
    for seed in config.seeds:
        result = runner.run_seed(config, seed)
        analog.append(floor_estimate(result.record, config.tail_fraction, "dist2"))
        s_values.append(result.summary["S_T"])

        streams = StreamFactory(seed)
        objective = build_objective(config.problem, config.device, streams)
        trace = digital_sgd(objective, np.zeros(objective.shape), config.algorithm.alpha,
                            config.steps, streams)
        digital.append(tail_mean(trace["dist2"], config.tail_fraction))

    S_T = float(np.median(s_values))
    report = AsymmetryReport(
        sigma=config.problem.sigma,
        L=config.problem.L,
        seeds=list(config.seeds),
        analog_floor=float(np.median(analog)),
        digital_floor=float(np.median(digital)),
        S_T=S_T,
        predicted_shape=lower_bound_shape(config.problem.sigma, S_T, config.problem.L),
    )
    logger.info("asymmetry floor: analog %.4e, digital %.4e, ratio %.2f, shape ratio %.2f",
                report.analog_floor, report.digital_floor, report.ratio, report.shape_ratio)
    return report


def check_expectations(summary: Mapping[str, Any], expect: Mapping[str, float]) -> List[str]:
    """Failed expectation messages for one run summary (empty when all hold)"""
    failures = []
    checks = {
        "max_final_loss": ("final_loss", lambda value, bound: value <= bound),
        "max_floor": ("floor_estimate", lambda value, bound: value <= bound),
        "min_accuracy": ("final_accuracy", lambda value, bound: value >= bound),
    }
    for key, bound in expect.items():
        field_name, holds = checks[key]
        value = summary.get(field_name)
        if value is None:
            failures.append(f"{key}: run reported no {field_name}")
        elif not holds(float(value), float(bound)):
            failures.append(f"{key}: {field_name}={float(value):.6g} violates bound {bound:g}")
    return failures
