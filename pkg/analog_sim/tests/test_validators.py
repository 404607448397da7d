import math

import pytest

from analog_sim.core.exceptions import PreconditionError
from analog_sim.harness.validators import (
    AsymmetryReport,
    asymmetry_config,
    check_expectations,
    compare_asymmetry_floor,
    validate_pulse_moments,
)


class TestPulseMoments:
    def test_default_case_passes(self):
        report = validate_pulse_moments(0.1, 1.0, 1.0, 0.5, 10)
        assert report.passed
        assert report.oracle_mean == pytest.approx(0.1)
        assert report.oracle_var == pytest.approx(0.049)
        assert abs(report.z_mean) < 4.0

    def test_zero_rate_is_exact(self):
        report = validate_pulse_moments(0.0, 1.0, 1.0, 0.5, 10, trials=1000)
        assert report.passed
        assert report.empirical_var == 0.0
        assert report.z_mean == 0.0 and report.var_rel_error == 0.0

    def test_negative_product(self):
        report = validate_pulse_moments(0.5, 1.0, -1.0, 0.5, 10, trials=50_000, seed=3)
        assert report.oracle_mean == pytest.approx(-0.5)
        assert report.empirical_mean < 0
        assert report.passed

    def test_reproducible(self):
        a = validate_pulse_moments(0.1, 1.0, 1.0, 0.5, 10, trials=2000, seed=9)
        b = validate_pulse_moments(0.1, 1.0, 1.0, 0.5, 10, trials=2000, seed=9)
        assert a.to_dict() == b.to_dict()

    def test_probability_above_one(self):
        with pytest.raises(PreconditionError):
            validate_pulse_moments(10.0, 1.0, 1.0, 0.5, 2)

    def test_bad_bit_length(self):
        with pytest.raises(PreconditionError):
            validate_pulse_moments(0.1, 1.0, 1.0, 0.5, 0)


class TestExpectations:
    def test_all_hold(self):
        summary = {"final_loss": 0.01, "floor_estimate": 0.02, "final_accuracy": 0.9}
        expect = {"max_final_loss": 0.1, "max_floor": 0.1, "min_accuracy": 0.8}
        assert check_expectations(summary, expect) == []

    def test_violations_are_named(self):
        failures = check_expectations({"final_loss": 0.5, "final_accuracy": 0.5},
                                       {"max_final_loss": 0.1, "min_accuracy": 0.8})
        assert len(failures) == 2
        assert failures[0].startswith("max_final_loss")

    def test_missing_value(self):
        failures = check_expectations({"floor_estimate": None}, {"max_floor": 0.1})
        assert failures == ["max_floor: run reported no floor_estimate"]


class TestAsymmetry:
    def test_config_uses_half_inverse_smoothness(self):
        config = asymmetry_config(L=2.0, steps=100, seeds=(4,))
        assert config.algorithm.alpha == 0.25
        assert config.problem.noise == "two_point"
        assert config.seeds == (4,)
        assert config.log_interval == 1

    def test_default_noise_within_two_point_bound(self):
        config = asymmetry_config()
        assert config.problem.sigma <= 1.0 / (4.0 * math.sqrt(3.0))
        assert config.problem.w_star_scale == 0.8
        assert config.device.dw_min == pytest.approx(0.1)

    def test_noise_above_bound_rejected(self):
        with pytest.raises(PreconditionError, match="two-point bound"):
            asymmetry_config(sigma=0.2)

    @pytest.mark.parametrize("analog, digital, shape, passed", [
        (0.01, 0.001, 0.005, True),
        (0.01, 0.003, 0.005, False),
        (0.01, 0.001, 0.0005, False),
        (0.01, 0.001, 0.2, False),
        (0.0, 0.0, 0.005, False),
    ])
    def test_pass_criteria(self, analog, digital, shape, passed):
        report = AsymmetryReport(0.05, 1.0, [0], analog, digital, 2.0, shape)
        assert report.passed is passed
        assert report.to_dict()["passed"] is passed

    def test_short_comparison_reports_floors(self):
        report = compare_asymmetry_floor(asymmetry_config(steps=200, seeds=(0,)))
        assert report.analog_floor > 0 and report.digital_floor > 0
        assert report.ratio == pytest.approx(report.analog_floor / report.digital_floor)
        assert math.isfinite(report.S_T)
        assert set(report.to_dict()) >= {"analog_floor", "digital_floor", "ratio", "predicted_shape",
                                         "shape_ratio", "passed"}

    def test_needs_analog_sgd(self, quadratic_config):
        with pytest.raises(PreconditionError):
            compare_asymmetry_floor(quadratic_config("residual"))
