import math

import numpy as np
import pytest

from analog_sim.core.exceptions import PreconditionError, TileIndexError, TileShapeError
from analog_sim.hardware.device import DeviceModel
from analog_sim.hardware.pulse_engine import (
    apply_rank_update,
    noise_moments_oracle,
    plan_update,
    simulate_cell_trials,
    transfer_write,
)
from analog_sim.hardware.tile import Tile, TileInit, new_tile

WIDE_IDEAL = DeviceModel.ideal(tau=20.0, dw_min=0.5)


class TestPlanUpdate:
    def test_unbiasedness_identity(self, ald_device):
        plan = plan_update(np.array([1.0]), np.array([1.0]), 0.1, ald_device)
        assert plan.bl == 1
        product = plan.p_row[0] * plan.p_col[0] * plan.bl * ald_device.dw_min
        assert product == pytest.approx(0.1)

    def test_identity_holds_for_every_cell(self, rng):
        model = DeviceModel.ideal(tau=1.0, dw_min=0.01)
        x = rng.normal(size=4)
        delta = rng.normal(size=3)
        plan = plan_update(x, delta, 0.3, model)
        assert np.all((plan.p_row >= 0) & (plan.p_row <= 1))
        assert np.all((plan.p_col >= 0) & (plan.p_col <= 1))
        np.testing.assert_allclose(plan.expected_update(), 0.3 * np.outer(x, delta), rtol=1e-10)
        assert plan.bl == max(1, math.ceil(0.3 * np.abs(x).max() * np.abs(delta).max() / 0.01))

    def test_zero_input_is_noop(self, ideal_device, rng):
        plan = plan_update(np.zeros(2), np.array([1.0, 2.0]), 0.1, ideal_device)
        assert plan.is_noop
        np.testing.assert_array_equal(plan.expected_update(), np.zeros((2, 2)))
        tile = new_tile(2, 2, ideal_device)
        np.testing.assert_array_equal(apply_rank_update(tile, plan, rng), np.zeros((2, 2)))

    def test_coincidence_sign(self, ideal_device):
        plan = plan_update(np.array([1.0]), np.array([-1.0]), 0.1, ideal_device)
        assert plan.coincidence_sign()[0, 0] == -1

    def test_bl_override(self, ideal_device):
        plan = plan_update(np.array([1.0]), np.array([1.0]), 0.1, ideal_device, bl=10)
        assert plan.bl == 10
        assert plan.p_row[0] * plan.p_col[0] == pytest.approx(0.02)
        with pytest.raises(PreconditionError):
            plan_update(np.array([1.0]), np.array([1.0]), 5.0, ideal_device, bl=2)

    @pytest.mark.parametrize("x, alpha", [([np.nan], 0.1), ([1.0], -0.1), ([1.0], math.inf)])
    def test_invalid_inputs(self, ideal_device, x, alpha):
        with pytest.raises(PreconditionError):
            plan_update(np.array(x), np.array([1.0]), alpha, ideal_device)


class TestApplyRankUpdate:
    def test_forced_coincidence_moves_by_one_step(self, ideal_device, rng):
        tile = new_tile(1, 1, ideal_device)
        plan = plan_update(np.array([1.0]), np.array([1.0]), 0.5, ideal_device)
        assert plan.p_row[0] == pytest.approx(1.0) and plan.p_col[0] == pytest.approx(1.0)
        delta = apply_rank_update(tile, plan, rng)
        assert delta[0, 0] == pytest.approx(0.5)
        assert tile.pulse_count == 1

    def test_saturated_cell_does_not_move_up(self, ald_device, rng):
        tile = new_tile(1, 1, ald_device, TileInit.given([[1.0]]))
        plan = plan_update(np.array([1.0]), np.array([1.0]), 0.5, ald_device)
        apply_rank_update(tile, plan, rng)
        assert tile.weights[0, 0] == 1.0

    def test_shape_mismatch(self, ideal_device, rng):
        tile = new_tile(2, 2, ideal_device)
        plan = plan_update(np.ones(3), np.ones(2), 0.1, ideal_device)
        with pytest.raises(TileShapeError):
            apply_rank_update(tile, plan, rng)

    def test_same_seed_same_update(self, fine_ald_device):
        x = np.array([0.3, -0.8, 0.5])
        delta = np.array([1.0, -0.2])
        plan = plan_update(x, delta, 0.4, fine_ald_device)
        realized = []
        for _ in range(2):
            tile = new_tile(3, 2, fine_ald_device)
            realized.append(apply_rank_update(tile, plan, np.random.default_rng(99)))
        np.testing.assert_array_equal(realized[0], realized[1])

    def test_bounds_hold_under_random_updates(self, monkeypatch):
        monkeypatch.setenv("ANALOG_SIM_DEBUG", "1")
        model = DeviceModel.asymmetric_linear(tau=1.0, dw_min=0.3)
        tile = new_tile(3, 3, model)
        rng = np.random.default_rng(7)
        for _ in range(10_000):
            plan = plan_update(rng.normal(size=3), rng.normal(size=3), rng.uniform(0.0, 2.0), model)
            apply_rank_update(tile, plan, rng)
        assert np.all(tile.weights <= model.w_max) and np.all(tile.weights >= model.w_min)

    def test_mean_update_is_unbiased(self):
        x = np.array([0.4, -1.0])
        delta = np.array([0.5, 1.0])
        plan = plan_update(x, delta, 0.2, WIDE_IDEAL, bl=4)
        target = 0.2 * np.outer(x, delta)
        rng = np.random.default_rng(11)
        for i in range(2):
            for j in range(2):
                changes = simulate_cell_trials(WIDE_IDEAL, 0.0, plan, rng, 100_000, row=i, col=j)
                stderr = changes.std(ddof=1) / math.sqrt(changes.size)
                assert abs(changes.mean() - target[i, j]) < 4 * stderr


class TestNoiseMoments:
    def test_closed_form_example(self):
        mean, var = noise_moments_oracle(1.0, 1.0, 0.1, 0.5, 10)
        assert mean == pytest.approx(0.1)
        assert var == pytest.approx(0.049)

    def test_zero_input(self):
        assert noise_moments_oracle(0.0, 1.0, 0.1, 0.5, 10) == (0.0, 0.0)

    def test_probability_above_one(self):
        with pytest.raises(PreconditionError):
            noise_moments_oracle(1.0, 1.0, 1.0, 0.01, 10)

    def test_variance_scales_with_step(self):
        _, small = noise_moments_oracle(1.0, 1.0, 0.01, 0.01, 100)
        _, double = noise_moments_oracle(1.0, 1.0, 0.01, 0.02, 100)
        assert double / small == pytest.approx(2.0, rel=0.02)

    @pytest.mark.parametrize("p", [0.02, 0.2, 0.8])
    def test_empirical_variance_matches(self, p):
        bl, dw = 10, 0.5
        alpha = p * bl * dw
        plan = plan_update(np.array([1.0]), np.array([1.0]), alpha, WIDE_IDEAL, bl=bl)
        changes = simulate_cell_trials(WIDE_IDEAL, 0.0, plan, np.random.default_rng(5), 100_000)
        _, var = noise_moments_oracle(1.0, 1.0, alpha, dw, bl)
        assert changes.var(ddof=1) / var == pytest.approx(1.0, abs=0.05)


class TestTransferWrite:
    def test_forced_single_pulse(self, ideal_device, rng):
        dst = new_tile(2, 3, ideal_device)
        realized = transfer_write(dst, np.array([1.0, -1.0]), 1, 0.5, rng)
        np.testing.assert_allclose(realized, [0.5, -0.5])
        np.testing.assert_allclose(dst.weights[:, 1], [0.5, -0.5])
        assert np.all(dst.weights[:, [0, 2]] == 0.0)

    def test_zero_values_leave_column(self, ideal_device, rng):
        dst = new_tile(2, 2, ideal_device)
        transfer_write(dst, np.zeros(2), 0, 0.5, rng)
        assert np.all(dst.weights == 0.0)

    def test_saturated_destination(self, ald_device, rng):
        dst = new_tile(1, 2, ald_device, TileInit.given([[1.0, 0.0]]))
        transfer_write(dst, np.array([1.0]), 0, 0.5, rng)
        assert dst.weights[0, 0] == 1.0

    def test_column_out_of_range(self, ideal_device, rng):
        dst = new_tile(2, 2, ideal_device)
        with pytest.raises(TileIndexError):
            transfer_write(dst, np.ones(2), 2, 0.1, rng)

    def test_value_count_mismatch(self, ideal_device, rng):
        dst = new_tile(2, 2, ideal_device)
        with pytest.raises(TileShapeError):
            transfer_write(dst, np.ones(3), 0, 0.1, rng)


def test_tile_apply_counts_pulses(ideal_device):
    tile = Tile(np.zeros((2, 2)), ideal_device)
    plan = plan_update(np.ones(2), np.ones(2), 0.5, ideal_device)
    tile.apply(plan, np.random.default_rng(0))
    assert tile.pulse_count == 4
    np.testing.assert_allclose(tile.weights, 0.5)
