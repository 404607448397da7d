import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from analog_sim.core.exceptions import DeviceDomainError, TileIndexError, TileShapeError
from analog_sim.hardware.composite import (
    CompositeWeight,
    is_transfer_step,
    local_counter,
    transfer_every_from_vec,
)
from analog_sim.hardware.tile import Tile, TileInit


def two_tile_composite(model, gamma=0.5):
    tiles = [Tile(np.full((1, 1), 0.5), model), Tile(np.full((1, 1), 0.25), model)]
    return CompositeWeight(tiles, [1.0, gamma], [2], gamma)


class TestEffectiveWeights:
    def test_scaled_sum(self, ideal_device):
        composite = two_tile_composite(ideal_device)
        assert composite.effective_weights()[0, 0] == pytest.approx(0.625)

    def test_partial_sums(self, ideal_device):
        composite = two_tile_composite(ideal_device)
        assert composite.partial_sum(0)[0, 0] == 0.0
        assert composite.partial_sum(1)[0, 0] == pytest.approx(0.5)
        assert composite.partial_sum(2)[0, 0] == pytest.approx(0.625)
        with pytest.raises(TileIndexError):
            composite.partial_sum(3)

    def test_forward_is_linear_in_tiles(self, ideal_device, rng):
        composite = CompositeWeight.from_gamma(3, 2, ideal_device, 3, 0.3,
                                               first_init=TileInit.uniform(-0.5, 0.5), rng=rng)
        composite.tiles[1].weights[:] = rng.uniform(-0.5, 0.5, size=(3, 2))
        composite.tiles[2].weights[:] = rng.uniform(-0.5, 0.5, size=(3, 2))
        x = rng.normal(size=3)
        d = rng.normal(size=2)
        np.testing.assert_allclose(composite.forward(x), x @ composite.effective_weights())
        np.testing.assert_allclose(composite.backward(d), composite.effective_weights() @ d)

    def test_from_gamma_vec_orders_gradient_tile_last(self, ideal_device):
        composite = CompositeWeight.from_gamma_vec(2, 2, ideal_device, [0.25, 0.5, 1.0])
        np.testing.assert_allclose(composite.scales, [1.0, 0.5, 0.25])
        assert composite.gradient_tile is composite.tiles[2]
        assert composite.n_last == 2

    def test_from_gamma_scales(self, ideal_device):
        composite = CompositeWeight.from_gamma(1, 1, ideal_device, 4, 0.5)
        np.testing.assert_allclose(composite.scales, [1.0, 0.5, 0.25, 0.125])
        assert composite.transfer_every == [1, 1, 1]


class TestValidation:
    def test_mismatched_shapes(self, ideal_device):
        tiles = [Tile(np.zeros((2, 2)), ideal_device), Tile(np.zeros((2, 3)), ideal_device)]
        with pytest.raises(TileShapeError):
            CompositeWeight(tiles, [1.0, 0.5])

    def test_bad_gamma(self, ideal_device):
        with pytest.raises(DeviceDomainError):
            CompositeWeight.from_gamma(1, 1, ideal_device, 2, 1.5)

    def test_period_count(self, ideal_device):
        with pytest.raises(TileShapeError):
            CompositeWeight.from_gamma(1, 1, ideal_device, 3, 0.5, transfer_every=[2])
        with pytest.raises(DeviceDomainError):
            CompositeWeight.from_gamma(1, 1, ideal_device, 2, 0.5, transfer_every=[0])

    def test_no_tiles(self):
        with pytest.raises(TileShapeError):
            CompositeWeight([], [])


class TestSchedule:
    def test_periods_from_vec(self):
        assert transfer_every_from_vec([2, 10, 50], 4) == [50, 10, 2]
        assert transfer_every_from_vec([2, 10, 50, 250], 2) == [2]
        assert transfer_every_from_vec([2], 1) == []
        with pytest.raises(TileShapeError):
            transfer_every_from_vec([2], 3)

    def test_counters_with_equal_periods(self):
        periods = [2, 2, 2]
        assert [local_counter(7, n, periods) for n in range(4)] == [1, 2, 4, 7]

    def test_counter_table_for_three_edges(self):
        periods = [2, 2, 2]
        table = [[local_counter(t, n, periods) for n in range(4)] for t in range(8)]
        assert table == [
            [0, 0, 0, 0],
            [0, 0, 1, 1],
            [0, 0, 1, 2],
            [0, 1, 2, 3],
            [0, 1, 2, 4],
            [0, 1, 3, 5],
            [0, 1, 3, 6],
            [1, 2, 4, 7],
        ]
        fired = {edge: [t for t in range(8) if is_transfer_step(t, edge, periods)] for edge in range(3)}
        assert fired == {0: [7], 1: [3, 7], 2: [2, 4, 6]}

    def test_counters_with_mixed_periods(self):
        assert local_counter(49, 0, [10, 5]) == 1
        assert local_counter(49, 1, [10, 5]) == 10
        assert local_counter(48, 0, [10, 5]) == 0

    def test_counter_index_out_of_range(self):
        with pytest.raises(TileIndexError):
            local_counter(3, 4, [2, 2])
        with pytest.raises(TileIndexError):
            is_transfer_step(3, 2, [2, 2])

    def test_gradient_edge_fires_every_period(self):
        fired = [t for t in range(12) if is_transfer_step(t, 0, [3])]
        assert fired == [3, 6, 9]

    @pytest.mark.parametrize("periods", [[2, 2, 2], [3, 2], [1, 4], [5]])
    def test_write_counts(self, periods):
        horizon = 200
        for edge in range(len(periods)):
            writes = sum(is_transfer_step(t, edge, periods) for t in range(horizon + 1))
            assert writes == local_counter(horizon, edge + 1, periods) // periods[edge]

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.integers(min_value=1, max_value=5), min_size=1, max_size=4),
           st.integers(min_value=0, max_value=500))
    def test_counters_are_monotone(self, periods, t):
        num_tiles = len(periods) + 1
        for n in range(num_tiles):
            assert local_counter(t + 1, n, periods) >= local_counter(t, n, periods)
        for n in range(num_tiles - 1):
            assert local_counter(t, n, periods) <= local_counter(t, n + 1, periods) + 1


def test_checkpoint_round_trip(ideal_device):
    composite = CompositeWeight.from_gamma_vec(1, 2, ideal_device, [0.5, 1.0], transfer_every=[3])
    composite.tiles[0].weights[:] = 0.5
    for _ in range(5):
        composite.tick()
    data = composite.to_checkpoint()
    assert data["counters"] == [2, 5]
    restored = CompositeWeight.from_checkpoint(data)
    np.testing.assert_array_equal(restored.effective_weights(), composite.effective_weights())
    assert restored.t_global == 5
    assert restored.transfer_every == [3]
