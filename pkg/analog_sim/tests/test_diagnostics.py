import math

import numpy as np
import pytest

from analog_sim.core.exceptions import PreconditionError
from analog_sim.harness.diagnostics import (
    RunningSR,
    diagnostics_sr,
    floor_estimate,
    lower_bound_shape,
    tail_mean,
)
from analog_sim.models.record import RecordRow, RunRecord


def make_record(losses, dist2=None):
    record = RunRecord("analog_sgd", 0, 1)
    for i, loss in enumerate(losses):
        d = None if dist2 is None else dist2[i]
        record.append(RecordRow(i * 10, loss, d, [0.1], i, 0.0, 2.0))
    return record


class TestSaturationFactors:
    def test_single_iterate(self):
        S, R = diagnostics_sr([0.5], tau_max=1.0, L=1.0)
        assert S == pytest.approx(1.0 / 3.0)
        assert R == pytest.approx(8.0 / 3.0)

    def test_zero_trajectory(self):
        assert diagnostics_sr([0.0, 0.0], 2.0, 0.5) == (0.0, 1.0)

    def test_bound_contact_diverges(self):
        assert diagnostics_sr([0.2, 1.0], 1.0, 1.0) == (math.inf, math.inf)

    def test_invalid_inputs(self):
        with pytest.raises(PreconditionError):
            diagnostics_sr([], 1.0, 1.0)
        with pytest.raises(PreconditionError):
            diagnostics_sr([0.1], 0.0, 1.0)

    def test_running_matches_batch(self):
        trajectory = [0.0, 0.3, 0.6, 0.45]
        running = RunningSR(tau_max=1.5, L=2.0)
        for value in trajectory:
            running.update(value)
        expected = diagnostics_sr(trajectory, 1.5, 2.0)
        assert running.values == pytest.approx(expected)
        assert running.count == 4

    def test_running_edge_cases(self):
        running = RunningSR(1.0)
        assert all(math.isnan(v) for v in running.values)
        running.update(1.0)
        assert running.values == (math.inf, math.inf)


class TestFloor:
    def test_tail_mean(self):
        assert tail_mean([1.0, 2.0, 3.0, 4.0, 5.0], 0.4) == pytest.approx(4.5)
        assert tail_mean([2.0], 1.0) == 2.0

    @pytest.mark.parametrize("fraction", [0.0, 1.5])
    def test_tail_fraction_range(self, fraction):
        with pytest.raises(PreconditionError):
            tail_mean([1.0, 2.0], fraction)

    def test_empty_tail(self):
        with pytest.raises(PreconditionError, match="empty tail"):
            tail_mean([1.0, 2.0, 3.0], 0.2)

    def test_prefers_distance(self):
        record = make_record([4.0, 3.0, 2.0, 1.0], dist2=[8.0, 6.0, 4.0, 2.0])
        assert floor_estimate(record, 0.5) == pytest.approx(3.0)
        assert floor_estimate(record, 0.5, metric="loss") == pytest.approx(1.5)

    def test_falls_back_to_loss(self):
        record = make_record([4.0, 3.0, 2.0, 1.0])
        assert record.dist2 is None
        assert floor_estimate(record, 0.25) == pytest.approx(1.0)
        with pytest.raises(PreconditionError):
            floor_estimate(record, 0.25, metric="dist2")

    def test_lower_bound_shape(self):
        assert lower_bound_shape(0.2, 3.0, 2.0) == pytest.approx(0.03)


class TestRecord:
    def test_rows_must_increase(self):
        record = make_record([1.0])
        with pytest.raises(PreconditionError):
            record.append(RecordRow(0, 1.0, None, [0.0], 0, 0.0, 0.0))

    def test_non_finite_loss(self):
        with pytest.raises(PreconditionError):
            make_record([float("nan")])

    def test_csv_layout(self):
        record = RunRecord("residual", 0, 2)
        record.append(RecordRow(5, 0.25, 0.5, [0.1, 0.0], np.int64(12), 0.0, 2.0))
        assert record.csv_header() == ["t", "loss", "dist2", "linf_tile_0", "linf_tile_1", "pulses", "S_T", "R_T"]
        assert record.csv_rows() == [["5", "0.25", "0.5", "0.1", "0.0", "12", "0.0", "2.0"]]
        assert record.final_loss == 0.25
        np.testing.assert_array_equal(record.steps, [5])
