from dataclasses import replace

import numpy as np
import pytest

from analog_sim.core.exceptions import ConfigError
from analog_sim.harness.workflow import ExperimentRunner, parse_tile_range, sweep
from analog_sim.hardware.device import DeviceModel
from analog_sim.models.experiment import AlgorithmConfig, ExperimentConfig, ProblemConfig
from analog_sim.utils.file_utils import read_csv, read_json

SUMMARY_KEYS = {
    "name", "algorithm", "seed", "num_tiles", "steps", "final_loss", "final_dist2",
    "floor_estimate", "S_T", "R_T", "pulses", "transfer_events", "config_hash",
    "w_star", "final_weights",
}


def mlp_config(tmp_path, data_dir=None, algorithm="analog_sgd", **algo_kwargs):
    return ExperimentConfig(
        name="mlp",
        problem=ProblemConfig(kind="mlp", hidden=8, data_dir=data_dir, epochs=1),
        device=DeviceModel.asymmetric_linear(tau=1.0, dw_min=0.02),
        algorithm=AlgorithmConfig(name=algorithm, alpha=0.05, **algo_kwargs),
        seeds=(0,),
        log_interval=16,
        output_dir=str(tmp_path / "runs"),
    )


class TestObjectiveRuns:
    def test_metrics_are_reproducible(self, quadratic_config, tmp_path):
        config = quadratic_config("residual", num_tiles=2, gamma=0.5)
        first = ExperimentRunner(str(tmp_path / "a")).run(config)[0]
        second = ExperimentRunner(str(tmp_path / "b")).run(config)[0]
        a = (first.out_dir / "metrics.csv").read_bytes()
        b = (second.out_dir / "metrics.csv").read_bytes()
        assert a == b
        assert first.out_dir == tmp_path / "a" / "quad" / "seed_0"

    def test_metrics_layout(self, quadratic_config):
        result = ExperimentRunner().run(quadratic_config("analog_sgd", steps=200))[0]
        rows = read_csv(result.out_dir / "metrics.csv")
        assert list(rows[0]) == ["t", "loss", "dist2", "linf_tile_0", "pulses", "S_T", "R_T"]
        assert [int(r["t"]) for r in rows] == list(range(0, 201, 10))
        assert int(rows[0]["pulses"]) == 0

    def test_final_row_kept_off_interval(self, quadratic_config):
        result = ExperimentRunner(write_files=False).run_seed(quadratic_config(steps=25), 0)
        assert [row.t for row in result.record.rows] == [0, 10, 20, 25]
        assert result.out_dir is None

    def test_summary(self, quadratic_config):
        result = ExperimentRunner().run(quadratic_config("residual", num_tiles=3, gamma=0.5,
                                                         transfer_every=(2, 2)))[0]
        summary = read_json(result.out_dir / "summary.json")
        assert set(summary) == SUMMARY_KEYS | {"warm_k"}
        assert summary["warm_k"] == [2]
        assert summary["transfer_events"] == len(result.trainers[0].events) > 0
        assert summary["pulses"] == result.trainers[0].pulse_count()
        assert summary["floor_estimate"] is not None
        assert len(summary["final_weights"]) == 3

    def test_runs_converge_towards_optimum(self, quadratic_config):
        config = quadratic_config(steps=400)
        config = replace(config, problem=replace(config.problem, w_star=(0.2, -0.2, 0.2)))
        result = ExperimentRunner(write_files=False).run_seed(config, 0)
        dist = result.record.dist2
        assert dist[0] == pytest.approx(0.12)
        assert np.mean(dist[-5:]) < 0.03

    def test_seeds_differ(self, quadratic_config):
        results = ExperimentRunner(write_files=False).run(quadratic_config(seeds=(0, 1)))
        assert results[0].summary["w_star"] != results[1].summary["w_star"]

    def test_checkpoint(self, quadratic_config):
        config = replace(quadratic_config("ttv2", transfer_period=2), checkpoint=True)
        result = ExperimentRunner().run(config)[0]
        data = read_json(result.out_dir / "checkpoint.json")
        assert data["config_hash"] == result.summary["config_hash"]
        layer = data["layers"][0]
        assert layer["algorithm"] == "ttv2"
        assert len(layer["tiles"]) == 2
        assert layer["tiles"][0]["shape"] == [3, 1]

    def test_no_checkpoint_by_default(self, quadratic_config):
        result = ExperimentRunner().run(quadratic_config())[0]
        assert not (result.out_dir / "checkpoint.json").exists()


class TestMlpRuns:
    def test_trains_on_idx_files(self, tmp_path, idx_dir):
        result = ExperimentRunner().run(mlp_config(tmp_path, str(idx_dir)))[0]
        assert [row.t for row in result.record.rows] == [16, 32, 48]
        assert 0.0 <= result.summary["final_accuracy"] <= 1.0
        assert result.summary["final_dist2"] is None
        assert len(result.trainers) == 2
        assert result.trainers[0].tiles[0].shape == (784, 8)

    def test_data_dir_from_environment(self, tmp_path, idx_dir, monkeypatch):
        monkeypatch.setenv("ANALOG_SIM_DATA_DIR", str(idx_dir))
        config = mlp_config(tmp_path, algorithm="residual", num_tiles=2, gamma=0.5, warm_start=True)
        result = ExperimentRunner(write_files=False).run_seed(config, 0)
        assert all(k in (0, 1) for k in result.summary["warm_k"])
        assert {event["layer"] for event in result.record.events} <= {0, 1}

    def test_analog_mask_keeps_masked_layers_digital(self, tmp_path, idx_dir):
        config = mlp_config(tmp_path, str(idx_dir))
        config = replace(config, problem=replace(config.problem, analog_mask=(False, True)))
        result = ExperimentRunner(write_files=False).run_seed(config, 0)
        assert len(result.trainers) == 1
        assert result.trainers[0].tiles[0].shape == (8, 10)
        assert result.summary["pulses"] == result.trainers[0].pulse_count()

    def test_all_digital_mask_rejected(self):
        with pytest.raises(ConfigError) as info:
            ProblemConfig(kind="mlp", analog_mask=(False, False))
        assert info.value.key == "problem.analog_mask"

    def test_missing_data_dir(self, tmp_path):
        with pytest.raises(ConfigError) as info:
            ExperimentRunner(write_files=False).run_seed(mlp_config(tmp_path), 0)
        assert info.value.key == "problem.data_dir"


class TestSweep:
    @pytest.mark.parametrize("text, expected", [
        ("tiles=1..4", [1, 2, 3, 4]),
        ("1..2", [1, 2]),
        ("tiles=1,2,8", [1, 2, 8]),
        ("num_tiles=3", [3]),
    ])
    def test_parse_tile_range(self, text, expected):
        assert parse_tile_range(text) == expected

    @pytest.mark.parametrize("text", ["gamma=0.1..0.5", "tiles=a..b", "tiles=0..2", "tiles="])
    def test_bad_tile_range(self, text):
        with pytest.raises(ConfigError) as info:
            parse_tile_range(text)
        assert info.value.key == "sweep.vary"

    def test_sweep_writes_table(self, toy_config, tmp_path):
        config = toy_config(steps=200, seeds=(0, 1))
        rows = sweep(config, [1, 2])
        assert [row["num_tiles"] for row in rows] == [1, 2]
        assert all(row["seeds"] == 2 for row in rows)
        assert all(row["min_final_loss"] <= row["median_final_loss"] <= row["max_final_loss"] for row in rows)
        table = read_csv(tmp_path / "runs" / "toy" / "sweep.csv")
        assert [int(r["num_tiles"]) for r in table] == [1, 2]
        assert table[0]["median_accuracy"] == ""
        assert (tmp_path / "runs" / "toy" / "tiles_2" / "seed_1" / "metrics.csv").exists()
        metrics = read_csv(tmp_path / "runs" / "toy" / "tiles_2" / "seed_1" / "metrics.csv")
        assert "linf_tile_1" in metrics[0]

    def test_short_transfer_rates_fail_before_any_run(self, toy_config, tmp_path):
        config = toy_config(steps=50)
        config = replace(config, algorithm=replace(config.algorithm, transfer_lr_vec=(0.1,)))
        with pytest.raises(ConfigError) as info:
            sweep(config, [1, 3])
        assert info.value.key == "algorithm.transfer_lr_vec"
        assert not (tmp_path / "runs").exists()

    def test_sweep_is_order_independent(self, toy_config, tmp_path):
        config = toy_config(steps=100, seeds=(0,))
        forward = sweep(config, [1, 2], output_root=str(tmp_path / "f"))
        backward = sweep(config, [2, 1], output_root=str(tmp_path / "b"))
        assert forward[0]["median_final_loss"] == backward[1]["median_final_loss"]
        assert np.isfinite(forward[1]["median_final_loss"])
