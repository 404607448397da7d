#!/usr/bin/env python3
"""
Workflow - orchestrates experiment runs, sweeps and their artifacts

One run = one (config, seed) pair. Everything random inside a run is drawn
from streams keyed off the seed, so a run is reproducible on its own and
runs can execute in any order or in parallel.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..algorithms import BaseTrainer, build_trainer
from ..core.algorithm_config import ALGORITHM_DISPLAY_NAMES
from ..core.exceptions import ConfigError, PreconditionError
from ..core.logger import get_logger
from ..core.settings import DEFAULT_LOG_INTERVAL_TOY, default_data_dir
from ..hardware.tile import TileInit
from ..models.experiment import ExperimentConfig
from ..models.record import RecordRow, RunRecord
from ..parsers.idx_parser import load_mnist
from ..problems import DigitalLayer, MlpModel, MlpSpec, build_objective
from ..utils.file_utils import config_hash, ensure_dir, write_csv, write_json
from ..utils.rng import StreamFactory
from .diagnostics import RunningSR, floor_estimate

logger = get_logger(__name__)

NUM_CLASSES = 10


@dataclass
class RunResult:
    record: RunRecord
    summary: Dict[str, Any]
    trainers: List[BaseTrainer] = field(default_factory=list, repr=False)
    out_dir: Optional[Path] = None


def _tile_linf(trainers: Sequence[BaseTrainer]) -> List[float]:
    """Per tile index, the largest |w| over all layers"""
    count = max(len(t.tiles) for t in trainers)
    out = []
    for n in range(count):
        out.append(max(t.tiles[n].linf() for t in trainers if n < len(t.tiles)))
    return out


def _gradient_linf(trainers: Sequence[BaseTrainer]) -> float:
    return max(t.gradient_tile.linf() for t in trainers)


class ExperimentRunner:
    """Runs configs seed by seed and writes metrics.csv / summary.json per run"""

    def __init__(self, output_root: Optional[str] = None, write_files: bool = True):
        self.output_root = output_root
        self.write_files = write_files

    # ---- public API ------------------------------------------------------

    def run(self, config: ExperimentConfig) -> List[RunResult]:
        logger.info("run %s: %s, %d tile(s), seeds %s", config.name,
                    ALGORITHM_DISPLAY_NAMES.get(config.algorithm.name, config.algorithm.name),
                    config.algorithm.num_tiles, list(config.seeds))
        return [self.run_seed(config, seed) for seed in config.seeds]

    def run_seed(self, config: ExperimentConfig, seed: int, subdir: Optional[str] = None) -> RunResult:
        streams = StreamFactory(seed)
        if config.problem.kind == "mlp":
            record, trainers, extra = self._train_mlp(config, seed, streams)
        else:
            record, trainers, extra = self._train_objective(config, seed, streams)
        summary = self._summarize(config, seed, record, trainers, extra)
        result = RunResult(record, summary, trainers)
        if self.write_files:
            result.out_dir = self._write(config, seed, result, subdir)
        return result

    # ---- objective problems (quadratic, toy) -----------------------------

    def _train_objective(self, config: ExperimentConfig, seed: int, streams: StreamFactory
                         ) -> Tuple[RunRecord, List[BaseTrainer], Dict[str, Any]]:
        objective = build_objective(config.problem, config.device, streams)
        trainer = build_trainer(config.algorithm, config.device, streams, objective.shape, 0, TileInit.zero())
        interval = config.log_interval or DEFAULT_LOG_INTERVAL_TOY
        record = RunRecord(config.algorithm.name, seed, len(trainer.tiles))
        sr = RunningSR(config.device.w_max, config.problem.L)

        for t in range(config.steps + 1):
            W = trainer.effective_weights()
            sr.update(trainer.gradient_tile.linf())
            if t % interval == 0 or t == config.steps:
                loss = objective.loss(W)
                S_T, R_T = sr.values
                record.append(RecordRow(t, loss, objective.dist2(W), _tile_linf([trainer]),
                                        trainer.pulse_count(), S_T, R_T))
                trainer.record_loss(loss)
            if t == config.steps:
                break
            x, delta = objective.sample(W, streams.noise(t) if objective.noisy else None)
            trainer.step(x, delta)

        record.events = list(trainer.events)
        extra = {"w_star": objective.w_star.tolist(), "final_weights": trainer.effective_weights().ravel().tolist()}
        return record, [trainer], extra

    # ---- MLP on IDX data -------------------------------------------------

    def _train_mlp(self, config: ExperimentConfig, seed: int, streams: StreamFactory
                   ) -> Tuple[RunRecord, List[BaseTrainer], Dict[str, Any]]:
        problem = config.problem
        data_dir = problem.data_dir or default_data_dir()
        if not data_dir:
            raise ConfigError("MLP runs need problem.data_dir or ANALOG_SIM_DATA_DIR", "problem.data_dir")
        train = load_mnist(data_dir, "train", problem.train_subset)
        test = load_mnist(data_dir, "test", problem.test_subset)
        X_train, X_test = train.flat_images(), test.flat_images()

        spec = MlpSpec((X_train.shape[1], problem.hidden, NUM_CLASSES), loss=problem.loss,
                       analog_mask=problem.analog_mask)
        scale = min(problem.init_scale, config.device.w_max)
        layers: List[Any] = []
        for layer in range(spec.num_layers):
            shape = spec.layer_shape(layer)
            if spec.is_analog(layer):
                layers.append(build_trainer(config.algorithm, config.device, streams, shape, layer,
                                            TileInit.uniform(-scale, scale)))
            else:
                weights = streams.init(layer).uniform(-scale, scale, size=shape)
                layers.append(DigitalLayer(weights, config.algorithm.alpha))
        trainers = [layer for layer in layers if isinstance(layer, BaseTrainer)]
        model = MlpModel(spec, layers, bias_lr=config.algorithm.alpha)
        targets = train.labels if problem.loss == "cross_entropy" else np.eye(NUM_CLASSES)[train.labels]

        interval = config.log_interval or len(train)
        record = RunRecord(config.algorithm.name, seed, len(trainers[0].tiles))
        sr = RunningSR(config.device.w_max, problem.L)
        t = 0
        window: List[float] = []
        for epoch in range(problem.epochs):
            order = streams.data(epoch + 1).permutation(len(train))
            for index in order:
                sr.update(_gradient_linf(trainers))
                window.append(model.train_sample(X_train[index], targets[index]))
                t += 1
                if t % interval == 0:
                    loss = float(np.mean(window))
                    window.clear()
                    S_T, R_T = sr.values
                    record.append(RecordRow(t, loss, None, _tile_linf(trainers),
                                            sum(tr.pulse_count() for tr in trainers), S_T, R_T))
                    model.record_loss(loss)
            logger.info("epoch %d: test accuracy %.4f", epoch + 1, model.accuracy(X_test, test.labels))

        if window:
            S_T, R_T = sr.values
            record.append(RecordRow(t, float(np.mean(window)), None, _tile_linf(trainers),
                                    sum(tr.pulse_count() for tr in trainers), S_T, R_T))
        record.final_accuracy = model.accuracy(X_test, test.labels)
        record.events = [dict(event, layer=tr.layer) for tr in trainers for event in tr.events]
        return record, trainers, {"final_accuracy": record.final_accuracy}

    # ---- artifacts -------------------------------------------------------

    def _summarize(self, config: ExperimentConfig, seed: int, record: RunRecord,
                   trainers: List[BaseTrainer], extra: Dict[str, Any]) -> Dict[str, Any]:
        try:
            floor = floor_estimate(record, config.tail_fraction)
        except PreconditionError as exc:
            logger.warning("no floor estimate for seed %d: %s", seed, exc)
            floor = None
        last = record.rows[-1]
        summary = {
            "name": config.name,
            "algorithm": config.algorithm.name,
            "seed": seed,
            "num_tiles": config.algorithm.num_tiles,
            "steps": last.t,
            "final_loss": last.loss,
            "final_dist2": last.dist2,
            "floor_estimate": floor,
            "S_T": last.S_T,
            "R_T": last.R_T,
            "pulses": last.pulses,
            "transfer_events": len(record.events),
            "config_hash": config_hash(config.to_dict()),
        }
        if config.algorithm.name == "residual":
            summary["warm_k"] = [tr.state.warm_k for tr in trainers]
        summary.update(extra)
        return summary

    def _write(self, config: ExperimentConfig, seed: int, result: RunResult,
               subdir: Optional[str] = None) -> Path:
        root = Path(self.output_root or config.output_dir) / config.name
        if subdir:
            root = root / subdir
        out_dir = ensure_dir(root / f"seed_{seed}")
        write_csv(out_dir / "metrics.csv", result.record.csv_header(), result.record.csv_rows())
        write_json(out_dir / "summary.json", result.summary)
        if config.checkpoint:
            write_json(out_dir / "checkpoint.json", {
                "config_hash": result.summary["config_hash"],
                "layers": [tr.to_checkpoint() for tr in result.trainers],
            })
        logger.info("wrote %s", out_dir)
        return out_dir


# ---- sweeps --------------------------------------------------------------

def _sweep_job(args: Tuple[ExperimentConfig, int, int, Optional[str]]) -> Dict[str, Any]:
    config, num_tiles, seed, output_root = args
    runner = ExperimentRunner(output_root)
    result = runner.run_seed(config.with_tiles(num_tiles), seed, subdir=f"tiles_{num_tiles}")
    return {"num_tiles": num_tiles, "seed": seed, "final_loss": result.summary["final_loss"],
            "floor_estimate": result.summary["floor_estimate"],
            "final_accuracy": result.summary.get("final_accuracy")}


def parse_tile_range(text: str) -> List[int]:
    """'tiles=1..8', '1..8' or '1,2,4' -> tile counts"""
    value = text.split("=", 1)[1] if "=" in text else text
    key = text.split("=", 1)[0].strip() if "=" in text else "tiles"
    if key not in ("tiles", "num_tiles"):
        raise ConfigError(f"only tile counts can be swept, got '{key}'", "sweep.vary")
    try:
        if ".." in value:
            low, high = (int(v) for v in value.split("..", 1))
            counts = list(range(low, high + 1))
        else:
            counts = [int(v) for v in value.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"cannot parse tile range '{value}'", "sweep.vary") from exc
    if not counts or min(counts) < 1:
        raise ConfigError(f"tile counts must be >= 1, got '{value}'", "sweep.vary")
    return counts


def sweep(config: ExperimentConfig, tile_counts: Sequence[int], jobs: int = 1,
          output_root: Optional[str] = None) -> List[Dict[str, Any]]:
    """
    Run every (tile count, seed) pair and aggregate final losses per tile count

    Writes sweep.csv next to the per-run directories.
    """
    for n in tile_counts:
        # fail on bad schedules before any run starts
        algorithm = config.with_tiles(n).algorithm
        algorithm.resolved_transfer_every()
        algorithm.resolved_transfer_lrs()
    tasks = [(config, n, seed, output_root) for n in tile_counts for seed in config.seeds]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_sweep_job, tasks))
    else:
        results = [_sweep_job(task) for task in tasks]

    rows = []
    for n in tile_counts:
        losses = np.array([r["final_loss"] for r in results if r["num_tiles"] == n])
        accuracies = [r["final_accuracy"] for r in results
                      if r["num_tiles"] == n and r["final_accuracy"] is not None]
        rows.append({
            "num_tiles": n,
            "seeds": len(losses),
            "median_final_loss": float(np.median(losses)),
            "min_final_loss": float(np.min(losses)),
            "max_final_loss": float(np.max(losses)),
            "median_accuracy": float(np.median(accuracies)) if accuracies else None,
        })

    root = Path(output_root or config.output_dir) / config.name
    header = list(rows[0].keys())
    write_csv(root / "sweep.csv", header,
              [["" if row[k] is None else row[k] for k in header] for row in rows])
    return rows
