#!/usr/bin/env python3
"""
Analog Sim CLI - experiment runs, sweeps, cost tables and validators

Every command routes through the harness; library errors are shown as a
red panel and exit with code 2, failed validators or expectations with 3.
"""

import csv
import functools
import sys
from pathlib import Path

import click
from rich.align import Align
from rich.panel import Panel
from rich.text import Text

from .. import __version__
from ..core.exceptions import AnalogSimError
from ..core.logger import configure_logging, console
from ..hardware.costmodel import CostParams, cost_table
from ..harness import (
    ExperimentRunner,
    OutputRenderer,
    asymmetry_config,
    check_expectations,
    compare_asymmetry_floor,
    parse_tile_range,
    sweep as run_sweep,
    validate_pulse_moments,
)
from ..parsers.config_parser import load_config
from ..parsers.idx_parser import write_synthetic_mnist
from ..utils.file_utils import read_json, write_json

EXIT_ERROR = 2
EXIT_VALIDATION = 3

renderer = OutputRenderer(console)


def handle_errors(func):
    """Turn AnalogSimError into a red panel and exit code 2"""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except AnalogSimError as exc:
            renderer.error(str(exc), type(exc).__name__)
            sys.exit(EXIT_ERROR)

    return wrapper


def show_banner():
    banner = Panel.fit(
        Text.assemble(
            ("Analog Sim", "bold blue"),
            "\n",
            ("Gradient training on non-ideal analog crossbar tiles", "dim cyan"),
            "\n",
            (f"Version {__version__}", "dim white"),
        ),
        border_style="blue",
        padding=(1, 2),
    )
    console.print(Align.center(banner))


@click.group(invoke_without_command=True)
@click.option("-v", "--verbose", count=True, help="-v for INFO, -vv for DEBUG logging")
@click.version_option(__version__, prog_name="analog-sim")
@click.pass_context
def cli(ctx, verbose):
    """Analog Sim - train on simulated analog crossbar tiles"""
    if verbose:
        configure_logging("DEBUG" if verbose > 1 else "INFO")
    if ctx.invoked_subcommand is None:
        show_banner()
        click.echo(ctx.get_help())


@cli.command()
@click.argument("config_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--output-dir", "-o", type=click.Path(file_okay=False), help="Root directory for run artifacts")
@click.option("--seed", "seeds", type=int, multiple=True, help="Run these seeds instead of the configured ones")
@handle_errors
def run(config_path, output_dir, seeds):
    """Train one configuration for every seed and write metrics.csv / summary.json"""
    config = load_config(config_path)
    if seeds:
        config = config.with_seeds(seeds)
    console.print(f"[bold blue]Running {config.name}[/bold blue] ({len(config.seeds)} seed(s))")
    results = ExperimentRunner(output_dir).run(config)
    renderer.run_summaries([r.summary for r in results])
    for result in results:
        if result.out_dir is not None:
            console.print(f"[dim]{result.out_dir}[/dim]")

    if config.expect:
        failures = {r.summary["seed"]: check_expectations(r.summary, config.expect) for r in results}
        failures = {seed: msgs for seed, msgs in failures.items() if msgs}
        renderer.expectation_failures(failures)
        if failures:
            sys.exit(EXIT_VALIDATION)


@cli.command()
@click.argument("config_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--vary", default="tiles=1..8", show_default=True, help="Tile counts, e.g. tiles=1..8 or tiles=1,2,4")
@click.option("--jobs", "-j", type=click.IntRange(min=1), default=1, show_default=True, help="Worker processes")
@click.option("--output-dir", "-o", type=click.Path(file_okay=False), help="Root directory for run artifacts")
@handle_errors
def sweep(config_path, vary, jobs, output_dir):
    """Run a configuration across tile counts and seeds, writing sweep.csv"""
    config = load_config(config_path)
    counts = parse_tile_range(vary)
    console.print(f"[bold blue]Sweeping {config.name}[/bold blue] over tiles {counts} with {jobs} job(s)")
    rows = run_sweep(config, counts, jobs, output_dir)
    renderer.sweep_rows(rows, title=f"{config.name}: final loss by tile count")


@cli.command()
@click.option("--D", "D", type=int, default=512, show_default=True, help="Tile dimension")
@click.option("--B", "B", type=int, default=100, show_default=True, help="Mixed-precision batch size")
@click.option("--n-s", type=int, default=2, show_default=True, help="Transfer period")
@click.option("--l-avg", type=float, default=5.0, show_default=True, help="Average pulse count per update")
@click.option("--t-sp", type=float, default=5.0, show_default=True, help="Single pulse time [ns]")
@click.option("--t-m", type=float, default=40.0, show_default=True, help="Matrix-vector read time [ns]")
@click.option("--throughput", type=float, default=0.7e12, show_default=True, help="Digital FLOPS")
@click.option("--tiles-sharing", type=int, default=4, show_default=True, help="Tiles sharing one digital unit")
@click.option("--csv", "as_csv", is_flag=True, help="Print CSV instead of a table")
@handle_errors
def cost(D, B, n_s, l_avg, t_sp, t_m, throughput, tiles_sharing, as_csv):
    """Per-step latency and storage for each algorithm"""
    params = CostParams(D=D, B=B, n_s=n_s, l_avg=l_avg, t_sp=t_sp, t_M=t_m,
                        throughput=throughput, tiles_sharing=tiles_sharing)
    table = cost_table(params)
    if not as_csv:
        renderer.cost_table(table, params)
        return
    fields = ["storage_bytes", "memory_ops_bits", "fp_ops", "fp_ns", "analog_ns", "total_ns"]
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["algorithm"] + fields)
    for name, row in table.items():
        writer.writerow([name] + [row[f] for f in fields])


@cli.group()
def validate():
    """Statistical checks against closed-form results"""


@validate.command(name="pulse-moments")
@click.option("--alpha", type=float, default=0.1, show_default=True)
@click.option("--x", "x", type=float, default=1.0, show_default=True)
@click.option("--delta", type=float, default=1.0, show_default=True)
@click.option("--dw-min", type=float, default=0.5, show_default=True)
@click.option("--bl", type=click.IntRange(min=1), default=10, show_default=True)
@click.option("--trials", type=click.IntRange(min=1), default=100_000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--json", "json_path", type=click.Path(dir_okay=False), help="Also write the report as JSON")
@handle_errors
def pulse_moments(alpha, x, delta, dw_min, bl, trials, seed, json_path):
    """Single-cell pulse update moments against the closed form"""
    report = validate_pulse_moments(alpha, x, delta, dw_min, bl, trials, seed)
    renderer.pulse_moments_report(report.to_dict())
    if json_path:
        write_json(json_path, report.to_dict())
    if not report.passed:
        sys.exit(EXIT_VALIDATION)


validate.add_command(pulse_moments, name="lemma1")


@validate.command()
@click.option("--sigma", type=float, default=0.05, show_default=True)
@click.option("--dw-min", type=float, default=0.1, show_default=True)
@click.option("--w-star", "w_star_scale", type=float, default=0.8, show_default=True,
              help="Optimum as a fraction of tau_max")
@click.option("--steps", type=click.IntRange(min=10), default=5000, show_default=True)
@click.option("--seeds", type=int, default=3, show_default=True, help="Number of seeds")
@click.option("--json", "json_path", type=click.Path(dir_okay=False), help="Also write the report as JSON")
@handle_errors
def asymmetry(sigma, dw_min, w_star_scale, steps, seeds, json_path):
    """Analog SGD floor against digital SGD on the two-point-noise quadratic"""
    config = asymmetry_config(sigma=sigma, dw_min=dw_min, w_star_scale=w_star_scale, steps=steps,
                              seeds=range(seeds))
    report = compare_asymmetry_floor(config)
    renderer.asymmetry_report(report.to_dict())
    if json_path:
        write_json(json_path, report.to_dict())
    if not report.passed:
        sys.exit(EXIT_VALIDATION)


@cli.command()
@click.argument("checkpoint_path", type=click.Path(exists=True, dir_okay=False))
@handle_errors
def inspect(checkpoint_path):
    """Show the tiles stored in a checkpoint.json"""
    renderer.checkpoint(read_json(checkpoint_path), checkpoint_path)


@cli.command(name="make-fixtures")
@click.argument("out_dir", type=click.Path(file_okay=False))
@click.option("--train", type=click.IntRange(min=1), default=256, show_default=True)
@click.option("--test", type=click.IntRange(min=1), default=64, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@handle_errors
def make_fixtures(out_dir, train, test, seed):
    """Write synthetic MNIST-shaped IDX files"""
    written = write_synthetic_mnist(Path(out_dir), train, test, seed)
    for path in written.values():
        console.print(f"[green]wrote[/green] {path}")


if __name__ == "__main__":
    cli()
