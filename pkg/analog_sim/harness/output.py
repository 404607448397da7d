#!/usr/bin/env python3
"""
Output - rich rendering of run summaries, sweeps, cost tables and reports
"""

import math
from typing import Any, List, Mapping, Optional, Sequence

from rich.console import Console
from rich.markup import escape
from rich.panel import Panel
from rich.table import Table
from rich.tree import Tree

from ..core.algorithm_config import ALGORITHM_DISPLAY_NAMES
from ..core.logger import console as shared_console
from ..hardware.costmodel import CostParams


def _fmt(value: Any, digits: int = 4) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        if math.isnan(value) or math.isinf(value):
            return str(value)
        return f"{value:.{digits}g}"
    return str(value)


class OutputRenderer:
    """Prints harness results on the shared console"""

    def __init__(self, console: Optional[Console] = None):
        self.console = console or shared_console

    def error(self, message: str, title: str = "Error") -> None:
        self.console.print(Panel(f"[red]{escape(message)}[/red]", title=f"[red]{title}[/red]", border_style="red"))

    # ---- runs ------------------------------------------------------------

    def run_summaries(self, summaries: Sequence[Mapping[str, Any]]) -> None:
        if not summaries:
            return
        first = summaries[0]
        algo = ALGORITHM_DISPLAY_NAMES.get(first["algorithm"], first["algorithm"])
        table = Table(title=f"{first['name']} - {algo}", border_style="cyan")
        table.add_column("Seed", justify="right")
        table.add_column("Tiles", justify="right")
        table.add_column("Steps", justify="right")
        table.add_column("Final loss", justify="right", style="green")
        table.add_column("Floor", justify="right")
        table.add_column("S_T", justify="right")
        table.add_column("R_T", justify="right")
        table.add_column("Pulses", justify="right", style="dim")
        with_accuracy = any(s.get("final_accuracy") is not None for s in summaries)
        if with_accuracy:
            table.add_column("Accuracy", justify="right", style="green")
        for s in summaries:
            row = [str(s["seed"]), str(s["num_tiles"]), str(s["steps"]), _fmt(s["final_loss"]),
                   _fmt(s.get("floor_estimate")), _fmt(s.get("S_T")), _fmt(s.get("R_T")),
                   str(s.get("pulses", "-"))]
            if with_accuracy:
                row.append(_fmt(s.get("final_accuracy")))
            table.add_row(*row)
        self.console.print(table)

    def expectation_failures(self, failures: Mapping[int, List[str]]) -> None:
        lines = [f"seed {seed}: {msg}" for seed, msgs in failures.items() for msg in msgs]
        if lines:
            self.error("\n".join(lines), "Expectations not met")
        else:
            self.console.print("[green]All expectations met[/green]")

    def sweep_rows(self, rows: Sequence[Mapping[str, Any]], title: str = "Tile sweep") -> None:
        table = Table(title=title, border_style="cyan")
        table.add_column("Tiles", justify="right")
        table.add_column("Seeds", justify="right")
        table.add_column("Median final loss", justify="right", style="green")
        table.add_column("Min", justify="right")
        table.add_column("Max", justify="right")
        show_accuracy = any(r.get("median_accuracy") is not None for r in rows)
        if show_accuracy:
            table.add_column("Median accuracy", justify="right")
        for r in rows:
            cells = [str(r["num_tiles"]), str(r["seeds"]), _fmt(r["median_final_loss"]),
                     _fmt(r["min_final_loss"]), _fmt(r["max_final_loss"])]
            if show_accuracy:
                cells.append(_fmt(r.get("median_accuracy")))
            table.add_row(*cells)
        self.console.print(table)

    # ---- cost model ------------------------------------------------------

    def cost_table(self, table: Mapping[str, Mapping[str, float]], params: CostParams) -> None:
        out = Table(
            title=f"Per-step cost (D={params.D}, B={params.B}, n_s={params.n_s}, l={params.l_avg})",
            border_style="magenta",
        )
        out.add_column("Algorithm")
        out.add_column("Storage [B]", justify="right")
        out.add_column("Memory ops [bit]", justify="right")
        out.add_column("FP ops", justify="right")
        out.add_column("Digital [ns]", justify="right")
        out.add_column("Analog [ns]", justify="right")
        out.add_column("Latency [ns]", justify="right", style="green")
        for name, row in table.items():
            out.add_row(ALGORITHM_DISPLAY_NAMES.get(name, name), f"{row['storage_bytes']:,}",
                        f"{row['memory_ops_bits']:.4g}", f"{row['fp_ops']:.4g}",
                        f"{row['fp_ns']:.2f}", f"{row['analog_ns']:.2f}", f"{row['total_ns']:.2f}")
        self.console.print(out)

    # ---- validators ------------------------------------------------------

    def pulse_moments_report(self, report: Mapping[str, Any]) -> None:
        status = "[green]PASS[/green]" if report["passed"] else "[red]FAIL[/red]"
        table = Table(show_header=True, border_style="cyan")
        table.add_column("Moment")
        table.add_column("Empirical", justify="right")
        table.add_column("Closed form", justify="right")
        table.add_column("Deviation", justify="right")
        table.add_row("mean", _fmt(report["empirical_mean"], 6), _fmt(report["oracle_mean"], 6),
                      f"z = {report['z_mean']:.2f}")
        table.add_row("variance", _fmt(report["empirical_var"], 6), _fmt(report["oracle_var"], 6),
                      f"{100 * report['var_rel_error']:.2f}%")
        title = (f"Single-cell update: alpha={report['alpha']:g}, x={report['x']:g}, "
                 f"delta={report['delta']:g}, dw_min={report['dw_min']:g}, BL={report['bl']}, "
                 f"{report['trials']:,} trials")
        self.console.print(Panel(table, title=title, subtitle=status, border_style="cyan"))

    def asymmetry_report(self, report: Mapping[str, Any]) -> None:
        table = Table(title="Asymmetry floor", border_style="cyan")
        table.add_column("Quantity")
        table.add_column("Value", justify="right")
        for key in ("analog_floor", "digital_floor", "ratio", "S_T", "predicted_shape", "shape_ratio"):
            table.add_row(key, _fmt(report[key]))
        table.caption = "[green]PASS[/green]" if report["passed"] else "[red]FAIL[/red]"
        self.console.print(table)

    # ---- checkpoints -----------------------------------------------------

    def checkpoint(self, data: Mapping[str, Any], source: str) -> None:
        tree = Tree(f"[bold]{source}[/bold] (config {data.get('config_hash', '?')})")
        for layer in data.get("layers", []):
            algo = ALGORITHM_DISPLAY_NAMES.get(layer["algorithm"], layer["algorithm"])
            node = tree.add(f"layer {layer['layer']}: {algo}, {layer['steps_taken']} steps")
            schedule = layer.get("schedule")
            if schedule:
                node.add(f"t={schedule['t_global']} transfer_every={schedule['transfer_every']} "
                         f"counters={schedule['counters']}")
            for index, tile in enumerate(layer["tiles"]):
                weights = tile["weights"]
                linf = max((abs(w) for w in weights), default=0.0)
                node.add(f"tile {index}: shape {tuple(tile['shape'])}, |w|_inf={linf:.4g}, "
                         f"cursor {tile['transfer_cursor']}, {tile['pulse_count']} pulses, "
                         f"device {tile['device_hash']}")
        self.console.print(tree)
