#!/usr/bin/env python3
"""
Analog Sim - main entry point (python -m analog_sim.main)
"""

import sys

from analog_sim.cli.commands import cli
from analog_sim.core.logger import console


def main():
    try:
        cli()
    except KeyboardInterrupt:
        console.print("\n[yellow]Interrupted[/yellow]")
        sys.exit(130)
    except Exception as e:
        console.print(f"[red]An error occurred: {e}[/red]")
        sys.exit(1)


if __name__ == "__main__":
    main()
