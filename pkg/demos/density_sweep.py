"""Time both fixed representations and the adaptive runtime across densities.

Run: python demos/density_sweep.py
"""

from __future__ import annotations

import sys

from adaptgraph.harness import sweep, sweep_csv


def main() -> None:
    rows = sweep("bfs", densities=[1, 5, 10, 20, 40], sizes=[200], repeat=3)
    sys.stdout.write(sweep_csv(rows))


if __name__ == "__main__":
    main()
