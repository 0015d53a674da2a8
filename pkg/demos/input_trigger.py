"""Start a sparse MSSP run on the matrix and let the runtime move it to a list.

Reports realized benefit, transition latency and the overhead breakdown
against the two fixed representations.

Run: python demos/input_trigger.py
"""

from __future__ import annotations

import statistics

from adaptgraph import Repr, realized_benefit, transition_latency
from adaptgraph.harness import execute, median_breakdown, paired_gap, report_overheads
from adaptgraph.workload import GenSpec, generate

PAIRS = 31


def main() -> None:
    edges = generate(GenSpec(120, 2.5, "unit", seed=1))
    matrix = [execute("mssp", edges, "matrix") for _ in range(5)]
    lists, adaptive = [], []
    for i in range(PAIRS):
        # alternate order so machine-speed drift does not favour one mode
        if i % 2:
            adaptive.append(execute("mssp", edges, "adaptive", start=Repr.MATRIX))
            lists.append(execute("mssp", edges, "list"))
        else:
            lists.append(execute("mssp", edges, "list"))
            adaptive.append(execute("mssp", edges, "adaptive", start=Repr.MATRIX))

    t_list = statistics.median(r.total_seconds for r in lists)
    t_matrix = statistics.median(r.total_seconds for r in matrix)
    t_adapt = statistics.median(r.total_seconds for r in adaptive)
    print(f"list {t_list * 1e3:.1f} ms  matrix {t_matrix * 1e3:.1f} ms  adaptive {t_adapt * 1e3:.1f} ms")
    print(f"realized benefit {realized_benefit(t_list, t_matrix, t_adapt):.1f}%")

    run = sorted(adaptive, key=lambda r: r.total_seconds)[PAIRS // 2]
    for ms in transition_latency(run.events):
        print(f"transition latency {ms:.2f} ms ({100 * ms / (run.total_seconds * 1e3):.2f}% of the run)")
    before, after = run.trace[0].footprint_bytes, run.trace[-1].footprint_bytes
    print(f"footprint {before} -> {after} bytes, final repr {run.final_repr.value}")

    parts = median_breakdown(report_overheads(adaptive, lists))
    for key, value in parts.as_dict().items():
        print(f"  {key:<40} {value:8.3f}")
    print(f"components sum {parts.total * 1e3:.3f} ms, paired gap {paired_gap(adaptive, lists) * 1e3:.3f} ms")


if __name__ == "__main__":
    main()
