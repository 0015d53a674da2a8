"""Shrink available memory mid-run and watch a dense graph fall back to a list.

Run: python demos/system_trigger.py
"""

from __future__ import annotations

from adaptgraph import MemoryBudget, bundled_policy
from adaptgraph.harness import execute
from adaptgraph.runtime import EventKind
from adaptgraph.workload import GenSpec, generate


def main() -> None:
    edges = generate(GenSpec(150, 15.0, "uniform", seed=3))
    policy = bundled_policy("bfs")
    # plenty of memory at first, so the time-best matrix is kept until the budget drops
    run = execute("bfs", edges, "adaptive", policy=policy, schedule=["40:mem=50"],
                  memory=MemoryBudget(available_mb=4096))
    checks = sum(ev.kind is EventKind.SAFE_POINT_CHECK for ev in run.events)
    print(f"{checks} safe-point checks; the other events:")
    for ev in run.events:
        if ev.kind is EventKind.SAFE_POINT_CHECK:
            continue
        print(f"{ev.timestamp_ms:9.2f} ms {ev.progress_percent:6.1f}%  {ev.kind.value:<15}"
              f" {ev.repr_before.value}->{ev.repr_after.value}  {ev.footprint_bytes} B {ev.detail}")
    print(f"final representation: {run.final_repr.value}")


if __name__ == "__main__":
    main()
