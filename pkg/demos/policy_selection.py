"""Parse a transition policy and see which representation it picks.

Run: python demos/policy_selection.py
"""

from __future__ import annotations

from adaptgraph import choose_representation, parse_policy
from adaptgraph.policy import format_policy
from adaptgraph.runtime import MonitorSample

POLICY = """\
/* EXECUTION TIME */
    DS1 [0,9)
    DS2 [9,100]
/*MEMORY*/
    DS1 [0,25)
    DS2 [25,100]
/*THRESHOLD*/
    MEMORY 100
"""


def main() -> None:
    policy = parse_policy(POLICY)
    print(format_policy(policy))
    print(f"{'density %':>10} {'free MB':>8}  choice")
    for pct in (2, 15, 40):
        for free_mb in (50, 500):
            sample = MonitorSample(pct, free_mb, progress_percent=0, timestamp_ms=0)
            print(f"{pct:>10} {free_mb:>8}  {choose_representation(policy, sample).value}")


if __name__ == "__main__":
    main()
