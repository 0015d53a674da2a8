"""Benchmark harness: configured runs, baselines, overhead breakdown, sweeps.

Timed runs execute with the cyclic garbage collector paused (after a full
collection) so a collection pause does not land inside a measurement; graph
construction is never timed.
"""

from __future__ import annotations

import csv
import gc
import io
import statistics
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ConfigError, GraphInputError
from .graph import Repr, build_from_edges
from .kernels import KERNELS, UNDIRECTED_KERNELS, get_kernel, result_digest
from .policy import TransitionPolicy, bundled_policy, load_policy
from .runtime import (KernelRun, TraceSample, TriggerSchedule, realized_benefit, run_adaptive, run_fixed,
                      transition_latency)
from .workload import EdgeList, GenSpec, densify, generate, load_snap, symmetrize

MODES = ("list", "matrix", "adaptive")
TRACE_COLUMNS = ("t_ms", "bytes", "repr", "progress_pct", "event")
SWEEP_COLUMNS = ("kernel", "n", "density_pct", "mode", "time_ms", "peak_bytes", "migrations", "digest")


@dataclass
class RunConfig:
    """One benchmark scenario.

    Exactly one of ``input_path`` and ``gen`` names the graph.  Adaptive runs
    use ``policy_path`` when given and the kernel's bundled policy otherwise;
    fixed modes take neither a policy nor a schedule.
    """

    kernel_id: str
    input_path: Path | None = None
    gen: GenSpec | None = None
    densify_percent: float | None = None
    mode: str = "adaptive"
    policy_path: Path | None = None
    schedule: tuple[str, ...] = ()
    start_repr: Repr = Repr.MATRIX
    repeat: int = 1
    out_dir: Path | None = None
    seed: int = 0
    baselines: bool = False
    kernel_options: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.kernel_id not in KERNELS:
            raise ConfigError(f"unknown kernel {self.kernel_id!r}; choose from {sorted(KERNELS)}")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, not {self.mode!r}")
        if (self.input_path is None) == (self.gen is None):
            raise ConfigError("give exactly one of an input file or a generator spec")
        if self.input_path is not None and not Path(self.input_path).is_file():
            raise ConfigError(f"input file {self.input_path} not found")
        if self.policy_path is not None and not Path(self.policy_path).is_file():
            raise ConfigError(f"policy file {self.policy_path} not found")
        if self.mode != "adaptive":
            if self.schedule:
                raise ConfigError("trigger schedules are only valid in adaptive mode")
            if self.policy_path is not None:
                raise ConfigError("a policy is only used in adaptive mode")
            if self.baselines:
                raise ConfigError("baselines are only run alongside adaptive mode")
        if self.repeat < 1:
            raise ConfigError("repeat must be at least 1")
        try:
            TriggerSchedule(self.schedule)
        except GraphInputError as exc:
            raise ConfigError(str(exc)) from None

    def policy(self) -> TransitionPolicy:
        return load_policy(self.policy_path) if self.policy_path else bundled_policy(self.kernel_id)


# ---- overhead breakdown -----------------------------------------------------

@dataclass(frozen=True)
class OverheadBreakdown:
    """Extra time of an adaptive run over the better fixed run, by cause (seconds)."""

    ds_conversion: float
    monitoring_and_transition_logic: float
    suboptimal_mode: float
    adaptive_total: float

    @property
    def total(self) -> float:
        return self.ds_conversion + self.monitoring_and_transition_logic + self.suboptimal_mode

    def percent(self, seconds: float) -> float:
        return 100.0 * seconds / self.adaptive_total if self.adaptive_total > 0 else 0.0

    def as_dict(self) -> dict[str, float]:
        out = {}
        for name in ("ds_conversion", "monitoring_and_transition_logic", "suboptimal_mode"):
            s = getattr(self, name)
            out[f"{name}_ms"] = s * 1000.0
            out[f"{name}_pct"] = self.percent(s)
        return out


def _baseline_steps(baseline: KernelRun | Sequence[KernelRun]) -> tuple[Repr, list[float]]:
    runs = [baseline] if isinstance(baseline, KernelRun) else list(baseline or ())
    if not runs:
        raise GraphInputError("report_overhead needs a fixed-mode baseline run")
    kinds = {r.start_repr for r in runs}
    if len(kinds) != 1 or any(r.mode == "adaptive" for r in runs):
        raise GraphInputError("baseline runs must all be fixed runs in one representation")
    counts = {len(r.steps) for r in runs}
    if len(counts) != 1:
        raise GraphInputError("baseline runs disagree on the number of steps")
    per_step = [statistics.median(r.steps[i].seconds for r in runs) for i in range(counts.pop())]
    return kinds.pop(), per_step


def report_overhead(adaptive: KernelRun, baseline: KernelRun | Sequence[KernelRun] | None) -> OverheadBreakdown:
    """Split ``adaptive``'s extra time over the fixed ``baseline``.

    The baseline's representation is taken as the preferred one.  Steps the
    adaptive run spent elsewhere count as suboptimal, in excess of the
    baseline's time for the same steps (the per-step median when several
    baseline runs are given).  A negative excess, possible only through
    timing noise, is reported as 0.
    """
    return _breakdown(adaptive, *_baseline_steps(baseline))


def report_overheads(adaptive: Sequence[KernelRun], baseline: KernelRun | Sequence[KernelRun]
                     ) -> list[OverheadBreakdown]:
    """:func:`report_overhead` for many adaptive runs against one shared baseline."""
    preferred, per_step = _baseline_steps(baseline)
    return [_breakdown(a, preferred, per_step) for a in adaptive]


def _breakdown(adaptive: KernelRun, preferred: Repr, per_step: list[float]) -> OverheadBreakdown:
    if len(per_step) != len(adaptive.steps):
        raise GraphInputError(f"baseline has {len(per_step)} steps, adaptive run {len(adaptive.steps)}")
    excess = sum(s.seconds - per_step[s.index] for s in adaptive.steps if s.repr is not preferred)
    return OverheadBreakdown(adaptive.migration_seconds, adaptive.monitoring_seconds, max(0.0, excess),
                             adaptive.total_seconds)


def paired_gap(adaptive: Sequence[KernelRun], baseline: Sequence[KernelRun]) -> float:
    """Median over repeats of (adaptive total - baseline total) for runs executed back to back.

    Pairing cancels slow drift in machine speed that unpaired medians pick up.
    """
    if not adaptive or len(adaptive) != len(baseline):
        raise GraphInputError("paired_gap needs equally many adaptive and baseline runs")
    return statistics.median(a.total_seconds - b.total_seconds for a, b in zip(adaptive, baseline))


def median_breakdown(parts: Sequence[OverheadBreakdown]) -> OverheadBreakdown:
    med = statistics.median
    return OverheadBreakdown(med(p.ds_conversion for p in parts),
                             med(p.monitoring_and_transition_logic for p in parts),
                             med(p.suboptimal_mode for p in parts), med(p.adaptive_total for p in parts))


# ---- running ------------------------------------------------------------------

@contextmanager
def _quiet_gc():
    was = gc.isenabled()
    # young generations only: a full pass would rescan every run kept so far
    gc.collect(1)
    gc.disable()
    try:
        yield
    finally:
        if was:
            gc.enable()


def prepare_input(config: RunConfig) -> EdgeList:
    """Load or generate the configured graph; MST kernels get a symmetric copy."""
    edges = load_snap(config.input_path) if config.input_path is not None else generate(config.gen)
    if config.densify_percent is not None:
        edges = densify(edges, config.densify_percent, config.seed)
    if config.kernel_id in UNDIRECTED_KERNELS:
        edges = symmetrize(edges)
    return edges


def execute(kernel_id: str, edges: EdgeList, mode: str, *, policy: TransitionPolicy | None = None,
            schedule: Sequence[str] = (), start: Repr = Repr.MATRIX, kernel_options: dict | None = None,
            memory=None) -> KernelRun:
    """Build a fresh graph and time one run of ``kernel_id`` in ``mode``."""
    options = kernel_options or {}
    if mode == "adaptive":
        g = build_from_edges(edges.num_nodes, edges, start)
        policy = policy if policy is not None else bundled_policy(kernel_id)
        with _quiet_gc():
            return run_adaptive(get_kernel(kernel_id, **options), g, policy, schedule, memory=memory)
    g = build_from_edges(edges.num_nodes, edges, Repr.parse(mode))
    with _quiet_gc():
        return run_fixed(get_kernel(kernel_id, **options), g)


@dataclass
class SummaryReport:
    kernel_id: str
    mode: str
    source: str
    num_nodes: int
    num_edges: int
    density_percent: float
    repeat: int
    total_ms: float
    totals_ms: list[float]
    start_repr: Repr
    final_repr: Repr
    migrations: int
    latencies_ms: list[float]
    peak_bytes: int
    result_digest: str
    trace: list[TraceSample]
    list_ms: float | None = None
    matrix_ms: float | None = None
    realized_benefit_percent: float | None = None
    overhead: OverheadBreakdown | None = None
    gap_ms: float | None = None
    unfired: tuple[str, ...] = ()
    deferred: int = 0
    runs: list[KernelRun] = field(default_factory=list, repr=False)

    def as_dict(self) -> dict[str, object]:
        d: dict[str, object] = {
            "kernel": self.kernel_id, "mode": self.mode, "input": self.source, "nodes": self.num_nodes,
            "edges": self.num_edges, "density_pct": round(self.density_percent, 6), "repeat": self.repeat,
            "total_ms": round(self.total_ms, 3), "start_repr": self.start_repr.value,
            "final_repr": self.final_repr.value, "migrations": self.migrations,
            "latencies_ms": ";".join(f"{x:.3f}" for x in self.latencies_ms),
            "peak_bytes": self.peak_bytes, "result_digest": self.result_digest,
        }
        if self.list_ms is not None:
            d["list_ms"] = round(self.list_ms, 3)
            d["matrix_ms"] = round(self.matrix_ms, 3)
        if self.realized_benefit_percent is not None:
            d["realized_benefit_pct"] = round(self.realized_benefit_percent, 3)
        if self.gap_ms is not None:
            d["gap_ms"] = round(self.gap_ms, 3)
        if self.overhead is not None:
            d.update({k: round(v, 4) for k, v in self.overhead.as_dict().items()})
        if self.unfired:
            d["unfired_triggers"] = ";".join(self.unfired)
        if self.deferred:
            d["deferred_requests"] = self.deferred
        return d

    def key_values(self) -> str:
        return "".join(f"{k}={v}\n" for k, v in self.as_dict().items())

    def table(self) -> str:
        d = self.as_dict()
        width = max(map(len, d))
        return "\n".join(f"{k:<{width}}  {v}" for k, v in d.items()) + "\n"


def trace_csv(trace: Iterable[TraceSample]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRACE_COLUMNS)
    for t in trace:
        w.writerow((f"{t.timestamp_ms:.3f}", t.footprint_bytes, t.repr.value, f"{t.progress_percent:.3f}", t.event))
    return buf.getvalue()


def _median_run(runs: Sequence[KernelRun]) -> KernelRun:
    order = sorted(range(len(runs)), key=lambda i: runs[i].total_seconds)
    return runs[order[(len(order) - 1) // 2]]


def run(config: RunConfig) -> SummaryReport:
    """Execute ``config`` ``repeat`` times and summarise the median run.

    With ``baselines`` each repeat runs both fixed modes around the measured
    run (FixedList first on even repeats, FixedMatrix first on odd), which adds realized benefit, the paired gap to the better
    fixed mode and the overhead breakdown to the report.  Output files
    (``trace.csv``, ``summary.txt``) go to ``out_dir`` when set.
    """
    config.validate()
    edges = prepare_input(config)
    policy = config.policy() if config.mode == "adaptive" else None
    schedule = tuple(config.schedule)
    fixed: dict[Repr, list[KernelRun]] = {Repr.LIST: [], Repr.MATRIX: []}
    runs: list[KernelRun] = []

    def one(mode: str) -> KernelRun:
        return execute(config.kernel_id, edges, mode, policy=policy, schedule=schedule,
                       start=config.start_repr, kernel_options=config.kernel_options)

    for i in range(config.repeat):
        # alternate which baseline precedes the measured run so order effects cancel
        first, last = (Repr.LIST, Repr.MATRIX) if i % 2 == 0 else (Repr.MATRIX, Repr.LIST)
        if config.baselines:
            fixed[first].append(one(first.value))
        runs.append(one(config.mode))
        if config.baselines:
            fixed[last].append(one(last.value))

    digests = {result_digest(r.result) for r in runs + fixed[Repr.LIST] + fixed[Repr.MATRIX]}
    if len(digests) != 1:
        raise RuntimeError(f"result digests differ across runs: {sorted(digests)}")
    chosen = _median_run(runs)
    totals = [r.total_seconds * 1000.0 for r in runs]
    report = SummaryReport(
        config.kernel_id, config.mode, edges.source, edges.num_nodes, edges.num_edges, edges.density_percent,
        config.repeat, statistics.median(totals), totals, chosen.start_repr, chosen.final_repr,
        len(chosen.migrations), transition_latency(chosen.events), chosen.peak_bytes, digests.pop(),
        chosen.trace, unfired=tuple(map(str, chosen.unfired)), deferred=len(chosen.deferred), runs=runs)

    if config.baselines:
        t_list = statistics.median(r.total_seconds for r in fixed[Repr.LIST])
        t_matrix = statistics.median(r.total_seconds for r in fixed[Repr.MATRIX])
        better = Repr.LIST if t_list <= t_matrix else Repr.MATRIX
        t_better, t_worse = sorted((t_list, t_matrix))
        report.list_ms, report.matrix_ms = t_list * 1000.0, t_matrix * 1000.0
        if t_worse > t_better:
            report.realized_benefit_percent = realized_benefit(t_better, t_worse, statistics.median(
                r.total_seconds for r in runs))
        report.gap_ms = paired_gap(runs, fixed[better]) * 1000.0
        report.overhead = median_breakdown(report_overheads(runs, fixed[better]))

    if config.out_dir is not None:
        write_outputs(report, Path(config.out_dir))
    return report


def write_outputs(report: SummaryReport, out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "trace.csv").write_text(trace_csv(report.trace))
    (out_dir / "summary.txt").write_text(report.key_values())


# ---- sweeps -------------------------------------------------------------------

@dataclass(frozen=True)
class SweepRow:
    kernel: str
    n: int
    density_pct: float
    mode: str
    time_ms: float
    peak_bytes: int
    migrations: int
    digest: str


def sweep(kernel_id: str, densities: Sequence[float], sizes: Sequence[int], modes: Sequence[str] = MODES, *,
          seed: int = 0, weight_mode: str = "uniform", repeat: int = 1, policy_path: Path | None = None,
          start: Repr = Repr.MATRIX, warmup: int = 1) -> list[SweepRow]:
    """One row per (size, density, mode): median time, peak footprint, migrations, digest.

    Each point first runs every mode ``warmup`` times untimed.
    """
    if not densities or not sizes or not modes:
        raise ConfigError("sweep needs at least one density, size and mode")
    if warmup < 0:
        raise ConfigError("warmup must be non-negative")
    rows = []
    for n in sizes:
        for d in densities:
            configs = {m: RunConfig(kernel_id, gen=GenSpec(n, d, weight_mode, seed), mode=m,
                                    policy_path=policy_path if m == "adaptive" else None, start_repr=start,
                                    seed=seed) for m in modes}
            for _ in range(warmup):
                for cfg in configs.values():
                    run(cfg)
            # modes interleave within each repeat so slow drift hits them alike
            reports: dict[str, list[SummaryReport]] = {m: [] for m in modes}
            for _ in range(repeat):
                for mode in modes:
                    reports[mode].append(run(configs[mode]))
            for mode in modes:
                reps = sorted(reports[mode], key=lambda r: r.total_ms)
                rep = reps[(len(reps) - 1) // 2]
                rows.append(SweepRow(kernel_id, n, d, mode, statistics.median(r.total_ms for r in reps),
                                     rep.peak_bytes, rep.migrations, rep.result_digest))
    return rows


def sweep_csv(rows: Iterable[SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for r in rows:
        w.writerow((r.kernel, r.n, f"{r.density_pct:g}", r.mode, f"{r.time_ms:.3f}", r.peak_bytes, r.migrations,
                    r.digest))
    return buf.getvalue()


__all__ = [
    "MODES", "OverheadBreakdown", "RunConfig", "SummaryReport", "SweepRow", "execute", "median_breakdown",
    "paired_gap", "prepare_input", "report_overhead", "report_overheads", "run", "sweep", "sweep_csv",
    "trace_csv", "write_outputs",
]
