"""Adaptive execution: monitors, change requests and the safe-point dispatch loop.

:func:`run_adaptive` alternates kernel steps with safe-point checks.  After
each step it applies any due scheduled triggers, samples the input (density)
and memory monitors, asks the policy which representation it wants and, on a
mismatch, raises a :class:`ChangeRequest`.  The compute path picks the
request up before the next step, migrates the graph and resumes from the same
progress point.  Everything runs synchronously on the calling thread unless a
:class:`PollingMonitor` interval is given, in which case a background thread
may raise requests early; they are still only honoured between steps.
"""

from __future__ import annotations

import logging
import threading
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, NamedTuple, Sequence

from .errors import AdaptationAborted, GraphInputError, LogError, MigrationError
from .graph import GraphRepr, Repr, migrate
from .kernels.base import Kernel, ResultSet
from .policy import TransitionPolicy, choose_representation

log = logging.getLogger(__name__)


class EventKind(str, Enum):
    TRIGGER_FIRED = "TriggerFired"
    MIGRATION_START = "MigrationStart"
    MIGRATION_END = "MigrationEnd"
    SAFE_POINT_CHECK = "SafePointCheck"


class AdaptationEvent(NamedTuple):
    kind: EventKind
    timestamp_ms: float
    progress_percent: float
    repr_before: Repr
    repr_after: Repr
    footprint_bytes: int
    detail: str = ""


class TraceSample(NamedTuple):
    timestamp_ms: float
    footprint_bytes: int
    repr: Repr
    progress_percent: float
    event: str = ""


class _MonitorFields(NamedTuple):
    density_percent: float
    available_memory_mb: float
    progress_percent: float
    timestamp_ms: float


class MonitorSample(_MonitorFields):
    __slots__ = ()

    def __new__(cls, density_percent: float, available_memory_mb: float, progress_percent: float,
                timestamp_ms: float):
        if min(density_percent, available_memory_mb, progress_percent, timestamp_ms) < 0:
            raise GraphInputError("monitor sample fields must be non-negative")
        if density_percent > 100:
            raise GraphInputError("density percent above 100")
        return super().__new__(cls, density_percent, available_memory_mb, progress_percent, timestamp_ms)


# ---- triggers ---------------------------------------------------------------

@dataclass(frozen=True)
class ForceRepr:
    target: Repr

    def __str__(self) -> str:
        return self.target.value


@dataclass(frozen=True)
class ForceSwitch:
    """Pin whichever representation is not live when the trigger fires."""

    def __str__(self) -> str:
        return "switch"


@dataclass(frozen=True)
class SetAvailableMemory:
    megabytes: float

    def __str__(self) -> str:
        return f"mem={self.megabytes:g}"


Action = ForceRepr | ForceSwitch | SetAvailableMemory


@dataclass(frozen=True)
class Trigger:
    progress_percent: float
    action: Action

    def __str__(self) -> str:
        return f"{self.progress_percent:g}:{self.action}"


def parse_action(text: str) -> Action:
    t = text.strip().lower()
    if t in ("list", "matrix"):
        return ForceRepr(Repr(t))
    if t == "switch":
        return ForceSwitch()
    if t.startswith("mem="):
        try:
            mb = float(t[4:])
        except ValueError:
            raise GraphInputError(f"bad memory amount in {text!r}") from None
        if mb < 0:
            raise GraphInputError("memory amount must be non-negative")
        return SetAvailableMemory(mb)
    raise GraphInputError(f"unknown trigger action {text!r} (list, matrix, switch, mem=MB)")


def parse_trigger(text: str) -> Trigger:
    """Parse ``P:ACTION``, e.g. ``25:mem=50`` or ``50:switch``."""
    pct, sep, action = text.partition(":")
    if not sep:
        raise GraphInputError(f"trigger {text!r} is not of the form P:ACTION")
    try:
        p = float(pct)
    except ValueError:
        raise GraphInputError(f"bad progress point in trigger {text!r}") from None
    return Trigger(p, parse_action(action))


class TriggerSchedule:
    """Scheduled actions keyed by strictly increasing progress points in (0, 100)."""

    def __init__(self, triggers: Iterable[Trigger | str] = ()):
        items = [parse_trigger(t) if isinstance(t, str) else t for t in triggers]
        prev = 0.0
        for t in items:
            if not 0 < t.progress_percent < 100:
                raise GraphInputError(f"trigger point {t.progress_percent:g}% outside (0, 100)")
            if t.progress_percent <= prev and t is not items[0]:
                raise GraphInputError("trigger points must be strictly increasing")
            prev = t.progress_percent
        self.triggers: tuple[Trigger, ...] = tuple(items)

    def __iter__(self):
        return iter(self.triggers)

    def __len__(self) -> int:
        return len(self.triggers)

    def __repr__(self) -> str:
        return f"TriggerSchedule([{', '.join(map(str, self.triggers))}])"


# ---- memory providers -------------------------------------------------------

class MemoryBudget:
    """Harness-controlled available-memory figure, in megabytes."""

    def __init__(self, available_mb: float = 8192.0):
        self._mb = float(available_mb)
        self._lock = threading.Lock()

    def available_mb(self) -> float:
        with self._lock:
            return self._mb

    def set(self, megabytes: float) -> None:
        with self._lock:
            self._mb = float(megabytes)


class SystemMemory:
    """Best-effort OS probe of available memory (needs ``psutil``)."""

    def available_mb(self) -> float:
        import psutil

        return psutil.virtual_memory().available / 2**20


# ---- change request flag ----------------------------------------------------

class ChangeRequest:
    """Shared flag between monitors (writers) and the compute path (reader).

    ``set`` is refused while a request is pending or a migration is running.
    Requests raised off the compute path start unacknowledged: the compute
    path acknowledges (and logs) them at the next safe point, and ``take``
    only hands out acknowledged requests.  ``take`` clears the flag and marks
    a migration as in progress until ``end_migration``.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._target: Repr | None = None
        self._acked = False
        self._set_at_ms = 0.0
        self._cause = ""
        self._migrating = False

    @property
    def pending(self) -> bool:
        with self._lock:
            return self._target is not None

    @property
    def migrating(self) -> bool:
        with self._lock:
            return self._migrating

    def set(self, target: Repr, *, at_ms: float = 0.0, cause: str = "", acknowledged: bool = False) -> bool:
        with self._lock:
            if self._migrating or self._target is not None:
                return False
            self._target, self._acked = target, acknowledged
            self._set_at_ms, self._cause = at_ms, cause
            return True

    def acknowledge(self) -> tuple[Repr, float, str] | None:
        """Return ``(target, set_at_ms, cause)`` of a pending unacknowledged request."""
        if self._target is None:
            # unlocked fast path; a request raised right now is seen at the next safe point
            return None
        with self._lock:
            if self._target is None or self._acked:
                return None
            self._acked = True
            return self._target, self._set_at_ms, self._cause

    def take(self) -> Repr | None:
        if self._target is None:
            return None
        with self._lock:
            if self._target is None or not self._acked:
                return None
            target, self._target = self._target, None
            self._migrating = True
            return target

    def drop(self) -> Repr | None:
        """Discard any pending request without migrating."""
        with self._lock:
            target, self._target = self._target, None
            return target

    def end_migration(self) -> None:
        with self._lock:
            self._migrating = False


class _EventLog:
    """Append-only log written by the compute path only."""

    def __init__(self, t0: float):
        self.t0 = t0
        self.events: list[AdaptationEvent] = []

    def now_ms(self) -> float:
        return (time.perf_counter() - self.t0) * 1000.0

    def add(self, kind: EventKind, progress: float, before: Repr, after: Repr, nbytes: int,
            detail: str = "", at_ms: float | None = None) -> AdaptationEvent:
        t = self.now_ms() if at_ms is None else at_ms
        if self.events and t < self.events[-1].timestamp_ms:
            # a monitor-thread timestamp can predate the last compute-path event
            t = self.events[-1].timestamp_ms
        ev = AdaptationEvent(kind, t, progress, before, after, nbytes, detail)
        self.events.append(ev)
        return ev


@dataclass
class _Snapshot:
    density_percent: float
    progress_percent: float
    repr: Repr
    pinned: bool = False


class PollingMonitor(threading.Thread):
    """Timer-driven monitor that may raise a change request between safe points.

    It only reads the snapshot published by the compute path at the last safe
    point, never the graph itself.
    """

    def __init__(self, policy: TransitionPolicy, request: ChangeRequest, memory, snapshot: _Snapshot,
                 clock_ms, interval_s: float):
        super().__init__(daemon=True, name="adaptgraph-monitor")
        self.policy, self.request, self.memory = policy, request, memory
        self.snapshot, self.clock_ms, self.interval_s = snapshot, clock_ms, interval_s
        self.deferred: list[tuple[float, Repr]] = []
        self._halt = threading.Event()

    def run(self) -> None:
        while not self._halt.wait(self.interval_s):
            snap = self.snapshot
            if snap.pinned:
                continue
            sample = MonitorSample(snap.density_percent, self.memory.available_mb(),
                                   snap.progress_percent, self.clock_ms())
            want = choose_representation(self.policy, sample)
            if want is snap.repr:
                continue
            if self.request.migrating:
                self.deferred.append((sample.timestamp_ms, want))
                continue
            self.request.set(want, at_ms=sample.timestamp_ms, cause="monitor")

    def stop(self) -> None:
        self._halt.set()
        self.join()


# ---- run records ------------------------------------------------------------

class StepTiming(NamedTuple):
    index: int
    repr: Repr
    seconds: float


class MigrationTiming(NamedTuple):
    source: Repr
    target: Repr
    progress_percent: float
    seconds: float
    peak_bytes: int


@dataclass
class KernelRun:
    """Everything recorded about one kernel execution."""

    kernel_id: str
    mode: str
    start_repr: Repr
    final_repr: Repr
    result: ResultSet
    total_seconds: float
    init_seconds: float
    steps: list[StepTiming]
    check_seconds: list[float] = field(default_factory=list)
    migrations: list[MigrationTiming] = field(default_factory=list)
    events: list[AdaptationEvent] = field(default_factory=list)
    trace: list[TraceSample] = field(default_factory=list)
    unfired: tuple[Trigger, ...] = ()
    deferred: list[tuple[float, Repr]] = field(default_factory=list)

    @property
    def step_seconds(self) -> float:
        return sum(s.seconds for s in self.steps)

    @property
    def monitoring_seconds(self) -> float:
        return sum(self.check_seconds)

    @property
    def migration_seconds(self) -> float:
        return sum(m.seconds for m in self.migrations)

    @property
    def peak_bytes(self) -> int:
        peaks = [t.footprint_bytes for t in self.trace] + [m.peak_bytes for m in self.migrations]
        return max(peaks) if peaks else 0


def _density_percent(g: GraphRepr) -> float:
    n = g.num_nodes
    return 0.0 if n < 2 else 100.0 * g.num_edges / (n * (n - 1))


def run_fixed(kernel: Kernel, g: GraphRepr) -> KernelRun:
    """Run ``kernel`` to completion on whatever representation ``g`` holds."""
    clock = time.perf_counter
    t0 = clock()
    state = kernel.init(g)
    init_s = clock() - t0
    kind = g.kind
    nbytes = g.store.logical_bytes()
    trace = [TraceSample(0.0, nbytes, kind, 0.0, "start")]
    steps = []
    i = 0
    while not state.finished:
        ts = clock()
        kernel.step(state, g)
        te = clock()
        steps.append(StepTiming(i, kind, te - ts))
        trace.append(TraceSample((te - t0) * 1000.0, nbytes, kind, state.progress.percent))
        i += 1
    result = kernel.result(state)
    total = clock() - t0
    return KernelRun(kernel.kernel_id, kind.value, kind, kind, result, total, init_s, steps, trace=trace)


def run_adaptive(kernel: Kernel, g: GraphRepr, policy: TransitionPolicy,
                 schedule: TriggerSchedule | Sequence[Trigger | str] = (), *, memory=None,
                 request: ChangeRequest | None = None, monitor_interval_s: float | None = None) -> KernelRun:
    """Run ``kernel`` while adapting ``g``'s representation at safe points.

    A scheduled :class:`ForceRepr` or :class:`ForceSwitch` pins the
    representation from that point on (later pins replace earlier ones);
    :class:`SetAvailableMemory` changes the memory budget the policy sees.
    Without a pin the policy decides at every safe point.

    Raises :class:`AdaptationAborted` if a migration fails.
    """
    if not isinstance(schedule, TriggerSchedule):
        schedule = TriggerSchedule(schedule)
    memory = memory if memory is not None else MemoryBudget()
    flag = request if request is not None else ChangeRequest()
    clock = time.perf_counter
    t0 = clock()
    events = _EventLog(t0)
    start_repr = g.kind

    state = kernel.init(g)
    init_s = clock() - t0
    trace = [TraceSample(events.now_ms(), g.store.logical_bytes(), g.kind, 0.0, "start")]
    pending = list(schedule)
    pin: Repr | None = None
    snapshot = _Snapshot(_density_percent(g), 0.0, g.kind)
    poller = None
    if monitor_interval_s is not None:
        poller = PollingMonitor(policy, flag, memory, snapshot, events.now_ms, monitor_interval_s)
        poller.start()

    steps: list[StepTiming] = []
    checks: list[float] = []
    migrations: list[MigrationTiming] = []
    available_mb = memory.available_mb
    threshold = policy.memory_threshold_mb
    store = g.store
    kind = g.kind
    tc = tx = tl = 0.0
    try:
        while not state.finished:
            target = flag.take()
            moved = 0.0
            if target is not None:
                migrations.append(_switch(kernel, state, g, target, flag, events, trace))
                store, kind = g.store, g.kind
                snapshot.repr = kind
                moved = migrations[-1].seconds

            ts = clock()
            if steps:
                # time between two steps, minus the migration and the step/trace
                # bookkeeping that fixed runs perform as well
                checks.append((tx - tc) + (ts - tl - moved))
            kernel.step(state, g)
            te = clock()
            steps.append(StepTiming(len(steps), kind, te - ts))
            if state.finished:
                break

            tc = clock()
            pct = state.progress.percent
            nbytes = store.logical_bytes()
            early = flag.acknowledge()
            if early is not None and early[0] is kind:
                # stale: the monitor saw the pre-migration snapshot
                flag.drop()
                early = None
            if early is not None:
                events.add(EventKind.TRIGGER_FIRED, pct, kind, early[0], nbytes, early[2], at_ms=early[1])
            detail = ""
            if pending and pending[0].progress_percent <= pct:
                fired = []
                while pending and pending[0].progress_percent <= pct:
                    trig = pending.pop(0)
                    action = trig.action
                    if isinstance(action, ForceRepr):
                        pin = action.target
                    elif isinstance(action, ForceSwitch):
                        pin = kind.other
                    else:
                        memory.set(action.megabytes)
                    fired.append(str(trig))
                detail = ",".join(fired)
            dens = _density_percent(g)
            sample = MonitorSample(dens, available_mb(), pct, events.now_ms())
            want = pin if pin is not None else choose_representation(policy, sample)
            mark = "trigger" if early is not None else ""
            if want is not kind and not flag.pending:
                cause = "schedule" if pin is not None else (
                    "system" if sample.available_memory_mb < threshold else "input")
                at = events.now_ms()
                if flag.set(want, at_ms=at, cause=cause, acknowledged=True):
                    events.add(EventKind.TRIGGER_FIRED, pct, kind, want, nbytes, cause, at_ms=at)
                    mark = "trigger"
            events.add(EventKind.SAFE_POINT_CHECK, pct, kind, kind, nbytes, detail, at_ms=sample.timestamp_ms)
            snapshot.density_percent, snapshot.progress_percent, snapshot.pinned = dens, pct, pin is not None
            tx = clock()
            trace.append(TraceSample(sample.timestamp_ms, nbytes, kind, pct, mark))
            tl = clock()
    finally:
        if poller is not None:
            poller.stop()

    deferred = poller.deferred if poller else []
    dropped = flag.drop()
    if dropped is not None:
        # raised by the monitor during the final step; no safe point is left to serve it
        deferred.append((events.now_ms(), dropped))
    result = kernel.result(state)
    total = clock() - t0
    trace.append(TraceSample(events.now_ms(), g.store.logical_bytes(), g.kind, state.progress.percent, "end"))
    return KernelRun(kernel.kernel_id, "adaptive", start_repr, g.kind, result, total, init_s, steps, checks,
                     migrations, events.events, trace, tuple(pending), deferred)


def _switch(kernel: Kernel, state, g: GraphRepr, target: Repr, flag: ChangeRequest, events: _EventLog,
            trace: list[TraceSample]) -> MigrationTiming:
    pct = state.progress.percent
    before = g.kind
    try:
        ev = events.add(EventKind.MIGRATION_START, pct, before, target, g.store.logical_bytes())
        trace.append(TraceSample(ev.timestamp_ms, ev.footprint_bytes, before, pct, "migration_start"))
        t = time.perf_counter()
        try:
            migrate(g, target)
        except MigrationError as exc:
            raise AdaptationAborted(f"{kernel.kernel_id}: migration {before.value}->{target.value} failed at "
                                    f"{pct:.1f}% progress", progress_percent=pct, events=events.events,
                                    cause=exc) from exc
        kernel.result_migrate(state)
        seconds = time.perf_counter() - t
    finally:
        flag.end_migration()
    ev = events.add(EventKind.MIGRATION_END, pct, before, g.kind, g.store.logical_bytes())
    trace.append(TraceSample(ev.timestamp_ms, ev.footprint_bytes, g.kind, pct, "migration_end"))
    log.debug("%s: %s -> %s at %.1f%% in %.2f ms", kernel.kernel_id, before.value, target.value, pct,
              seconds * 1000)
    return MigrationTiming(before, g.kind, pct, seconds, g.last_migration.peak_bytes)


# ---- metrics ----------------------------------------------------------------

def transition_latency(events: Sequence[AdaptationEvent]) -> list[float]:
    """Milliseconds from each migration's trigger to its completion."""
    out: list[float] = []
    trigger: AdaptationEvent | None = None
    started = False
    for ev in events:
        if ev.kind is EventKind.TRIGGER_FIRED:
            if trigger is not None or started:
                raise LogError(f"trigger at {ev.timestamp_ms:.3f} ms while another is unresolved")
            trigger = ev
        elif ev.kind is EventKind.MIGRATION_START:
            if trigger is None or started:
                raise LogError(f"migration start at {ev.timestamp_ms:.3f} ms without a pending trigger")
            started = True
        elif ev.kind is EventKind.MIGRATION_END:
            if not started:
                raise LogError(f"migration end at {ev.timestamp_ms:.3f} ms without a start")
            out.append(ev.timestamp_ms - trigger.timestamp_ms)
            trigger, started = None, False
    if trigger is not None or started:
        raise LogError("log ends with an unfinished transition")
    return out


def realized_benefit(t_better: float, t_worse: float, t_adaptive: float) -> float:
    """Share (percent) of the fixed-representation gap the adaptive run recovers."""
    if t_worse <= t_better:
        raise GraphInputError("t_worse must exceed t_better")
    return 100.0 * (t_worse - t_adaptive) / (t_worse - t_better)
