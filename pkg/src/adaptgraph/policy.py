"""Transition policies: which representation wins for which density range.

Policy files look like::

    /* EXECUTION TIME */
        DS1 [0,9)
        DS2 [9,100]
    /* MEMORY */
        DS1 [0,25)
        DS2 [25,100]
    /* THRESHOLD */
        MEMORY 100

``DS1`` is the adjacency list, ``DS2`` the adjacency matrix.  Ranges are
percent densities and must tile ``[0, 100]`` in order: every range but the
last is half-open, the last closes at 100.  The threshold is in megabytes;
below it the memory section decides regardless of the time section.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import PolicyParseError
from .graph import Repr

_DS_NAMES = {"DS1": Repr.LIST, "DS2": Repr.MATRIX}
_NAMES_DS = {v: k for k, v in _DS_NAMES.items()}

_TOKEN = re.compile(r"""
    (?P<comment>/\*.*?\*/)
  | (?P<word>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<number>-?(?:\d+(?:\.\d*)?|\.\d+))
  | (?P<punct>[\[\](),])
  | (?P<ws>\s+)
  | (?P<bad>.)
""", re.VERBOSE | re.DOTALL)


@dataclass(frozen=True)
class DensityRange:
    lo: float
    hi: float
    closed: bool
    repr: Repr

    def contains(self, percent: float) -> bool:
        return self.lo <= percent < self.hi or (self.closed and percent == self.hi)


@dataclass(frozen=True)
class TransitionPolicy:
    time_best: tuple[DensityRange, ...]
    mem_best: tuple[DensityRange, ...]
    memory_threshold_mb: float

    def time_choice(self, density_percent: float) -> Repr:
        return _lookup(self.time_best, density_percent)

    def memory_choice(self, density_percent: float) -> Repr:
        return _lookup(self.mem_best, density_percent)


def _lookup(ranges: tuple[DensityRange, ...], percent: float) -> Repr:
    for r in ranges:
        if r.contains(percent):
            return r.repr
    raise ValueError(f"density {percent}% outside [0, 100]")


def _tokens(text: str):
    line = 1
    for m in _TOKEN.finditer(text):
        kind = m.lastgroup
        value = m.group()
        if kind == "bad":
            raise PolicyParseError(f"unexpected character {value!r}", line)
        if kind != "ws":
            yield kind, value, line
        line += value.count("\n")


def _section_name(comment: str) -> str:
    return " ".join(comment[2:-2].split())


class _Parser:
    def __init__(self, text: str):
        self.toks = list(_tokens(text))
        self.pos = 0
        self.last_line = text.count("\n") + 1

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else (None, None, self.last_line)

    def take(self, kind: str, value: str | None = None, what: str = ""):
        k, v, line = self.peek()
        if k != kind or (value is not None and v != value):
            found = "end of input" if k is None else repr(v)
            raise PolicyParseError(f"expected {what or value or kind}, found {found}", line)
        self.pos += 1
        return v, line

    def header(self, name: str) -> None:
        k, v, line = self.peek()
        if k != "comment" or _section_name(v) != name:
            found = "end of input" if k is None else repr(v)
            raise PolicyParseError(f"missing /* {name} */ section (found {found})", line)
        self.pos += 1

    def number(self, what: str) -> tuple[float, int]:
        v, line = self.take("number", what=what)
        return float(v), line

    def ranges(self, section: str) -> tuple[DensityRange, ...]:
        out: list[tuple[DensityRange, int]] = []
        while self.peek()[0] == "word" and self.peek()[1] in _DS_NAMES:
            name, line = self.take("word")
            self.take("punct", "[")
            lo, _ = self.number("range start")
            self.take("punct", ",")
            hi, _ = self.number("range end")
            k, v, closer_line = self.peek()
            if k != "punct" or v not in (")", "]"):
                raise PolicyParseError("expected ')' or ']' closing the range", closer_line)
            self.pos += 1
            if lo < 0 or hi > 100:
                raise PolicyParseError(f"range [{lo:g},{hi:g}] outside 0..100", line)
            if lo >= hi:
                raise PolicyParseError(f"empty range [{lo:g},{hi:g}]", line)
            out.append((DensityRange(lo, hi, v == "]", _DS_NAMES[name]), line))
        if not out:
            raise PolicyParseError(f"{section} section has no DS1/DS2 ranges", self.peek()[2])
        _check_partition(out, section)
        return tuple(r for r, _ in out)


def _check_partition(ranges: list[tuple[DensityRange, int]], section: str) -> None:
    first, line = ranges[0]
    if first.lo != 0:
        raise PolicyParseError(f"{section}: ranges start at {first.lo:g}, not 0 (gap)", line)
    for (prev, prev_line), (cur, line) in zip(ranges, ranges[1:]):
        if prev.closed:
            raise PolicyParseError(f"{section}: only the final range may be closed with ']'", prev_line)
        if cur.lo > prev.hi:
            raise PolicyParseError(f"{section}: gap between {prev.hi:g} and {cur.lo:g}", line)
        if cur.lo < prev.hi:
            raise PolicyParseError(f"{section}: ranges overlap between {cur.lo:g} and {prev.hi:g}", line)
    last, line = ranges[-1]
    if last.hi != 100 or not last.closed:
        raise PolicyParseError(f"{section}: final range must end with '100]'", line)


def parse_policy(text: str) -> TransitionPolicy:
    p = _Parser(text)
    p.header("EXECUTION TIME")
    time_best = p.ranges("EXECUTION TIME")
    p.header("MEMORY")
    mem_best = p.ranges("MEMORY")
    p.header("THRESHOLD")
    p.take("word", "MEMORY")
    threshold, line = p.number("memory threshold")
    if threshold < 0:
        raise PolicyParseError("memory threshold must be non-negative", line)
    k, v, line = p.peek()
    if k is not None:
        raise PolicyParseError(f"unexpected {v!r} after threshold", line)
    return TransitionPolicy(time_best, mem_best, threshold)


def _fmt(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def format_policy(policy: TransitionPolicy) -> str:
    """Serialize back to the file grammar; ``parse_policy`` inverts it."""
    lines = ["/* EXECUTION TIME */"]
    for section, ranges in (("EXECUTION TIME", policy.time_best), ("MEMORY", policy.mem_best)):
        if section == "MEMORY":
            lines.append("/* MEMORY */")
        for r in ranges:
            lines.append(f"    {_NAMES_DS[r.repr]} [{_fmt(r.lo)},{_fmt(r.hi)}{']' if r.closed else ')'}")
    lines += ["/* THRESHOLD */", f"    MEMORY {_fmt(policy.memory_threshold_mb)}"]
    return "\n".join(lines) + "\n"


def load_policy(path: str | Path) -> TransitionPolicy:
    return parse_policy(Path(path).read_text())


def bundled_policy_path(kernel_id: str) -> Path:
    """Path of the shipped policy for ``kernel_id`` (density ranges from the characterization study)."""
    ref = resources.files("adaptgraph") / "policies" / f"{kernel_id}.policy"
    if not ref.is_file():
        raise FileNotFoundError(f"no bundled policy for kernel {kernel_id!r}")
    return Path(str(ref))


def bundled_policy(kernel_id: str) -> TransitionPolicy:
    return load_policy(bundled_policy_path(kernel_id))


def choose_representation(policy: TransitionPolicy, sample) -> Repr:
    """Memory-best below the threshold, otherwise time-best, for the sampled density."""
    if sample.available_memory_mb < policy.memory_threshold_mb:
        return policy.memory_choice(sample.density_percent)
    return policy.time_choice(sample.density_percent)
