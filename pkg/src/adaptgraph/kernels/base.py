"""Step-wise kernel protocol and representation-neutral result sets.

Every kernel is an ``init / step / result`` machine.  ``step`` runs exactly
one outer iteration and returns; the boundary between two steps is a safe
point where the graph may be migrated and the computation resumed against
the other representation.
"""

from __future__ import annotations

import math
import struct
import zlib
from dataclasses import dataclass, field
from typing import Any, ClassVar

import numpy as np

from ..graph import GraphRepr


@dataclass
class Progress:
    completed: int
    total: int

    @property
    def percent(self) -> float:
        if self.total == 0:
            return 100.0
        return 100.0 * self.completed / self.total

    @property
    def finished(self) -> bool:
        return self.completed >= self.total


@dataclass
class KernelState:
    """Progress plus kernel scratch.

    Scratch only holds arrays and plain Python values indexed by node id, so
    the same state can be resumed against either representation and pickled
    for inspection.
    """

    kernel_id: str
    progress: Progress
    scratch: dict[str, Any] = field(default_factory=dict)

    @property
    def finished(self) -> bool:
        return self.progress.finished


class ResultSet:
    """Base for kernel outputs; ``canonical()`` feeds :func:`result_digest`."""

    kind: ClassVar[str] = ""

    def canonical(self) -> bytes:
        raise NotImplementedError


def _float_bytes(a: np.ndarray) -> bytes:
    a = np.ascontiguousarray(a, dtype="<f8")
    # collapse -0.0 onto 0.0
    return (a + 0.0).tobytes()


@dataclass(eq=False)
class Distances(ResultSet):
    """``dist[s, v]``; ``inf`` marks unreachable pairs."""

    dist: np.ndarray
    kind: ClassVar[str] = "distances"

    def canonical(self) -> bytes:
        return struct.pack("<q", self.dist.shape[0]) + _float_bytes(self.dist)

    def __eq__(self, other):
        return isinstance(other, Distances) and np.array_equal(self.dist, other.dist)


@dataclass(eq=False)
class Centrality(ResultSet):
    scores: np.ndarray
    kind: ClassVar[str] = "centrality"

    def canonical(self) -> bytes:
        return struct.pack("<q", len(self.scores)) + _float_bytes(self.scores)

    def __eq__(self, other):
        return isinstance(other, Centrality) and np.array_equal(self.scores, other.scores)


def level_hash(levels: np.ndarray) -> int:
    """CRC-32 of the per-node hop levels (``-1`` = unreachable) as int32."""
    return zlib.crc32(np.ascontiguousarray(levels, dtype="<i4").tobytes())


@dataclass(eq=False)
class Levels(ResultSet):
    """Per-root BFS digest.

    For root ``r``: ``reachable[r]`` nodes reached (root included), the sum
    and maximum of their hop levels, and :func:`level_hash` of the full level
    vector.  The full ``V x V`` level table is not kept.
    """

    reachable: np.ndarray
    level_sum: np.ndarray
    max_level: np.ndarray
    level_hash: np.ndarray
    kind: ClassVar[str] = "levels"

    def canonical(self) -> bytes:
        parts = [struct.pack("<q", len(self.reachable))]
        for a in (self.reachable, self.level_sum, self.max_level, self.level_hash):
            parts.append(np.ascontiguousarray(a, dtype="<i8").tobytes())
        return b"".join(parts)

    def __eq__(self, other):
        return isinstance(other, Levels) and all(
            np.array_equal(getattr(self, k), getattr(other, k))
            for k in ("reachable", "level_sum", "max_level", "level_hash"))


@dataclass(eq=False)
class Tree(ResultSet):
    """Spanning forest; edges stored as sorted ``(min, max, weight)`` triples."""

    edges: list[tuple[int, int, float]]
    total_weight: float
    kind: ClassVar[str] = "tree"

    @classmethod
    def from_edges(cls, edges) -> "Tree":
        norm = sorted((min(u, v), max(u, v), float(w)) for u, v, w in edges)
        return cls(norm, math.fsum(w for _, _, w in norm))

    def canonical(self) -> bytes:
        parts = [struct.pack("<q", len(self.edges))]
        parts += [struct.pack("<qqd", u, v, w + 0.0) for u, v, w in self.edges]
        parts.append(struct.pack("<d", self.total_weight + 0.0))
        return b"".join(parts)

    def __eq__(self, other):
        return isinstance(other, Tree) and self.edges == other.edges and self.total_weight == other.total_weight


@dataclass(eq=False)
class Flows(ResultSet):
    """Max-flow value from each source to the fixed ``sink``."""

    values: np.ndarray
    sink: int
    kind: ClassVar[str] = "flows"

    def canonical(self) -> bytes:
        return struct.pack("<qq", len(self.values), self.sink) + _float_bytes(self.values)

    def __eq__(self, other):
        return isinstance(other, Flows) and self.sink == other.sink and np.array_equal(self.values, other.values)


def result_digest(rs: ResultSet) -> str:
    """Hex CRC-32 over ``kind`` and the canonical little-endian serialization."""
    payload = rs.kind.encode() + b"\0" + rs.canonical()
    return f"{zlib.crc32(payload):08x}"


class Kernel:
    """Base class.  Subclasses implement ``init``, ``_step`` and ``result``."""

    kernel_id: ClassVar[str] = ""

    def init(self, g: GraphRepr) -> KernelState:
        raise NotImplementedError

    def step(self, state: KernelState, g: GraphRepr) -> KernelState:
        """Run one outer iteration against whichever store ``g`` holds now."""
        if state.finished:
            raise RuntimeError(f"{self.kernel_id}: step called on a finished state")
        self._step(state, g)
        state.progress.completed += 1
        return state

    def _step(self, state: KernelState, g: GraphRepr) -> None:
        raise NotImplementedError

    def result(self, state: KernelState) -> ResultSet:
        raise NotImplementedError

    def result_migrate(self, state: KernelState) -> KernelState:
        # partial results are already representation-neutral
        return state

    def run(self, g: GraphRepr) -> ResultSet:
        state = self.init(g)
        while not state.finished:
            self.step(state, g)
        return self.result(state)
