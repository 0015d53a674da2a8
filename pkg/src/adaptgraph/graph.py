"""Two interchangeable graph representations and the migration between them.

A :class:`GraphRepr` always holds exactly one live store, either an
:class:`AdjacencyList` or an :class:`AdjacencyMatrix`, plus the
representation-independent :class:`InitializationParameters`.  Graphs are
directed, simple (no self-loops, no parallel arcs) and carry non-negative
finite weights.  Node ids are dense integers ``0 .. n-1``.

Memory is accounted logically rather than measured, using these per-entry
costs (bytes)::

    list   = LIST_HEADER_BYTES + n * LIST_NODE_BYTES + |E| * LIST_EDGE_BYTES
    matrix = MATRIX_HEADER_BYTES + live_rows * n * MATRIX_CELL_BYTES

``LIST_EDGE_BYTES`` models a heap-allocated list cell (4-byte target, 8-byte
weight, 8-byte next pointer, padded to 24, plus an 8-byte allocator header).
``MATRIX_CELL_BYTES`` is an 8-byte weight plus a 1-byte presence flag.  With
these constants the list/matrix break-even density is just under 28%.
"""

from __future__ import annotations

import bisect
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Iterator

import numpy as np

from .errors import GraphInputError, GraphStateError, MigrationError

LIST_HEADER_BYTES = 64
LIST_NODE_BYTES = 16
LIST_EDGE_BYTES = 32
MATRIX_HEADER_BYTES = 64
MATRIX_CELL_BYTES = 9


class Repr(str, Enum):
    LIST = "list"
    MATRIX = "matrix"

    @property
    def other(self) -> "Repr":
        return Repr.MATRIX if self is Repr.LIST else Repr.LIST

    @classmethod
    def parse(cls, value: "str | Repr") -> "Repr":
        if isinstance(value, Repr):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise GraphInputError(f"unknown representation {value!r}") from None


@dataclass
class InitializationParameters:
    """Data that is identical in both representations and survives migration."""

    num_nodes: int
    extras: dict[str, tuple[float, ...]] = field(default_factory=dict)


@dataclass(frozen=True)
class FootprintReport:
    logical_bytes: int
    timestamp_ms: float


@dataclass(frozen=True)
class MigrationStats:
    source: Repr
    target: Repr
    edges: int
    peak_bytes: int
    final_bytes: int
    seconds: float


class AdjacencyList:
    """Per-node out-lists, kept sorted by target id.

    ``targets[u]`` and ``weights[u]`` are parallel Python lists.
    """

    __slots__ = ("num_nodes", "targets", "weights", "num_edges")

    def __init__(self, num_nodes: int):
        self.num_nodes = num_nodes
        self.targets: list[list[int]] = [[] for _ in range(num_nodes)]
        self.weights: list[list[float]] = [[] for _ in range(num_nodes)]
        self.num_edges = 0

    def logical_bytes(self) -> int:
        return LIST_HEADER_BYTES + self.num_nodes * LIST_NODE_BYTES + self.num_edges * LIST_EDGE_BYTES

    def get(self, src: int, dst: int) -> float | None:
        row = self.targets[src]
        i = bisect.bisect_left(row, dst)
        if i < len(row) and row[i] == dst:
            return self.weights[src][i]
        return None

    def insert(self, src: int, dst: int, weight: float) -> None:
        row = self.targets[src]
        i = bisect.bisect_left(row, dst)
        if i < len(row) and row[i] == dst:
            raise GraphStateError(f"edge {src}->{dst} already present")
        row.insert(i, dst)
        self.weights[src].insert(i, weight)
        self.num_edges += 1

    def delete(self, src: int, dst: int) -> float:
        row = self.targets[src]
        i = bisect.bisect_left(row, dst)
        if i == len(row) or row[i] != dst:
            raise GraphStateError(f"edge {src}->{dst} not present")
        del row[i]
        self.num_edges -= 1
        return self.weights[src].pop(i)

    def fetch_node(self, u: int) -> tuple[list[int], list[float]]:
        return self.targets[u], self.weights[u]

    def delete_node_edges(self, u: int) -> None:
        self.num_edges -= len(self.targets[u])
        self.targets[u] = []
        self.weights[u] = []

    def set_node(self, u: int, targets: list[int], weights: list[float]) -> None:
        self.num_edges += len(targets) - len(self.targets[u])
        self.targets[u] = targets
        self.weights[u] = weights

    def take_node(self, u: int) -> tuple[list[int], list[float]]:
        """Fetch ``u``'s out-edges and release them from this store."""
        targets, weights = self.targets[u], self.weights[u]
        self.targets[u], self.weights[u] = [], []
        self.num_edges -= len(targets)
        return targets, weights

    def load_node(self, u: int, targets: list[int], weights: list[float]) -> None:
        """``set_node`` for a row known to be empty."""
        self.targets[u] = targets
        self.weights[u] = weights
        self.num_edges += len(targets)

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        degrees = np.fromiter((len(t) for t in self.targets), dtype=np.int64, count=self.num_nodes)
        src = np.repeat(np.arange(self.num_nodes, dtype=np.int64), degrees)
        dst = np.fromiter((v for t in self.targets for v in t), dtype=np.int64, count=self.num_edges)
        w = np.fromiter((x for ws in self.weights for x in ws), dtype=np.float64, count=self.num_edges)
        return src, dst, w


class AdjacencyMatrix:
    """Dense ``n x n`` grid with an explicit presence flag per cell.

    Weights are only meaningful where the presence flag is set, so a genuine
    weight-0 edge is representable.  ``live_rows`` only drops below ``n``
    while a matrix is being drained by a migration.
    """

    __slots__ = ("num_nodes", "present", "weights", "num_edges", "live_rows")

    def __init__(self, num_nodes: int):
        self.num_nodes = num_nodes
        self.present = np.zeros((num_nodes, num_nodes), dtype=bool)
        self.weights = np.zeros((num_nodes, num_nodes), dtype=np.float64)
        self.num_edges = 0
        self.live_rows = num_nodes

    def logical_bytes(self) -> int:
        return MATRIX_HEADER_BYTES + self.live_rows * self.num_nodes * MATRIX_CELL_BYTES

    def get(self, src: int, dst: int) -> float | None:
        if self.present[src, dst]:
            return float(self.weights[src, dst])
        return None

    def insert(self, src: int, dst: int, weight: float) -> None:
        if self.present[src, dst]:
            raise GraphStateError(f"edge {src}->{dst} already present")
        self.present[src, dst] = True
        self.weights[src, dst] = weight
        self.num_edges += 1

    def delete(self, src: int, dst: int) -> float:
        if not self.present[src, dst]:
            raise GraphStateError(f"edge {src}->{dst} not present")
        self.present[src, dst] = False
        w = float(self.weights[src, dst])
        self.weights[src, dst] = 0.0
        self.num_edges -= 1
        return w

    def fetch_node(self, u: int) -> tuple[list[int], list[float]]:
        cols = np.flatnonzero(self.present[u])
        return cols.tolist(), self.weights[u, cols].tolist()

    def delete_node_edges(self, u: int) -> None:
        self.num_edges -= int(np.count_nonzero(self.present[u]))
        self.present[u] = False
        self.weights[u] = 0.0

    def set_node(self, u: int, targets: list[int], weights: list[float]) -> None:
        self.num_edges -= int(np.count_nonzero(self.present[u]))
        self.present[u] = False
        self.weights[u] = 0.0
        if targets:
            self.present[u, targets] = True
            self.weights[u, targets] = weights
        self.num_edges += len(targets)

    def take_node(self, u: int) -> tuple[list[int], list[float]]:
        """Fetch row ``u`` and clear its presence flags.

        Weights of the cleared cells are left behind; they are unreachable
        without a presence flag and the row no longer counts as live.
        """
        row = self.present[u]
        cols = row.nonzero()[0]
        weights = self.weights[u][cols].tolist()
        row.fill(False)
        self.num_edges -= len(cols)
        return cols.tolist(), weights

    def load_node(self, u: int, targets: list[int], weights: list[float]) -> None:
        """``set_node`` for a row known to be empty."""
        if targets:
            self.present[u, targets] = True
            self.weights[u, targets] = weights
            self.num_edges += len(targets)

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        src, dst = np.nonzero(self.present)
        return src.astype(np.int64), dst.astype(np.int64), self.weights[src, dst]


Store = AdjacencyList | AdjacencyMatrix


def _new_store(kind: Repr, num_nodes: int) -> Store:
    return AdjacencyList(num_nodes) if kind is Repr.LIST else AdjacencyMatrix(num_nodes)


class GraphRepr:
    """A directed simple graph whose storage can be swapped at runtime."""

    __slots__ = ("store", "init_params", "last_migration")

    def __init__(self, store: Store, init_params: InitializationParameters | None = None):
        self.store = store
        self.init_params = init_params or InitializationParameters(store.num_nodes)
        self.last_migration: MigrationStats | None = None
        if self.init_params.num_nodes != store.num_nodes:
            raise GraphInputError("initialization parameters disagree with store size")

    @property
    def kind(self) -> Repr:
        return Repr.LIST if isinstance(self.store, AdjacencyList) else Repr.MATRIX

    @property
    def num_nodes(self) -> int:
        return self.store.num_nodes

    @property
    def num_edges(self) -> int:
        return self.store.num_edges

    def _check(self, *nodes: int) -> None:
        n = self.store.num_nodes
        for u in nodes:
            if not 0 <= u < n:
                raise GraphInputError(f"node id {u} out of range for {n} nodes")

    def has_edge(self, src: int, dst: int) -> float | None:
        """Weight of ``src -> dst`` or None when there is no such edge."""
        self._check(src, dst)
        if src == dst:
            return None
        return self.store.get(src, dst)

    def insert_edge(self, src: int, dst: int, weight: float = 1.0) -> "GraphRepr":
        self._check(src, dst)
        if src == dst:
            raise GraphInputError(f"self-loop on node {src}")
        self.store.insert(src, dst, _checked_weight(weight))
        return self

    def delete_edge(self, src: int, dst: int) -> "GraphRepr":
        self._check(src, dst)
        self.store.delete(src, dst)
        return self

    def traverse_edges(self) -> Iterator[tuple[int, int, float]]:
        """Yield every edge once, ascending by ``(src, dst)``."""
        store = self.store
        if isinstance(store, AdjacencyList):
            for u in range(store.num_nodes):
                for v, w in zip(store.targets[u], store.weights[u]):
                    yield u, v, w
        else:
            src, dst = np.nonzero(store.present)
            yield from zip(src.tolist(), dst.tolist(), store.weights[src, dst].tolist())

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Edges as ``(src, dst, weight)`` arrays in :meth:`traverse_edges` order."""
        return self.store.edge_arrays()

    def total_weight(self) -> float:
        return float(np.sum(self.edge_arrays()[2]))

    def __repr__(self) -> str:
        return f"GraphRepr({self.kind.value}, n={self.num_nodes}, m={self.num_edges})"


def _checked_weight(weight: float) -> float:
    w = float(weight)
    if not np.isfinite(w) or w < 0:
        raise GraphInputError(f"edge weight must be finite and non-negative, got {weight!r}")
    return w


def _as_arrays(edges) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if all(hasattr(edges, a) for a in ("src", "dst", "weight")):
        return (np.asarray(edges.src, dtype=np.int64), np.asarray(edges.dst, dtype=np.int64),
                np.asarray(edges.weight, dtype=np.float64))
    rows = list(edges)
    if not rows:
        return np.empty(0, np.int64), np.empty(0, np.int64), np.empty(0, np.float64)
    src, dst, w = zip(*rows)
    return np.asarray(src, dtype=np.int64), np.asarray(dst, dtype=np.int64), np.asarray(w, dtype=np.float64)


def build_from_edges(num_nodes: int, edges: Iterable[tuple[int, int, float]], target: Repr | str = Repr.LIST,
                     *, extras: dict[str, tuple[float, ...]] | None = None) -> GraphRepr:
    """Build a graph in the requested representation.

    ``edges`` is an iterable of ``(src, dst, weight)`` triples or any object
    with ``src``/``dst``/``weight`` arrays (such as :class:`~adaptgraph.workload.EdgeList`).
    Repeated ``(src, dst)`` pairs keep their first occurrence.
    """
    target = Repr.parse(target)
    if num_nodes < 0:
        raise GraphInputError("num_nodes must be non-negative")
    src, dst, w = _as_arrays(edges)
    bad = (src < 0) | (src >= num_nodes) | (dst < 0) | (dst >= num_nodes)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise GraphInputError(f"edge #{i} ({src[i]}, {dst[i]}) has an endpoint outside 0..{num_nodes - 1}")
    loops = src == dst
    if loops.any():
        i = int(np.flatnonzero(loops)[0])
        raise GraphInputError(f"edge #{i} is a self-loop on node {src[i]}")
    badw = ~np.isfinite(w) | (w < 0)
    if badw.any():
        i = int(np.flatnonzero(badw)[0])
        raise GraphInputError(f"edge #{i} has invalid weight {w[i]!r}")

    # np.unique returns sorted keys with the index of each key's first occurrence
    _, first = np.unique(src * max(num_nodes, 1) + dst, return_index=True)
    src, dst, w = src[first], dst[first], w[first]

    store = _new_store(target, num_nodes)
    if isinstance(store, AdjacencyList):
        bounds = np.cumsum(np.bincount(src, minlength=num_nodes))[:-1] if num_nodes else []
        store.targets = [part.tolist() for part in np.split(dst, bounds)] if num_nodes else []
        store.weights = [part.tolist() for part in np.split(w, bounds)] if num_nodes else []
    else:
        store.present[src, dst] = True
        store.weights[src, dst] = w
    store.num_edges = len(src)
    params = InitializationParameters(num_nodes, dict(extras or {}))
    return GraphRepr(store, params)


def density(g: GraphRepr) -> float:
    """``|E| / (|V| (|V| - 1))`` for the directed simple graph ``g``."""
    n = g.num_nodes
    if n < 2:
        raise GraphInputError("density needs at least two nodes")
    return g.num_edges / (n * (n - 1))


def footprint(g: GraphRepr, since: float | None = None) -> FootprintReport:
    """Logical byte count of the live store.

    ``since`` is a ``time.perf_counter()`` reading marking run start; the
    report's timestamp is 0 when it is omitted.
    """
    ts = 0.0 if since is None else (time.perf_counter() - since) * 1000.0
    return FootprintReport(g.store.logical_bytes(), ts)


def list_bytes(num_nodes: int, num_edges: int) -> int:
    return LIST_HEADER_BYTES + num_nodes * LIST_NODE_BYTES + num_edges * LIST_EDGE_BYTES


def matrix_bytes(num_nodes: int) -> int:
    return MATRIX_HEADER_BYTES + num_nodes * num_nodes * MATRIX_CELL_BYTES


def crossover_edges(num_nodes: int) -> float:
    """Edge count at which both representations have equal footprint."""
    n = num_nodes
    return (matrix_bytes(n) - LIST_HEADER_BYTES - n * LIST_NODE_BYTES) / LIST_EDGE_BYTES


def migrate(g: GraphRepr, target: Repr | str, *, on_node: Callable[[int, int], None] | None = None) -> GraphRepr:
    """Move ``g`` into the ``target`` representation in place and return it.

    Edges move one source node at a time: the node's edges are fetched,
    inserted into the new store, then released from the old one, so the old
    store shrinks as the new one fills.  ``on_node(u, live_bytes)`` is called
    after each node moves.

    Any exception during the transfer (including ``MemoryError`` from the
    initial allocation) is re-raised as :class:`MigrationError`.  ``g`` then
    still holds the source store with the transferred prefix removed; the
    partially filled target is attached to the error.
    """
    target = Repr.parse(target)
    started = time.perf_counter()
    source = g.store
    if g.kind is target:
        g.last_migration = MigrationStats(target, target, source.num_edges, source.logical_bytes(),
                                          source.logical_bytes(), 0.0)
        return g
    n = g.init_params.num_nodes
    edges = source.num_edges
    try:
        fresh = _new_store(target, n)
    except MemoryError as exc:
        raise MigrationError(f"could not allocate {target.value} store for {n} nodes",
                             nodes_transferred=0) from exc
    peak = source.logical_bytes() + fresh.logical_bytes()
    draining_matrix = isinstance(source, AdjacencyMatrix)
    moved = 0
    try:
        for u in range(n):
            targets, weights = source.take_node(u)
            try:
                fresh.load_node(u, targets, weights)
            except BaseException:
                source.set_node(u, targets, weights)
                raise
            if draining_matrix:
                source.live_rows -= 1
            moved += 1
            live = source.logical_bytes() + fresh.logical_bytes()
            peak = max(peak, live)
            if on_node is not None:
                on_node(u, live)
    except Exception as exc:
        raise MigrationError(f"migration to {target.value} failed after {moved} nodes: {exc}",
                             nodes_transferred=moved, partial=fresh) from exc
    g.store = fresh
    g.last_migration = MigrationStats(Repr.MATRIX if draining_matrix else Repr.LIST, target, edges,
                                      peak, fresh.logical_bytes(), time.perf_counter() - started)
    return g
