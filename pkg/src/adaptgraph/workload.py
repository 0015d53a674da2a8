"""Graph inputs: SNAP edge-list files, seeded random digraphs, densification.

Every producer returns an :class:`EdgeList` that :func:`build_from_edges`
accepts directly: ids are dense ``0..n-1``, there are no self-loops and no
repeated ordered pairs.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import EdgeListParseError, GraphInputError

WEIGHT_MODES = ("unit", "uniform")
UNIFORM_WEIGHT_RANGE = (1, 10)
SNAP_DIR_ENV = "ADAPTGRAPH_SNAP_DIR"


@dataclass
class EdgeList:
    """Edges as parallel arrays plus what loading had to discard."""

    num_nodes: int
    src: np.ndarray
    dst: np.ndarray
    weight: np.ndarray
    id_map: np.ndarray | None = None
    dropped_duplicates: int = 0
    dropped_self_loops: int = 0
    source: str = ""
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        self.src = np.asarray(self.src, dtype=np.int64)
        self.dst = np.asarray(self.dst, dtype=np.int64)
        self.weight = np.asarray(self.weight, dtype=np.float64)
        if not len(self.src) == len(self.dst) == len(self.weight):
            raise GraphInputError("src, dst and weight must have equal length")

    @property
    def num_edges(self) -> int:
        return len(self.src)

    @property
    def density_percent(self) -> float:
        n = self.num_nodes
        return 0.0 if n < 2 else 100.0 * self.num_edges / (n * (n - 1))

    def __len__(self) -> int:
        return self.num_edges

    def __iter__(self):
        return zip(self.src.tolist(), self.dst.tolist(), self.weight.tolist())

    def codes(self) -> np.ndarray:
        return encode_pairs(self.num_nodes, self.src, self.dst)


# ---- ordered-pair codes -----------------------------------------------------
# A non-loop ordered pair (u, v) of an n-node digraph maps to a unique
# integer in [0, n(n-1)): row u, column v with the diagonal squeezed out.

def encode_pairs(n: int, src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    return src * (n - 1) + np.where(dst < src, dst, dst - 1)


def decode_pairs(n: int, codes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    codes = np.asarray(codes, dtype=np.int64)
    src, col = np.divmod(codes, n - 1)
    return src, np.where(col < src, col, col + 1)


def target_edge_count(num_nodes: int, density_percent: float) -> int:
    pairs = num_nodes * (num_nodes - 1)
    return round(density_percent / 100.0 * pairs)


# ---- SNAP files -------------------------------------------------------------

def load_snap(path: str | Path, *, weight: float = 1.0) -> EdgeList:
    """Parse a SNAP edge list (``#`` comments, one ``src dst`` pair per line).

    Node ids are compacted to ``0..n-1`` in order of first appearance (the
    original ids are kept in ``id_map``).  Self-loops and repeated pairs are
    dropped and counted.  All edges get ``weight``.
    """
    path = Path(path)
    ids: dict[int, int] = {}
    src: list[int] = []
    dst: list[int] = []
    loops = 0
    with path.open() as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            parts = text.split()
            if len(parts) != 2:
                raise EdgeListParseError(f"expected 'src dst', got {text!r}", lineno)
            try:
                a, b = int(parts[0]), int(parts[1])
            except ValueError:
                raise EdgeListParseError(f"non-integer node id in {text!r}", lineno) from None
            if a < 0 or b < 0:
                raise EdgeListParseError(f"negative node id in {text!r}", lineno)
            u = ids.setdefault(a, len(ids))
            v = ids.setdefault(b, len(ids))
            if u == v:
                loops += 1
                continue
            src.append(u)
            dst.append(v)
    if not ids:
        raise GraphInputError(f"{path}: no edges found")
    n = len(ids)
    s = np.array(src, dtype=np.int64)
    d = np.array(dst, dtype=np.int64)
    if n > 1 and len(s):
        _, first = np.unique(encode_pairs(n, s, d), return_index=True)
        first.sort()
        dups = len(s) - len(first)
        s, d = s[first], d[first]
    else:
        dups = 0
    return EdgeList(n, s, d, np.full(len(s), float(weight)), np.fromiter(ids, dtype=np.int64, count=n),
                    dups, loops, str(path))


def bundled_sample_path(name: str = "sample-snap.txt") -> Path:
    """A small SNAP-format file shipped with the package."""
    ref = resources.files("adaptgraph") / "data" / name
    if not ref.is_file():
        raise FileNotFoundError(f"no bundled sample {name!r}")
    return Path(str(ref))


def snap_path(filename: str) -> Path | None:
    """Locate a downloaded SNAP file in ``$ADAPTGRAPH_SNAP_DIR``; None if absent."""
    root = os.environ.get(SNAP_DIR_ENV)
    if not root:
        return None
    p = Path(root) / filename
    return p if p.is_file() else None


# ---- generation -------------------------------------------------------------

@dataclass(frozen=True)
class GenSpec:
    num_nodes: int
    target_density_percent: float
    weight_mode: str = "unit"
    seed: int = 0

    def __post_init__(self):
        if self.num_nodes < 0:
            raise GraphInputError("num_nodes must be non-negative")
        if not 0 <= self.target_density_percent <= 100 or math.isnan(self.target_density_percent):
            raise GraphInputError(f"density {self.target_density_percent}% outside [0, 100]")
        if self.weight_mode not in WEIGHT_MODES:
            raise GraphInputError(f"weight mode must be one of {WEIGHT_MODES}")

    @property
    def num_edges(self) -> int:
        return target_edge_count(self.num_nodes, self.target_density_percent)


def _weights(mode: str, count: int, rng: np.random.Generator) -> np.ndarray:
    if mode == "unit":
        return np.ones(count)
    lo, hi = UNIFORM_WEIGHT_RANGE
    return rng.integers(lo, hi + 1, size=count).astype(np.float64)


def generate(spec: GenSpec) -> EdgeList:
    """Uniform random digraph with exactly ``spec.num_edges`` distinct arcs, sorted by (src, dst)."""
    n, m = spec.num_nodes, spec.num_edges
    pairs = n * (n - 1)
    if m > pairs:
        raise GraphInputError(f"{m} edges requested but only {pairs} ordered pairs exist")
    rng = np.random.default_rng(spec.seed)
    codes = np.sort(rng.choice(pairs, size=m, replace=False)) if m else np.zeros(0, dtype=np.int64)
    src, dst = decode_pairs(n, codes) if n > 1 else (codes, codes)
    return EdgeList(n, src, dst, _weights(spec.weight_mode, m, rng),
                    source=f"gen:n={n},density={spec.target_density_percent:g},seed={spec.seed}")


def densify(graph: EdgeList, target_density_percent: float, seed: int = 0) -> EdgeList:
    """Add uniformly chosen absent arcs (weight 1) until the target density is met.

    The original arcs come first, unchanged; new arcs follow in code order.
    """
    n = graph.num_nodes
    if not 0 <= target_density_percent <= 100:
        raise GraphInputError(f"density {target_density_percent}% outside [0, 100]")
    want = target_edge_count(n, target_density_percent)
    have = graph.num_edges
    if want < have:
        raise GraphInputError(f"target density {target_density_percent:g}% is below the current "
                              f"{graph.density_percent:.4g}%")
    extra = want - have
    if extra == 0:
        return graph
    taken = np.sort(graph.codes())
    free = n * (n - 1) - have
    rng = np.random.default_rng(seed)
    k = np.sort(rng.choice(free, size=extra, replace=False))
    # the k-th absent code is k plus the number of taken codes at or below it
    codes = k + np.searchsorted(taken - np.arange(have), k, side="right")
    s, d = decode_pairs(n, codes)
    return EdgeList(n, np.concatenate((graph.src, s)), np.concatenate((graph.dst, d)),
                    np.concatenate((graph.weight, np.ones(extra))), graph.id_map,
                    graph.dropped_duplicates, graph.dropped_self_loops,
                    f"{graph.source}+densify={target_density_percent:g}", dict(graph.extras))


def symmetrize(graph: EdgeList) -> EdgeList:
    """Add the reverse of every arc; a pair present both ways keeps its lighter weight."""
    n = graph.num_nodes
    if graph.num_edges == 0:
        return graph
    src = np.concatenate((graph.src, graph.dst))
    dst = np.concatenate((graph.dst, graph.src))
    w = np.concatenate((graph.weight, graph.weight))
    lo, hi = np.minimum(src, dst), np.maximum(src, dst)
    order = np.lexsort((w, hi, lo))
    lo, hi, w = lo[order], hi[order], w[order]
    first = np.r_[True, (lo[1:] != lo[:-1]) | (hi[1:] != hi[:-1])]
    lo, hi, w = lo[first], hi[first], w[first]
    src, dst, w = np.concatenate((lo, hi)), np.concatenate((hi, lo)), np.concatenate((w, w))
    order = np.lexsort((dst, src))
    return EdgeList(n, src[order], dst[order], w[order], graph.id_map, graph.dropped_duplicates,
                    graph.dropped_self_loops, f"{graph.source}+sym", dict(graph.extras))
