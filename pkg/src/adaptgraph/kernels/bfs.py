"""Breadth-first search from every node as root."""

from __future__ import annotations

from collections import deque

import numpy as np

from ..graph import AdjacencyList, AdjacencyMatrix, GraphRepr
from .base import Kernel, KernelState, Levels, Progress, level_hash


def bfs_levels_list(adj: AdjacencyList, root: int) -> np.ndarray:
    level = [-1] * adj.num_nodes
    level[root] = 0
    targets = adj.targets
    queue = deque([root])
    while queue:
        u = queue.popleft()
        nxt = level[u] + 1
        for v in targets[u]:
            if level[v] < 0:
                level[v] = nxt
                queue.append(v)
    return np.array(level, dtype=np.int64)


def bfs_levels_matrix(mat: AdjacencyMatrix, root: int) -> np.ndarray:
    level = np.full(mat.num_nodes, -1, dtype=np.int64)
    level[root] = 0
    frontier = np.array([root])
    depth = 0
    while frontier.size:
        depth += 1
        frontier = np.flatnonzero(mat.present[frontier].any(axis=0) & (level < 0))
        level[frontier] = depth
    return level


def bfs_levels(g: GraphRepr, root: int) -> np.ndarray:
    """Hop level of every node from ``root``; ``-1`` when unreachable."""
    if isinstance(g.store, AdjacencyList):
        return bfs_levels_list(g.store, root)
    return bfs_levels_matrix(g.store, root)


class BFS(Kernel):
    kernel_id = "bfs"

    def init(self, g: GraphRepr) -> KernelState:
        n = g.num_nodes
        scratch = {k: np.zeros(n, dtype=np.int64) for k in ("reachable", "level_sum", "max_level", "level_hash")}
        return KernelState(self.kernel_id, Progress(0, n), scratch)

    def _step(self, state: KernelState, g: GraphRepr) -> None:
        r = state.progress.completed
        level = bfs_levels(g, r)
        seen = level >= 0
        sc = state.scratch
        sc["reachable"][r] = int(seen.sum())
        sc["level_sum"][r] = int(level[seen].sum())
        sc["max_level"][r] = int(level.max())
        sc["level_hash"][r] = level_hash(level)

    def result(self, state: KernelState) -> Levels:
        sc = state.scratch
        return Levels(sc["reachable"].copy(), sc["level_sum"].copy(), sc["max_level"].copy(),
                      sc["level_hash"].copy())
