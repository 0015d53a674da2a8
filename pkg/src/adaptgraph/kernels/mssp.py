"""Multiple-source shortest paths: one Dijkstra run per source node."""

from __future__ import annotations

import heapq
import math

import numpy as np

from ..graph import AdjacencyList, AdjacencyMatrix, GraphRepr
from .base import Distances, Kernel, KernelState, Progress

INF = math.inf


def dijkstra_list(adj: AdjacencyList, source: int) -> list[float]:
    dist = [INF] * adj.num_nodes
    dist[source] = 0.0
    done = [False] * adj.num_nodes
    targets, weights = adj.targets, adj.weights
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for v, w in zip(targets[u], weights[u]):
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def dijkstra_matrix(mat: AdjacencyMatrix, source: int) -> np.ndarray:
    """O(n^2) Dijkstra scanning one dense row per settled node."""
    n = mat.num_nodes
    present, weights = mat.present, mat.weights
    dist = np.full(n, INF)
    dist[source] = 0.0
    frontier = dist.copy()  # tentative distances of unsettled nodes, inf once settled
    unsettled = np.ones(n, dtype=bool)
    for _ in range(n):
        u = int(frontier.argmin())
        d = frontier[u]
        if d == INF:
            break
        frontier[u] = INF
        unsettled[u] = False
        cand = d + weights[u]
        better = present[u] & unsettled & (cand < dist)
        dist[better] = cand[better]
        frontier[better] = cand[better]
    return dist


class MSSP(Kernel):
    kernel_id = "mssp"

    def init(self, g: GraphRepr) -> KernelState:
        n = g.num_nodes
        return KernelState(self.kernel_id, Progress(0, n), {"dist": np.full((n, n), INF)})

    def _step(self, state: KernelState, g: GraphRepr) -> None:
        s = state.progress.completed
        store = g.store
        if isinstance(store, AdjacencyList):
            state.scratch["dist"][s] = dijkstra_list(store, s)
        else:
            state.scratch["dist"][s] = dijkstra_matrix(store, s)

    def result(self, state: KernelState) -> Distances:
        return Distances(state.scratch["dist"].copy())
