"""Unweighted betweenness centrality (Brandes), one source phase per step.

Dependencies are summed with ``math.fsum`` so a node's dependency does not
depend on the order its successors are visited in.  That keeps the list and
matrix phases bit-identical even though the matrix phase is level-synchronous.
"""

from __future__ import annotations

import math

import numpy as np

from ..graph import AdjacencyList, AdjacencyMatrix, GraphRepr
from .base import Centrality, Kernel, KernelState, Progress


def brandes_phase_list(adj: AdjacencyList, s: int) -> list[float]:
    n = adj.num_nodes
    targets = adj.targets
    dist = [-1] * n
    sigma = [0.0] * n
    dist[s] = 0
    sigma[s] = 1.0
    order = [s]
    i = 0
    while i < len(order):
        u = order[i]
        i += 1
        du = dist[u] + 1
        for v in targets[u]:
            if dist[v] < 0:
                dist[v] = du
                order.append(v)
            if dist[v] == du:
                sigma[v] += sigma[u]
    delta = [0.0] * n
    fsum = math.fsum
    for v in reversed(order):
        dv = dist[v] + 1
        sv = sigma[v]
        terms = [sv / sigma[w] * (1.0 + delta[w]) for w in targets[v] if dist[w] == dv]
        if terms:
            delta[v] = fsum(terms)
    delta[s] = 0.0
    return delta


def brandes_phase_matrix(mat: AdjacencyMatrix, s: int) -> np.ndarray:
    n = mat.num_nodes
    present = mat.present
    dist = np.full(n, -1, dtype=np.int64)
    sigma = np.zeros(n)
    dist[s] = 0
    sigma[s] = 1.0
    levels = [np.array([s])]
    while True:
        frontier = levels[-1]
        rows = present[frontier]
        nxt = np.flatnonzero(rows.any(axis=0) & (dist < 0))
        if nxt.size == 0:
            break
        dist[nxt] = len(levels)
        sigma[nxt] = sigma[frontier] @ rows[:, nxt]
        levels.append(nxt)
    delta = np.zeros(n)
    fsum = math.fsum
    for depth in range(len(levels) - 2, -1, -1):
        here, below = levels[depth], levels[depth + 1]
        links = present[np.ix_(here, below)]
        coef = (sigma[here][:, None] / sigma[below][None, :]) * (1.0 + delta[below])[None, :]
        for i, v in enumerate(here.tolist()):
            mask = links[i]
            if mask.any():
                delta[v] = fsum(coef[i][mask].tolist())
    delta[s] = 0.0
    return delta


class BetweennessCentrality(Kernel):
    kernel_id = "bc"

    def init(self, g: GraphRepr) -> KernelState:
        n = g.num_nodes
        return KernelState(self.kernel_id, Progress(0, n), {"bc": np.zeros(n)})

    def _step(self, state: KernelState, g: GraphRepr) -> None:
        s = state.progress.completed
        store = g.store
        if isinstance(store, AdjacencyList):
            delta = np.asarray(brandes_phase_list(store, s))
        else:
            delta = brandes_phase_matrix(store, s)
        state.scratch["bc"] += delta

    def result(self, state: KernelState) -> Centrality:
        return Centrality(state.scratch["bc"].copy())
