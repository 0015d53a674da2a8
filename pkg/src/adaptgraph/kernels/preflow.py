"""Preflow-push maximum flow from every node to a fixed sink.

Each step is one complete push-relabel run (FIFO selection, exact initial
labels from a reverse BFS, gap relabelling).  Only the first phase is run:
once no active node can still reach the sink, the sink's excess is the
maximum flow value.

The list and matrix variants perform the same pushes in the same order
(admissible arcs are taken in ascending neighbour id), so their float
results agree bit for bit; only neighbour enumeration and the relabel
minimum differ in how they are computed.
"""

from __future__ import annotations

from collections import deque

import numpy as np

from ..graph import AdjacencyList, AdjacencyMatrix, GraphRepr
from .base import Flows, Kernel, KernelState, Progress


class _ListResidual:
    __slots__ = ("cap", "nbrs")

    def __init__(self, adj: AdjacencyList):
        n = adj.num_nodes
        self.cap = [dict(zip(adj.targets[u], adj.weights[u])) for u in range(n)]
        sets = [set(adj.targets[u]) for u in range(n)]
        for u in range(n):
            for v in adj.targets[u]:
                sets[v].add(u)
        self.nbrs = [sorted(x) for x in sets]


class _MatrixResidual:
    __slots__ = ("cap",)

    def __init__(self, mat: AdjacencyMatrix):
        self.cap = np.where(mat.present, mat.weights, 0.0)


def max_flow_list(res: _ListResidual, s: int, t: int) -> float:
    n = len(res.cap)
    if s == t:
        return 0.0
    cap, nbrs = res.cap, res.nbrs
    flow: list[dict[int, float]] = [{} for _ in range(n)]

    h = [n] * n
    h[t] = 0
    queue = deque([t])
    while queue:
        v = queue.popleft()
        for x in nbrs[v]:
            if h[x] == n and x != s and cap[x].get(v, 0.0) > 0:
                h[x] = h[v] + 1
                queue.append(x)
    h[s] = n
    count = [0] * (n + 1)
    for x in h:
        count[x] += 1

    excess = [0.0] * n
    inq = [False] * n
    active: deque[int] = deque()
    for v in nbrs[s]:
        c = cap[s].get(v, 0.0)
        if c > 0:
            flow[s][v] = flow[s].get(v, 0.0) + c
            flow[v][s] = flow[v].get(s, 0.0) - c
            excess[s] -= c
            excess[v] += c
            if v != t and h[v] < n and not inq[v]:
                inq[v] = True
                active.append(v)

    while active:
        u = active.popleft()
        inq[u] = False
        cap_u, flow_u, nbrs_u = cap[u], flow[u], nbrs[u]
        while excess[u] > 0 and h[u] < n:
            hu = h[u]
            for v in nbrs_u:
                if h[v] != hu - 1:
                    continue
                r = cap_u.get(v, 0.0) - flow_u.get(v, 0.0)
                if r > 0:
                    d = min(excess[u], r)
                    flow_u[v] = flow_u.get(v, 0.0) + d
                    flow[v][u] = flow[v].get(u, 0.0) - d
                    excess[u] -= d
                    excess[v] += d
                    if v != t and not inq[v] and h[v] < n:
                        inq[v] = True
                        active.append(v)
                    if excess[u] == 0:
                        break
            if excess[u] > 0:
                lowest = min(h[v] for v in nbrs_u if cap_u.get(v, 0.0) - flow_u.get(v, 0.0) > 0)
                new = min(lowest + 1, n)
                count[hu] -= 1
                h[u] = new
                count[new] += 1
                if count[hu] == 0:
                    for x in range(n):
                        if hu < h[x] < n:
                            count[h[x]] -= 1
                            h[x] = n
                            count[n] += 1
    return excess[t]


def max_flow_matrix(res: _MatrixResidual, s: int, t: int) -> float:
    cap = res.cap
    n = cap.shape[0]
    if s == t:
        return 0.0
    flow = np.zeros_like(cap)
    positive = cap > 0

    h = np.full(n, n, dtype=np.int64)
    h[t] = 0
    labelled = np.zeros(n, dtype=bool)
    labelled[t] = labelled[s] = True
    frontier = np.array([t])
    depth = 0
    while frontier.size:
        depth += 1
        frontier = np.flatnonzero(positive[:, frontier].any(axis=1) & ~labelled)
        labelled[frontier] = True
        h[frontier] = depth
    h[s] = n
    count = np.bincount(h, minlength=n + 1)

    excess = [0.0] * n
    inq = [False] * n
    active: deque[int] = deque()
    for v in np.flatnonzero(positive[s]).tolist():
        c = cap[s, v]
        flow[s, v] += c
        flow[v, s] -= c
        excess[s] -= c
        excess[v] += c
        if v != t and h[v] < n and not inq[v]:
            inq[v] = True
            active.append(v)

    while active:
        u = active.popleft()
        inq[u] = False
        while excess[u] > 0 and h[u] < n:
            hu = int(h[u])
            r = cap[u] - flow[u]
            for v in np.flatnonzero((h == hu - 1) & (r > 0)).tolist():
                d = min(excess[u], r[v])
                flow[u, v] += d
                flow[v, u] -= d
                excess[u] -= d
                excess[v] += d
                if v != t and not inq[v] and h[v] < n:
                    inq[v] = True
                    active.append(v)
                if excess[u] == 0:
                    break
            if excess[u] > 0:
                r = cap[u] - flow[u]
                new = min(int(h[r > 0].min()) + 1, n)
                count[hu] -= 1
                h[u] = new
                count[new] += 1
                if count[hu] == 0:
                    lifted = (h > hu) & (h < n)
                    if lifted.any():
                        np.subtract.at(count, h[lifted], 1)
                        count[n] += int(lifted.sum())
                        h[lifted] = n
    return float(excess[t])


class PreflowPush(Kernel):
    """Max flow from each node to ``sink`` (default: the highest node id)."""

    kernel_id = "pp"

    def __init__(self, sink: int | None = None):
        self.sink = sink
        self._cache: tuple[object, object] | None = None

    def _residual(self, store):
        if self._cache is None or self._cache[0] is not store:
            if isinstance(store, AdjacencyList):
                self._cache = (store, _ListResidual(store))
            else:
                self._cache = (store, _MatrixResidual(store))
        return self._cache[1]

    def init(self, g: GraphRepr) -> KernelState:
        n = g.num_nodes
        sink = n - 1 if self.sink is None else self.sink
        if n and not 0 <= sink < n:
            raise ValueError(f"sink {sink} outside 0..{n - 1}")
        return KernelState(self.kernel_id, Progress(0, n), {"flows": np.zeros(n), "sink": sink})

    def _step(self, state: KernelState, g: GraphRepr) -> None:
        s = state.progress.completed
        sink = state.scratch["sink"]
        res = self._residual(g.store)
        if isinstance(res, _ListResidual):
            value = max_flow_list(res, s, sink)
        else:
            value = max_flow_matrix(res, s, sink)
        state.scratch["flows"][s] = value

    def result(self, state: KernelState) -> Flows:
        return Flows(state.scratch["flows"].copy(), state.scratch["sink"])
