"""Brute-force reference implementations used to check the kernels.

They take a plain ``(num_nodes, edges)`` pair rather than a
:class:`~adaptgraph.graph.GraphRepr` and share no code with the kernels.
"""

from __future__ import annotations

import itertools
import math
from collections import deque

import numpy as np


def _dedupe(edges):
    seen = {}
    for u, v, w in edges:
        seen.setdefault((u, v), float(w))
    return seen


def floyd_warshall(n: int, edges) -> np.ndarray:
    d = np.full((n, n), math.inf)
    np.fill_diagonal(d, 0.0)
    for (u, v), w in _dedupe(edges).items():
        d[u, v] = min(d[u, v], w)
    for k in range(n):
        d = np.minimum(d, d[:, k:k + 1] + d[k:k + 1, :])
    return d


def betweenness_by_enumeration(n: int, edges) -> np.ndarray:
    """Enumerate every shortest (hop-count) path and count interior visits."""
    adj = [[] for _ in range(n)]
    for (u, v) in _dedupe(edges):
        adj[u].append(v)
    hops = floyd_warshall(n, [(u, v, 1.0) for (u, v) in _dedupe(edges)])
    bc = np.zeros(n)
    for s in range(n):
        for t in range(n):
            if s == t or math.isinf(hops[s, t]):
                continue
            paths = []
            stack = [(s, [s])]
            while stack:
                u, path = stack.pop()
                if u == t:
                    paths.append(path)
                    continue
                for w in adj[u]:
                    if hops[s, w] == hops[s, u] + 1 and hops[w, t] == hops[s, t] - hops[s, w]:
                        stack.append((w, path + [w]))
            visits = np.zeros(n)
            for path in paths:
                for v in path[1:-1]:
                    visits[v] += 1
            bc += visits / len(paths)
    return bc


def reachable_counts(n: int, edges) -> np.ndarray:
    """Per-root reachable-node count from the boolean transitive closure."""
    reach = np.eye(n, dtype=bool)
    for (u, v) in _dedupe(edges):
        reach[u, v] = True
    for k in range(n):
        reach |= reach[:, k:k + 1] & reach[k:k + 1, :]
    return reach.sum(axis=1)


def prim_forest_weight(n: int, edges) -> float:
    """Total weight of a minimum spanning forest, arcs read as undirected."""
    adj = [dict() for _ in range(n)]
    for (u, v), w in _dedupe(edges).items():
        for a, b in ((u, v), (v, u)):
            if b not in adj[a] or w < adj[a][b]:
                adj[a][b] = w
    inside = [False] * n
    total = []
    for root in range(n):
        if inside[root]:
            continue
        best = {root: 0.0}
        while best:
            u = min(best, key=best.get)
            total.append(best.pop(u))
            inside[u] = True
            for v, w in adj[u].items():
                if not inside[v] and w < best.get(v, math.inf):
                    best[v] = w
    return math.fsum(total)


def exhaustive_spanning_tree_weight(n: int, edges) -> float:
    """Minimum over every (n-1)-subset of undirected edges that spans the graph."""
    und = {}
    for (u, v), w in _dedupe(edges).items():
        key = (min(u, v), max(u, v))
        und[key] = min(w, und.get(key, math.inf))
    best = math.inf
    for subset in itertools.combinations(und, n - 1):
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        ok = True
        for a, b in subset:
            ra, rb = find(a), find(b)
            if ra == rb:
                ok = False
                break
            parent[ra] = rb
        if ok:
            best = min(best, math.fsum(und[e] for e in subset))
    return best


def ford_fulkerson(n: int, edges, s: int, t: int) -> float:
    """Max flow by shortest augmenting paths on a dense residual matrix."""
    if s == t:
        return 0.0
    res = np.zeros((n, n))
    for (u, v), w in _dedupe(edges).items():
        res[u, v] += w
    total = 0.0
    while True:
        parent = [-1] * n
        parent[s] = s
        q = deque([s])
        while q and parent[t] < 0:
            u = q.popleft()
            for v in range(n):
                if parent[v] < 0 and res[u, v] > 0:
                    parent[v] = u
                    q.append(v)
        if parent[t] < 0:
            return total
        bottleneck = math.inf
        v = t
        while v != s:
            bottleneck = min(bottleneck, res[parent[v], v])
            v = parent[v]
        v = t
        while v != s:
            res[parent[v], v] -= bottleneck
            res[v, parent[v]] += bottleneck
            v = parent[v]
        total += bottleneck
