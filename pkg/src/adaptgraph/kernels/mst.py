"""Minimum spanning forests: Kruskal (batched) and Boruvka (one round per step).

Arcs are read as undirected edges; callers symmetrize directed inputs.  Ties
are broken by ``(weight, min endpoint, max endpoint)`` so both kernels and
both representations pick the same forest.
"""

from __future__ import annotations

import math

import numpy as np

from ..graph import AdjacencyList, AdjacencyMatrix, GraphRepr
from .base import Kernel, KernelState, Progress, Tree


def _find(parent: list[int], x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def _union(parent: list[int], a: int, b: int) -> bool:
    ra, rb = _find(parent, a), _find(parent, b)
    if ra == rb:
        return False
    if ra < rb:
        ra, rb = rb, ra
    parent[ra] = rb
    return True


def kruskal_batch_size(num_edges: int) -> int:
    return max(1, math.ceil(num_edges / 100))


class MSTKruskal(Kernel):
    """Each step feeds the next batch of the weight-sorted arc list through union-find."""

    kernel_id = "mst-k"

    def init(self, g: GraphRepr) -> KernelState:
        src, dst, w = g.edge_arrays()
        order = np.lexsort((dst, src, w))
        batch = kruskal_batch_size(len(order))
        scratch = {
            "src": src[order].tolist(),
            "dst": dst[order].tolist(),
            "weight": w[order].tolist(),
            "batch": batch,
            "parent": list(range(g.num_nodes)),
            "tree": [],
        }
        return KernelState(self.kernel_id, Progress(0, math.ceil(len(order) / batch)), scratch)

    def _step(self, state: KernelState, g: GraphRepr) -> None:
        sc = state.scratch
        lo = state.progress.completed * sc["batch"]
        hi = min(lo + sc["batch"], len(sc["src"]))
        parent, tree = sc["parent"], sc["tree"]
        if len(tree) == len(parent) - 1:
            return
        for u, v, w in zip(sc["src"][lo:hi], sc["dst"][lo:hi], sc["weight"][lo:hi]):
            if _union(parent, u, v):
                tree.append((u, v, w))

    def result(self, state: KernelState) -> Tree:
        return Tree.from_edges(state.scratch["tree"])


def _cheapest_list(adj: AdjacencyList, comp: list[int]) -> set[tuple[float, int, int]]:
    best: dict[int, tuple[float, int, int]] = {}
    for u in range(adj.num_nodes):
        cu = comp[u]
        for v, w in zip(adj.targets[u], adj.weights[u]):
            cv = comp[v]
            if cu == cv:
                continue
            key = (w, u, v) if u < v else (w, v, u)
            if cu not in best or key < best[cu]:
                best[cu] = key
            if cv not in best or key < best[cv]:
                best[cv] = key
    return set(best.values())


def _cheapest_matrix(mat: AdjacencyMatrix, comp: list[int]) -> set[tuple[float, int, int]]:
    labels = np.asarray(comp)
    u, v = np.nonzero(mat.present & (labels[:, None] != labels[None, :]))
    if u.size == 0:
        return set()
    w = mat.weights[u, v]
    lo, hi = np.minimum(u, v), np.maximum(u, v)
    owner = np.concatenate((labels[u], labels[v]))
    w2, lo2, hi2 = np.tile(w, 2), np.tile(lo, 2), np.tile(hi, 2)
    order = np.lexsort((hi2, lo2, w2, owner))
    owner = owner[order]
    first = np.flatnonzero(np.r_[True, owner[1:] != owner[:-1]])
    pick = order[first]
    return set(zip(w2[pick].tolist(), lo2[pick].tolist(), hi2[pick].tolist()))


def boruvka_round_limit(num_nodes: int) -> int:
    return max(1, math.ceil(math.log2(num_nodes))) if num_nodes > 1 else 1


class MSTBoruvka(Kernel):
    """Each step is one Boruvka round; at most ``ceil(log2 n)`` rounds are needed."""

    kernel_id = "mst-b"

    def init(self, g: GraphRepr) -> KernelState:
        n = g.num_nodes
        scratch = {"parent": list(range(n)), "tree": [], "done": n <= 1, "rounds_used": 0}
        return KernelState(self.kernel_id, Progress(0, boruvka_round_limit(n) if n else 0), scratch)

    def _step(self, state: KernelState, g: GraphRepr) -> None:
        sc = state.scratch
        if sc["done"]:
            return
        parent = sc["parent"]
        comp = [_find(parent, x) for x in range(len(parent))]
        store = g.store
        if isinstance(store, AdjacencyList):
            chosen = _cheapest_list(store, comp)
        else:
            chosen = _cheapest_matrix(store, comp)
        if not chosen:
            sc["done"] = True
            return
        sc["rounds_used"] += 1
        for w, a, b in sorted(chosen):
            if _union(parent, a, b):
                sc["tree"].append((a, b, w))
        if len(sc["tree"]) == len(parent) - 1:
            sc["done"] = True

    def result(self, state: KernelState) -> Tree:
        return Tree.from_edges(state.scratch["tree"])
