"""Checkpointable graph kernels."""

from .base import (Centrality, Distances, Flows, Kernel, KernelState, Levels, Progress, ResultSet, Tree,
                   result_digest)
from .bfs import BFS, bfs_levels
from .centrality import BetweennessCentrality
from .mssp import MSSP
from .mst import MSTBoruvka, MSTKruskal
from .preflow import PreflowPush

KERNELS: dict[str, type[Kernel]] = {
    k.kernel_id: k for k in (MSSP, BetweennessCentrality, BFS, MSTKruskal, MSTBoruvka, PreflowPush)
}

# kernels that read arcs as undirected edges and need symmetric inputs
UNDIRECTED_KERNELS = frozenset({"mst-k", "mst-b"})


def get_kernel(kernel_id: str, **options) -> Kernel:
    try:
        cls = KERNELS[kernel_id]
    except KeyError:
        raise ValueError(f"unknown kernel {kernel_id!r}; choose from {sorted(KERNELS)}") from None
    return cls(**options)


__all__ = [
    "BFS", "BetweennessCentrality", "Centrality", "Distances", "Flows", "KERNELS", "Kernel", "KernelState",
    "Levels", "MSSP", "MSTBoruvka", "MSTKruskal", "PreflowPush", "Progress", "ResultSet", "Tree",
    "UNDIRECTED_KERNELS", "bfs_levels", "get_kernel", "result_digest",
]
