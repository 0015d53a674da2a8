from __future__ import annotations

import numpy as np
import pytest


def random_edges(rng: np.random.Generator, n: int, p: float, *, weights: str = "int", wmax: int = 10):
    """Each ordered non-loop pair independently with probability ``p``."""
    if n < 2:
        return []
    mask = rng.random((n, n)) < p
    np.fill_diagonal(mask, False)
    src, dst = np.nonzero(mask)
    if weights == "unit":
        w = np.ones(len(src))
    elif weights == "int":
        w = rng.integers(1, wmax + 1, size=len(src)).astype(float)
    else:
        w = rng.uniform(0.0, wmax, size=len(src))
    order = rng.permutation(len(src))
    return list(zip(src[order].tolist(), dst[order].tolist(), w[order].tolist()))


def symmetric(edges):
    """Undirected closure of ``edges``; a pair seen both ways keeps the lighter weight."""
    best = {}
    for u, v, w in edges:
        key = (min(u, v), max(u, v))
        best[key] = min(w, best.get(key, w))
    out = []
    for (a, b), w in best.items():
        out += [(a, b, w), (b, a, w)]
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
