"""Build one graph in both representations and migrate between them.

Run: python demos/representations.py
"""

from __future__ import annotations

from adaptgraph import Repr, build_from_edges, density, footprint, migrate
from adaptgraph.graph import crossover_edges, list_bytes, matrix_bytes
from adaptgraph.workload import GenSpec, generate


def main() -> None:
    edges = generate(GenSpec(200, 3.0, "uniform", seed=4))
    g = build_from_edges(edges.num_nodes, edges, Repr.LIST)
    print(f"n={g.num_nodes} edges={g.num_edges} density={100 * density(g):.2f}%")
    print(f"list footprint   {footprint(g).logical_bytes:>8} bytes")

    snapshot = sorted(g.traverse_edges())
    migrate(g, Repr.MATRIX)
    print(f"matrix footprint {footprint(g).logical_bytes:>8} bytes")
    migrate(g, Repr.LIST)
    print(f"round trip keeps every edge: {sorted(g.traverse_edges()) == snapshot}")

    # the density where both layouts cost the same number of bytes
    n = g.num_nodes
    e = crossover_edges(n)
    print(f"memory crossover at {e:.0f} edges ({100 * e / (n * (n - 1)):.1f}% dense)")
    for pct in (1, 10, 50):
        m = round(pct / 100 * n * (n - 1))
        print(f"  {pct:>2}%: list {list_bytes(n, m):>7}  matrix {matrix_bytes(n):>7}")


if __name__ == "__main__":
    main()
