from __future__ import annotations

import math
import pickle

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adaptgraph.graph import Repr, build_from_edges, migrate
from adaptgraph.kernels import (BFS, KERNELS, MSSP, BetweennessCentrality, MSTBoruvka, MSTKruskal, PreflowPush,
                                bfs_levels, get_kernel, result_digest)
from adaptgraph.kernels import oracles
from adaptgraph.kernels.base import Tree
from adaptgraph.kernels.mst import boruvka_round_limit, kruskal_batch_size

from conftest import random_edges, symmetric

BOTH = [Repr.LIST, Repr.MATRIX]


def run_on(kernel, n, edges, kind):
    return kernel.run(build_from_edges(n, edges, kind))


@pytest.mark.parametrize("kind", BOTH)
class TestMSSP:
    def test_relaxation_beats_direct_edge(self, kind):
        d = run_on(MSSP(), 3, [(0, 1, 2.0), (1, 2, 3.0), (0, 2, 10.0)], kind).dist
        assert d[0, 2] == 5.0 == oracles.floyd_warshall(3, [(0, 1, 2.0), (1, 2, 3.0), (0, 2, 10.0)])[0, 2]

    def test_empty(self, kind):
        d = run_on(MSSP(), 4, [], kind).dist
        assert np.all(np.diag(d) == 0) and np.all(np.isinf(d[~np.eye(4, dtype=bool)]))

    def test_random_against_floyd_warshall(self, kind, rng):
        for _ in range(5):
            n = int(rng.integers(2, 40))
            edges = random_edges(rng, n, float(rng.uniform(0.02, 0.4)))
            d = run_on(MSSP(), n, edges, kind).dist
            assert np.array_equal(d, oracles.floyd_warshall(n, edges))

    def test_triangle_inequality(self, kind, rng):
        n = 30
        edges = random_edges(rng, n, 0.1, weights="float")
        d = run_on(MSSP(), n, edges, kind).dist
        for u, v, w in edges:
            assert np.all(d[:, v] <= d[:, u] + w + 1e-12)


@pytest.mark.parametrize("kind", BOTH)
class TestBC:
    def test_path(self, kind):
        assert run_on(BetweennessCentrality(), 3, [(0, 1, 1), (1, 2, 1)], kind).scores.tolist() == [0, 1, 0]

    def test_no_long_paths(self, kind):
        edges = [(0, 1, 1), (0, 2, 1), (0, 3, 1)]
        assert not run_on(BetweennessCentrality(), 4, edges, kind).scores.any()

    def test_two_equal_paths_split_credit(self, kind):
        edges = [(0, 1, 1), (0, 2, 1), (1, 3, 1), (2, 3, 1)]
        assert run_on(BetweennessCentrality(), 4, edges, kind).scores.tolist() == [0, 0.5, 0.5, 0]

    def test_random_against_enumeration(self, kind, rng):
        for _ in range(4):
            n = int(rng.integers(2, 20))
            edges = random_edges(rng, n, float(rng.uniform(0.05, 0.4)))
            got = run_on(BetweennessCentrality(), n, edges, kind).scores
            assert np.allclose(got, oracles.betweenness_by_enumeration(n, edges), atol=1e-9, rtol=0)


@pytest.mark.parametrize("kind", BOTH)
class TestBFS:
    def test_path(self, kind):
        g = build_from_edges(3, [(0, 1, 1), (1, 2, 1)], kind)
        assert bfs_levels(g, 0).tolist() == [0, 1, 2]
        assert BFS().run(g).reachable.tolist() == [3, 2, 1]

    def test_isolated_root(self, kind):
        assert BFS().run(build_from_edges(3, [(0, 1, 1)], kind)).reachable[2] == 1

    def test_random_against_closure(self, kind, rng):
        for _ in range(5):
            n = int(rng.integers(2, 80))
            edges = random_edges(rng, n, float(rng.uniform(0.005, 0.1)))
            got = run_on(BFS(), n, edges, kind).reachable
            assert np.array_equal(got, oracles.reachable_counts(n, edges))


@pytest.mark.parametrize("kind", BOTH)
class TestMST:
    TRI = symmetric([(0, 1, 1.0), (1, 2, 2.0), (0, 2, 3.0)])

    @pytest.mark.parametrize("kernel", [MSTKruskal, MSTBoruvka])
    def test_triangle(self, kind, kernel):
        assert run_on(kernel(), 3, self.TRI, kind).total_weight == 3.0
        assert oracles.exhaustive_spanning_tree_weight(3, self.TRI) == 3.0

    def test_boruvka_rounds(self, kind):
        k = MSTBoruvka()
        g = build_from_edges(3, self.TRI, kind)
        state = k.init(g)
        while not state.finished:
            k.step(state, g)
        assert state.scratch["rounds_used"] <= 2 == boruvka_round_limit(3)

    @pytest.mark.parametrize("kernel", [MSTKruskal, MSTBoruvka])
    def test_tree_input_is_its_own_mst(self, kind, kernel):
        tree = [(0, 1, 4.0), (1, 2, 1.0), (1, 3, 2.5), (3, 4, 7.0)]
        assert run_on(kernel(), 5, symmetric(tree), kind) == Tree.from_edges(tree)

    def test_disjoint_pairs_one_round(self, kind):
        pairs = symmetric([(2 * i, 2 * i + 1, float(i + 1)) for i in range(5)])
        k = MSTBoruvka()
        g = build_from_edges(10, pairs, kind)
        state = k.init(g)
        k.step(state, g)
        assert len(state.scratch["tree"]) == 5 and state.scratch["rounds_used"] == 1

    def test_random_against_prim(self, kind, rng):
        for _ in range(5):
            n = int(rng.integers(2, 40))
            edges = symmetric(random_edges(rng, n, float(rng.uniform(0.05, 0.3))))
            ref = oracles.prim_forest_weight(n, edges)
            k = run_on(MSTKruskal(), n, edges, kind)
            b = run_on(MSTBoruvka(), n, edges, kind)
            assert k.total_weight == ref == b.total_weight
            assert k == b  # tie-breaking picks the same forest

    def test_batch_size(self, kind):
        assert [kruskal_batch_size(e) for e in (0, 1, 100, 101, 1000)] == [1, 1, 1, 2, 10]
        edges = symmetric(random_edges(np.random.default_rng(1), 30, 0.3))
        state = MSTKruskal().init(build_from_edges(30, edges, kind))
        assert state.progress.total == math.ceil(len(edges) / kruskal_batch_size(len(edges)))


@pytest.mark.parametrize("kind", BOTH)
class TestPreflow:
    def test_two_routes(self, kind):
        edges = [(0, 2, 7.0), (0, 1, 3.0), (1, 2, 3.0)]
        flows = run_on(PreflowPush(), 3, edges, kind)
        assert flows.values.tolist() == [10.0, 3.0, 0.0] and flows.sink == 2
        assert oracles.ford_fulkerson(3, edges, 0, 2) == 10.0

    def test_source_without_out_edges(self, kind):
        assert run_on(PreflowPush(), 3, [(1, 2, 5.0)], kind).values[0] == 0.0

    def test_custom_sink(self, kind):
        edges = [(1, 0, 4.0), (2, 1, 2.0), (2, 0, 1.0)]
        assert run_on(PreflowPush(sink=0), 3, edges, kind).values.tolist() == [0.0, 4.0, 3.0]
        with pytest.raises(ValueError):
            PreflowPush(sink=3).init(build_from_edges(3, edges, kind))

    def test_random_against_ford_fulkerson(self, kind, rng):
        for _ in range(4):
            n = int(rng.integers(2, 20))
            edges = random_edges(rng, n, float(rng.uniform(0.1, 0.5)))
            got = run_on(PreflowPush(), n, edges, kind).values
            ref = [oracles.ford_fulkerson(n, edges, s, n - 1) if s != n - 1 else 0.0 for s in range(n)]
            assert got.tolist() == ref


# ---- checkpoint contract -----------------------------------------------------

def _inputs(kernel_id, rng, n=25, p=0.15):
    edges = random_edges(rng, n, p)
    return n, symmetric(edges) if kernel_id.startswith("mst") else edges


@pytest.mark.parametrize("kernel_id", sorted(KERNELS))
def test_progress_monotone(kernel_id, rng):
    n, edges = _inputs(kernel_id, rng)
    k = get_kernel(kernel_id)
    g = build_from_edges(n, edges)
    state = k.init(g)
    seen = [state.progress.completed]
    while not state.finished:
        assert state.progress.percent < 100
        k.step(state, g)
        seen.append(state.progress.completed)
    assert seen == list(range(state.progress.total + 1))
    assert state.progress.percent == 100
    with pytest.raises(RuntimeError):
        k.step(state, g)


@pytest.mark.parametrize("kernel_id", sorted(KERNELS))
def test_representations_agree_bitwise(kernel_id, rng):
    for _ in range(3):
        n, edges = _inputs(kernel_id, rng, n=int(rng.integers(5, 40)), p=float(rng.uniform(0.03, 0.4)))
        a = get_kernel(kernel_id).run(build_from_edges(n, edges, Repr.LIST))
        b = get_kernel(kernel_id).run(build_from_edges(n, edges, Repr.MATRIX))
        assert result_digest(a) == result_digest(b)


def _interrupted(kernel_id, n, edges, start, switch_at, pickle_at=()):
    k = get_kernel(kernel_id)
    g = build_from_edges(n, edges, start)
    state = k.init(g)
    i = 0
    while not state.finished:
        if i in switch_at:
            migrate(g, g.kind.other)
            state = k.result_migrate(state)
        if i in pickle_at:
            state = pickle.loads(pickle.dumps(state))
        k.step(state, g)
        i += 1
    return k.result(state)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(sorted(KERNELS)), st.integers(0, 2**32 - 1), st.sampled_from(BOTH),
       st.lists(st.integers(0, 40), max_size=6))
def test_interruption_invariance(kernel_id, seed, start, switches):
    rng = np.random.default_rng(seed)
    n, edges = _inputs(kernel_id, rng, n=int(rng.integers(3, 20)), p=float(rng.uniform(0.05, 0.5)))
    reference = get_kernel(kernel_id).run(build_from_edges(n, edges, Repr.LIST))
    got = _interrupted(kernel_id, n, edges, start, set(switches))
    assert got == reference and result_digest(got) == result_digest(reference)


@pytest.mark.parametrize("kernel_id", sorted(KERNELS))
def test_scratch_neutrality_under_pickling(kernel_id, rng):
    n, edges = _inputs(kernel_id, rng)
    plain = _interrupted(kernel_id, n, edges, Repr.MATRIX, {3})
    pickled = _interrupted(kernel_id, n, edges, Repr.MATRIX, {3}, pickle_at={3, 4})
    assert result_digest(plain) == result_digest(pickled)


def test_digest_is_crc32_of_canonical_bytes():
    import zlib

    rs = MSSP().run(build_from_edges(2, [(0, 1, 1.5)]))
    payload = rs.kind.encode() + bytes(1) + rs.canonical()
    assert result_digest(rs) == format(zlib.crc32(payload), "08x")


def test_digest_distinguishes_results():
    a = MSSP().run(build_from_edges(2, [(0, 1, 1.5)]))
    b = MSSP().run(build_from_edges(2, [(0, 1, 2.5)]))
    assert result_digest(a) != result_digest(b)
