from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adaptgraph.errors import EdgeListParseError, GraphInputError
from adaptgraph.graph import build_from_edges, density
from adaptgraph.workload import (EdgeList, GenSpec, bundled_sample_path, decode_pairs, densify, encode_pairs,
                                 generate, load_snap, snap_path, symmetrize, target_edge_count)


class TestSnap:
    def test_bundled_sample(self):
        e = load_snap(bundled_sample_path())
        assert (e.num_nodes, e.num_edges) == (7, 11)
        assert (e.dropped_duplicates, e.dropped_self_loops) == (1, 1)
        assert e.id_map.tolist() == [30, 1, 4, 7, 8, 12, 15]
        assert list(e)[:3] == [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]
        assert build_from_edges(e.num_nodes, e).num_edges == 11

    def test_malformed_line_number(self, tmp_path):
        p = tmp_path / "bad.txt"
        p.write_text("# header\n0 1\n1 2 3\n")
        with pytest.raises(EdgeListParseError) as info:
            load_snap(p)
        assert info.value.line == 3

    @pytest.mark.parametrize("line", ["a b", "1", "-1 2"])
    def test_bad_tokens(self, tmp_path, line):
        p = tmp_path / "bad.txt"
        p.write_text(f"0 1\n{line}\n")
        with pytest.raises(EdgeListParseError, match="line 2"):
            load_snap(p)

    def test_only_comments(self, tmp_path):
        p = tmp_path / "empty.txt"
        p.write_text("# nothing\n# here\n")
        with pytest.raises(GraphInputError):
            load_snap(p)

    def test_tabs_and_blank_lines(self, tmp_path):
        p = tmp_path / "t.txt"
        p.write_text("\n5\t9\n\n9\t5\n")
        e = load_snap(p)
        assert list(e) == [(0, 1, 1.0), (1, 0, 1.0)]

    @pytest.mark.parametrize("name,nodes,edges", [("wiki-Vote.txt", 7115, 103689),
                                                   ("p2p-Gnutella08.txt", 8114, 26013)])
    def test_real_datasets(self, name, nodes, edges):
        path = snap_path(name)
        if path is None:
            pytest.skip(f"{name} not present; set ADAPTGRAPH_SNAP_DIR to a directory holding it")
        e = load_snap(path)
        assert (e.num_nodes, e.num_edges) == (nodes, edges)
        g = build_from_edges(e.num_nodes, e)
        assert density(g) == pytest.approx(edges / (nodes * (nodes - 1)))


class TestGenerate:
    def test_complete_digraph(self):
        e = generate(GenSpec(4, 100))
        assert sorted((u, v) for u, v, _ in e) == [(u, v) for u in range(4) for v in range(4) if u != v]

    def test_large_count(self):
        assert target_edge_count(4000, 25) == 3_999_000
        assert generate(GenSpec(4000, 25, seed=1)).num_edges == 3_999_000

    def test_deterministic(self):
        a, b = generate(GenSpec(200, 5, "uniform", 9)), generate(GenSpec(200, 5, "uniform", 9))
        assert list(a) == list(b)
        assert list(generate(GenSpec(200, 5, "uniform", 10))) != list(a)

    def test_weights(self):
        assert set(generate(GenSpec(50, 20, "unit")).weight.tolist()) == {1.0}
        w = generate(GenSpec(50, 40, "uniform", 2)).weight
        assert w.min() >= 1 and w.max() <= 10 and np.all(w == np.round(w))

    @pytest.mark.parametrize("args", [(4, 101), (4, -1), (-1, 5), (4, 5, "gauss")])
    def test_invalid(self, args):
        with pytest.raises(GraphInputError):
            GenSpec(*args)

    def test_degenerate_sizes(self):
        assert generate(GenSpec(1, 50)).num_edges == 0
        assert generate(GenSpec(0, 0)).num_edges == 0


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 60), st.floats(0, 100), st.integers(0, 2**31))
def test_generated_graphs_are_valid_and_on_target(n, pct, seed):
    e = generate(GenSpec(n, pct, "uniform", seed))
    g = build_from_edges(n, e)  # raises on any precondition violation
    assert g.num_edges == e.num_edges == target_edge_count(n, pct)
    assert abs(density(g) - pct / 100) <= 0.5 / (n * (n - 1)) + 1e-12
    pairs = list(zip(e.src.tolist(), e.dst.tolist()))
    assert pairs == sorted(set(pairs))


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 40), st.data())
def test_pair_codes_bijective(n, data):
    codes = np.arange(n * (n - 1))
    s, d = decode_pairs(n, codes)
    assert np.all(s != d)
    assert np.array_equal(encode_pairs(n, s, d), codes)


class TestDensify:
    def test_gnutella_target_count(self):
        assert target_edge_count(8114, 20) == 13_165_776

    def test_superset_and_count(self):
        g = generate(GenSpec(80, 3, "uniform", 4))
        h = densify(g, 25, seed=7)
        assert h.num_edges == target_edge_count(80, 25)
        assert list(h)[:g.num_edges] == list(g)
        assert set(g.codes().tolist()) <= set(h.codes().tolist())
        assert len(set(h.codes().tolist())) == h.num_edges
        assert set(h.weight[g.num_edges:].tolist()) == {1.0}
        build_from_edges(80, h)

    def test_same_density_unchanged(self):
        g = generate(GenSpec(30, 10, seed=1))
        assert densify(g, 10) is g

    def test_below_current(self):
        with pytest.raises(GraphInputError):
            densify(generate(GenSpec(30, 10, seed=1)), 5)

    def test_to_complete(self):
        h = densify(generate(GenSpec(12, 10, seed=3)), 100, seed=1)
        assert h.num_edges == 12 * 11

    def test_deterministic(self):
        g = generate(GenSpec(40, 5, seed=3))
        assert list(densify(g, 30, seed=5)) == list(densify(g, 30, seed=5))


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 40), st.floats(0, 60), st.floats(0, 40), st.integers(0, 1000))
def test_densify_properties(n, start, extra, seed):
    g = generate(GenSpec(n, start, "uniform", seed))
    target = min(100.0, start + extra)
    h = densify(g, target, seed)
    assert h.num_edges == max(g.num_edges, target_edge_count(n, target))
    assert set(g.codes().tolist()) <= set(h.codes().tolist())


def test_symmetrize():
    e = EdgeList(4, [0, 1, 2], [1, 0, 3], [5.0, 2.0, 1.0])
    s = symmetrize(e)
    assert list(s) == [(0, 1, 2.0), (1, 0, 2.0), (2, 3, 1.0), (3, 2, 1.0)]
    build_from_edges(4, s)


def test_edge_list_length_check():
    with pytest.raises(GraphInputError):
        EdgeList(3, [0], [1, 2], [1.0])
