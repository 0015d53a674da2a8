from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adaptgraph.errors import PolicyParseError
from adaptgraph.graph import Repr
from adaptgraph.policy import (DensityRange, TransitionPolicy, bundled_policy, bundled_policy_path,
                               choose_representation, format_policy, parse_policy)
from adaptgraph.runtime import MonitorSample


MSSP_LISTING = """\
       /* EXECUTION TIME */
           DS1 [0,9)
           DS2 [9,100]
      /*MEMORY*/
           DS1 [0,25)
           DS2 [25,100]
     /*THRESHOLD*/
           MEMORY 100
"""


def _policy(time_cut=9, mem_cut=25, threshold=100):
    return parse_policy(f"/* EXECUTION TIME */ DS1 [0,{time_cut}) DS2 [{time_cut},100] "
                        f"/* MEMORY */ DS1 [0,{mem_cut}) DS2 [{mem_cut},100] /* THRESHOLD */ MEMORY {threshold}")


def sample(density, memory):
    return MonitorSample(density, memory, 0.0, 0.0)


def test_listing_parses():
    p = parse_policy(MSSP_LISTING)
    assert p.time_best == (DensityRange(0, 9, False, Repr.LIST), DensityRange(9, 100, True, Repr.MATRIX))
    assert p.mem_best == (DensityRange(0, 25, False, Repr.LIST), DensityRange(25, 100, True, Repr.MATRIX))
    assert p.memory_threshold_mb == 100


def test_round_trip():
    p = parse_policy(MSSP_LISTING)
    assert parse_policy(format_policy(p)) == p


def test_single_range_always_list():
    p = parse_policy("/* EXECUTION TIME */ DS1 [0,100] /* MEMORY */ DS1 [0,100] /* THRESHOLD */ MEMORY 0")
    assert {choose_representation(p, sample(d, m)) for d in (0, 9, 50, 100) for m in (0, 1e6)} == {Repr.LIST}


@pytest.mark.parametrize("text,line,fragment", [
    ("/* EXECUTION TIME */\nDS1 [0,9)\nDS2 [10,100]\n/* MEMORY */\nDS1 [0,100]\n/* THRESHOLD */\nMEMORY 1",
     3, "gap"),
    ("/* EXECUTION TIME */\nDS1 [0,10)\nDS2 [9,100]\n/* MEMORY */\nDS1 [0,100]\n/* THRESHOLD */\nMEMORY 1",
     3, "overlap"),
    ("/* EXECUTION TIME */\nDS1 [5,100]\n/* MEMORY */\nDS1 [0,100]\n/* THRESHOLD */\nMEMORY 1", 2, "not 0"),
    ("/* EXECUTION TIME */\nDS1 [0,90)\n/* MEMORY */\nDS1 [0,100]\n/* THRESHOLD */\nMEMORY 1", 2, "100]"),
    ("/* EXECUTION TIME */\nDS1 [0,9]\nDS2 [9,100]\n/* MEMORY */\nDS1 [0,100]\n/* THRESHOLD */\nMEMORY 1",
     2, "only the final"),
    ("/* EXECUTION TIME */\nDS1 [0,100]\n/* MEMORY */\nDS1 [0,100]\n/* THRESHOLD */\nMEMORY -4", 6, "non-negative"),
    ("/* EXECUTION TIME */\nDS1 [0,100]\n/* THRESHOLD */\nMEMORY 1", 3, "MEMORY"),
    ("/* EXECUTION TIME */\nDS1 [0,100]\n/* MEMORY */\nDS3 [0,100]\n/* THRESHOLD */\nMEMORY 1", 4, "no DS1/DS2"),
    ("/* EXECUTION TIME */\nDS1 [0,100]\n/* MEMORY */\nDS1 [0,100]\n/* THRESHOLD */\nMEMORY 1 extra", 6,
     "unexpected"),
    ("/* EXECUTION TIME */\nDS1 [0,100] $\n", 2, "unexpected character"),
    ("/* EXECUTION TIME */\nDS1 [0,1e2]\n", 2, ""),
    ("/* EXECUTION TIME */\nDS1 [7,7)\n", 2, "empty range"),
    ("/* EXECUTION TIME */\nDS1 [0,120]\n", 2, "outside"),
])
def test_rejects_with_line_number(text, line, fragment):
    with pytest.raises(PolicyParseError) as info:
        parse_policy(text)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}:")
    assert fragment in str(info.value)


class TestChoice:
    p = parse_policy(MSSP_LISTING)

    def test_sparse_ample_memory(self):
        assert choose_representation(self.p, sample(5, 500)) is Repr.LIST

    def test_dense_ample_memory(self):
        assert choose_representation(self.p, sample(30, 500)) is Repr.MATRIX

    def test_middle_range_depends_on_memory(self):
        assert choose_representation(self.p, sample(15, 50)) is Repr.LIST
        assert choose_representation(self.p, sample(15, 500)) is Repr.MATRIX

    def test_boundaries_half_open(self):
        assert choose_representation(self.p, sample(8.999, 500)) is Repr.LIST
        assert choose_representation(self.p, sample(9, 500)) is Repr.MATRIX
        assert choose_representation(self.p, sample(100, 500)) is Repr.MATRIX
        assert choose_representation(self.p, sample(24.99, 99.9)) is Repr.LIST
        assert choose_representation(self.p, sample(25, 99.9)) is Repr.MATRIX
        assert choose_representation(self.p, sample(15, 100)) is Repr.MATRIX  # threshold is strict


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 99), st.integers(1, 99), st.integers(0, 1000),
       st.floats(0, 100), st.floats(0, 2000))
def test_choice_properties(tcut, mcut, threshold, dens, mem):
    p = _policy(tcut, mcut, threshold)
    got = choose_representation(p, sample(dens, mem))
    # pure: same input, same answer
    assert got is choose_representation(p, sample(dens, mem))
    # below the threshold memory decides, otherwise time does
    assert got is (p.memory_choice(dens) if mem < threshold else p.time_choice(dens))
    assert parse_policy(format_policy(p)) == p


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(0.5, 99.5), min_size=1, max_size=5, unique=True))
def test_multi_range_round_trip(cuts):
    cuts = sorted(cuts)
    bounds = [0.0, *cuts, 100.0]
    kinds = ["DS1", "DS2"]
    ranges = " ".join(f"{kinds[i % 2]} [{bounds[i]!r},{bounds[i + 1]!r}{']' if i == len(cuts) else ')'}"
                      for i in range(len(cuts) + 1))
    p = parse_policy(f"/* EXECUTION TIME */ {ranges} /* MEMORY */ {ranges} /* THRESHOLD */ MEMORY 3.5")
    assert parse_policy(format_policy(p)) == p
    assert len(p.time_best) == len(cuts) + 1


@pytest.mark.parametrize("kernel_id", ["mssp", "bc", "bfs", "mst-k", "mst-b", "pp"])
def test_bundled_policies_load(kernel_id):
    p = bundled_policy(kernel_id)
    assert isinstance(p, TransitionPolicy)
    assert bundled_policy_path(kernel_id).name == f"{kernel_id}.policy"
    assert p.time_choice(0) is Repr.LIST and p.time_choice(100) is Repr.MATRIX


def test_bundled_mssp_matches_listing():
    assert bundled_policy("mssp") == parse_policy(MSSP_LISTING)


def test_unknown_bundled_policy():
    with pytest.raises(FileNotFoundError):
        bundled_policy("nope")
