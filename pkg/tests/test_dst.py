import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from renewal_dst import (
    Dst,
    InsufficientBitsError,
    bits_from_unit_interval,
    build,
    depth_distribution_exact,
    knuth_corpus,
    parse_corpus,
    simulate_insertion_depth,
    tv_distance,
)
from renewal_dst.dst import CorpusFormatError
from renewal_dst.rng import stream_rng

EXPECTED_DEPTHS = [0, 1, 1, 2, 2, 3, 3, 2, 3, 3]


def test_insert_into_empty_tree():
    tree = Dst()
    rep = tree.insert("a", "10110")
    assert (rep.depth, rep.side, rep.parent, rep.path) == (0, "root", None, "")
    rep2 = tree.insert("b", "1")
    assert (rep2.depth, rep2.side, rep2.parent) == (1, "right", "a")
    assert len(tree) == 2


def test_insert_validates_bits():
    with pytest.raises(ValueError):
        Dst().insert("a", "012")


def test_insufficient_bits_leaves_tree_unchanged():
    tree, _ = build([("a", "11"), ("b", "11"), ("c", "11")])
    with pytest.raises(InsufficientBitsError):
        tree.insert("d", "11")
    assert len(tree) == 3


def test_knuth_corpus_contents():
    corpus = knuth_corpus()
    assert len(corpus) == 10
    assert all(len(bits) == 4 for _, bits in corpus)
    assert corpus[3] == ("x_4", "0010")
    assert corpus[8] == ("x_9", "0001")


def test_knuth_corpus_depth_sequence():
    tree, reports = build(knuth_corpus())
    assert [r.depth for r in reports] == EXPECTED_DEPTHS
    assert len(tree) == 10


def test_probe_next_key_lands_right_of_x6():
    tree, _ = build(knuth_corpus())
    before = len(tree)
    rep = tree.probe("011100", label="x_11")
    assert (rep.depth, rep.parent, rep.side) == (4, "x_6", "right")
    assert len(tree) == before
    again = tree.probe("011100")
    assert (again.depth, again.parent, again.side) == (4, "x_6", "right")


def test_build_empty_corpus():
    tree, reports = build([])
    assert len(tree) == 0 and reports == []


def test_identical_bit_strings_chain_down():
    corpus = [(f"k{i}", "0110") for i in range(5)]
    tree, reports = build(corpus[:5])
    assert [r.depth for r in reports] == [0, 1, 2, 3, 4]
    with pytest.raises(InsufficientBitsError) as exc:
        build(corpus + [("k5", "0110")])
    assert exc.value.index == 5
    assert exc.value.label == "k5"


def test_prefix_property():
    tree, reports = build(knuth_corpus())
    labels = {label: bits for label, bits in knuth_corpus()}
    for rep in reports:
        assert labels[rep.label].startswith(rep.path)
        assert rep.depth == len(rep.path)


def test_bits_from_unit_interval():
    assert bits_from_unit_interval(0.5, 3) == "100"
    assert bits_from_unit_interval(math.sqrt(2) % 1, 4) == "0110"
    assert bits_from_unit_interval((1 / math.log(2)) % 1, 6) == "011100"
    with pytest.raises(ValueError):
        bits_from_unit_interval(1.0, 4)
    with pytest.raises(ValueError):
        bits_from_unit_interval(0.2, 0)


@settings(max_examples=100, deadline=None)
@given(x=st.floats(min_value=0.0, max_value=1.0, exclude_max=True),
       length=st.integers(min_value=1, max_value=40))
def test_bits_round_trip(x, length):
    bits = bits_from_unit_interval(x, length)
    lo = int(bits, 2) / 2.0 ** length
    assert lo <= x < lo + 2.0 ** -length


def test_parse_corpus():
    text = "a 0101\n\n# comment\nb 11\n"
    assert parse_corpus(text) == [("a", "0101"), ("b", "11")]
    with pytest.raises(CorpusFormatError) as exc:
        parse_corpus("a 01\nbroken line here\n")
    assert exc.value.line == 2
    with pytest.raises(CorpusFormatError):
        parse_corpus("a 0123\n")
    assert parse_corpus("") == []


def test_simulated_depth_degenerate_cases():
    assert dict(simulate_insertion_depth(0, 40).items()) == {0: 1.0}
    assert dict(simulate_insertion_depth(1, 40).items()) == {1: 1.0}


def test_simulated_depth_matches_exact_law():
    emp = simulate_insertion_depth(100, 4000, 64, stream_rng(20070201, 25))
    assert tv_distance(emp, depth_distribution_exact(100)) <= 0.04


def test_probe_direction_does_not_matter():
    a = simulate_insertion_depth(50, 20000, 64, stream_rng(20070201, 23),
                                 probe_bits="0" * 40)
    b = simulate_insertion_depth(50, 20000, 64, stream_rng(20070201, 24),
                                 probe_bits="1" * 40)
    assert tv_distance(a, b) <= 0.03


def test_simulated_depth_reports_budget_exhaustion():
    emp = simulate_insertion_depth(5, 500, 3, stream_rng(1, 1))
    assert 0 < emp.truncation < 1
    assert emp.total() == pytest.approx(1 - emp.truncation, abs=1e-12)
    # 20 keys can never fit under a 3-bit budget: every replicate drops
    with pytest.raises(InsufficientBitsError):
        simulate_insertion_depth(20, 50, 3, stream_rng(1, 2))


def test_simulated_depth_reproducible():
    a = simulate_insertion_depth(10, 500, 64, stream_rng(9, 9))
    b = simulate_insertion_depth(10, 500, 64, stream_rng(9, 9))
    assert a.offset == b.offset and np.array_equal(a.masses, b.masses)
