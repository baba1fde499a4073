import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equgen import partition as pt
from equgen.partition import Partition, parse_partition

from oracles import bell_triangle, join_pairs, pairs_of_labels


def P(text, n):
    return parse_partition(text, n)


def test_parse_both_notations():
    assert P("eq(12;3;45;6)", 6) == P("0,1|2|3,4|5", 6)
    assert P("eq(12;3;45;6)", 6).rgs == (0, 0, 1, 2, 2, 3)
    assert P("  0,1 | 2 ", 3).block_count == 2


def test_format_round_trip():
    p = P("0,3,5|1,2,4", 6)
    assert p.format() == "0,3,5|1,2,4"
    assert p.format_eq() == "eq(146;235)"
    assert P(p.format_eq(), 6) == p


@pytest.mark.parametrize("text,n,pos", [
    ("eq(12;3;4", 4, 9),
    ("0,1|1", 2, 4),
    ("0,1|x", 3, 4),
    ("eq(12;3)", 4, None),
])
def test_parse_errors(text, n, pos):
    with pytest.raises(pt.PartitionParseError) as info:
        P(text, n)
    if pos is not None:
        assert info.value.position == pos


def test_out_of_range_and_missing():
    with pytest.raises(pt.PartitionError):
        P("0,1|2,3", 3)
    with pytest.raises(pt.PartitionError):
        Partition.from_blocks(3, [[0], [1]])


def test_meet_join_small():
    a = P("eq(12;3;45;6)", 6)
    b = P("eq(1;2;34;5;6)", 6)
    assert a | b == P("eq(12;345;6)", 6)
    assert a & P("eq(1234;56)", 6) == P("eq(12;3;4;5;6)", 6)


def test_size_mismatch():
    with pytest.raises(pt.SizeMismatchError):
        pt.join(pt.top(3), pt.top(4))


def test_bottom_top_atom():
    assert pt.bottom(4).block_count == 4
    assert pt.top(4).block_count == 1
    a = pt.atom(5, 3, 1)
    assert a.blocks() == [[0], [1, 3], [2], [4]]
    with pytest.raises(pt.PartitionError):
        pt.atom(5, 2, 2)


def test_complementary():
    assert pt.is_complementary(P("eq(12;3;45;6)", 6), P("eq(146;235)", 6))
    assert not pt.is_complementary(P("eq(12;3;45;6)", 6), pt.bottom(6))


def test_embed_keeps_blocks_and_adds_singletons():
    p = P("0,2|1", 3)
    assert pt.embed(p, 5) == P("0,2|1|3|4", 5)


@pytest.mark.parametrize("n", range(1, 10))
def test_bell_matches_triangle(n):
    assert pt.bell(n) == bell_triangle(n)


def test_enumeration_is_lexicographic_and_distinct():
    parts = list(pt.enumerate_partitions(5))
    rgs = [p.rgs for p in parts]
    assert rgs == sorted(rgs)
    assert len(set(rgs)) == 52


def test_enumeration_limit():
    with pytest.raises(pt.LimitExceededError):
        list(pt.enumerate_partitions(14))


def test_partition_set_io_round_trip():
    parts = [P("eq(12;3;45;6)", 6), P("eq(146;235)", 6)]
    text = pt.write_partition_set(parts)
    assert text.splitlines()[0] == "n=6"
    assert pt.read_partition_set(text) == parts
    with pytest.raises(pt.PartitionParseError):
        pt.read_partition_set("0|1\n")


@pytest.mark.parametrize("n", range(1, 7))
def test_join_matches_pair_oracle_exhaustively(n):
    parts = list(pt.enumerate_partitions(n))
    rel = {p: pairs_of_labels(p.rgs) for p in parts}
    for p, q in itertools.product(parts, repeat=2):
        assert (p | q).pairs() == join_pairs(rel[p], rel[q], n)
        assert (p & q).pairs() == rel[p] & rel[q]


def partitions(n):
    return st.lists(st.integers(0, n - 1), min_size=n, max_size=n).map(Partition.from_labels)


@st.composite
def triples(draw):
    n = draw(st.integers(4, 10))
    return draw(partitions(n)), draw(partitions(n)), draw(partitions(n))


@settings(max_examples=300, deadline=None)
@given(triples())
def test_lattice_laws(t):
    x, y, z = t
    assert x | y == y | x and x & y == y & x
    assert (x | y) | z == x | (y | z)
    assert (x & y) & z == x & (y & z)
    assert x | (x & y) == x and x & (x | y) == x
    assert x | x == x and x & x == x
    assert (x <= y) == (x & y == x) == (x | y == y)
