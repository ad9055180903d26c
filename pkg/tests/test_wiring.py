import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hexlogit.errors import ResourceLimitError
from hexlogit.wiring import (
    DYAD_LABELS,
    INFORMATIVE_1,
    INFORMATIVE_2,
    NODE_FE_WIRINGS,
    count_hexad_pairs_by_overlap,
    degree_sequence_of,
    enumerate_wirings,
    fe_multiset,
    find_identifying_pairs,
    mask_from_triads,
    n_ordered_hexads,
    popcount,
    triads_of,
    verify_minimality,
)

# the eight wirings with every node in exactly two hyperedges, as triad sets
TOP_WIRINGS = [
    {(1, 1, 1), (2, 1, 2), (2, 2, 1), (1, 2, 2)},
    {(2, 2, 2), (1, 1, 2), (2, 1, 1), (1, 2, 1)},
    {(1, 1, 1), (1, 1, 2), (2, 2, 1), (2, 2, 2)},
    {(1, 1, 1), (1, 2, 1), (2, 1, 2), (2, 2, 2)},
    {(1, 1, 1), (2, 1, 1), (1, 2, 2), (2, 2, 2)},
    {(1, 1, 2), (1, 2, 1), (2, 1, 2), (2, 2, 1)},
    {(1, 1, 2), (2, 1, 1), (1, 2, 2), (2, 2, 1)},
    {(1, 2, 1), (2, 1, 1), (1, 2, 2), (2, 1, 2)},
]


def test_degree_sequences():
    assert degree_sequence_of(mask_from_triads([(1, 1, 2), (1, 1, 1), (2, 2, 1)])) == (2, 2, 2, 1, 1, 1)
    assert degree_sequence_of(0) == (0,) * 6
    assert degree_sequence_of(255) == (4,) * 6


@given(st.integers(0, 255))
def test_mask_round_trip_and_degree_total(mask):
    assert mask_from_triads(triads_of(mask)) == mask
    assert sum(degree_sequence_of(mask)) == 6 * popcount(mask) // 2


def test_top_sequence_has_exactly_eight_wirings():
    ws = enumerate_wirings((2,) * 6)
    assert len(ws) == 8
    assert ws == sorted(ws)
    assert {frozenset(triads_of(m)) for m in ws} == {frozenset(t) for t in TOP_WIRINGS}
    assert set(triads_of(INFORMATIVE_1)) == TOP_WIRINGS[0]
    assert set(triads_of(INFORMATIVE_2)) == TOP_WIRINGS[1]


def test_trivial_sequences():
    assert enumerate_wirings((0,) * 6) == [0]
    ws = enumerate_wirings((1,) * 6)
    assert sorted(ws) == sorted(NODE_FE_WIRINGS)


@given(st.integers(0, 255))
def test_enumerate_is_inverse_of_degree_sequence(mask):
    assert mask in enumerate_wirings(degree_sequence_of(mask))


def test_fe_multiset():
    assert fe_multiset(mask_from_triads([(1, 1, 1)])) == {"A11": 1, "B11": 1, "C11": 1}
    assert not fe_multiset(0)
    full = fe_multiset(INFORMATIVE_1)
    assert set(full) == set(DYAD_LABELS) and set(full.values()) == {1}
    assert fe_multiset(INFORMATIVE_1) == fe_multiset(INFORMATIVE_2)


@given(st.integers(0, 255))
def test_fe_total_is_three_per_link(mask):
    assert sum(fe_multiset(mask).values()) == 3 * popcount(mask)
    assert sum(fe_multiset(mask, "node").values()) == 3 * popcount(mask)


def test_identifying_pairs():
    assert find_identifying_pairs(enumerate_wirings((2,) * 6)) == [(INFORMATIVE_1, INFORMATIVE_2)]
    assert len(find_identifying_pairs(enumerate_wirings((1,) * 6), "node")) == 6
    assert find_identifying_pairs([INFORMATIVE_1]) == []


def test_minimality_sweeps():
    full = verify_minimality()
    assert full["passed"] and full["sequences_swept"] == 3**6 - 1
    part = verify_minimality(predicate=lambda d: 0 in d)
    assert part["passed"] and part["sequences_swept"] == 3**6 - 2**6
    top = verify_minimality(include_top=True)
    assert top["flagged"] == {"2,2,2,2,2,2": [[INFORMATIVE_1, INFORMATIVE_2]]}


def test_pair_overlap_counts_small():
    assert count_hexad_pairs_by_overlap(2) == {(2, 2, 2): 64}
    c3 = count_hexad_pairs_by_overlap(3)
    assert sum(c3.values()) == n_ordered_hexads(3) ** 2 == 216**2
    assert c3[(2, 2, 2)] == 1728
    assert set(itertools.chain.from_iterable(c3)) <= {0, 1, 2}


def test_pair_overlap_count_limit():
    with pytest.raises(ResourceLimitError):
        count_hexad_pairs_by_overlap(5)
