import itertools

import pytest
from hypothesis import given, settings, strategies as st

from cwlab.core import (
    OUTCOMES,
    Outcome,
    PairState,
    Weighing,
    achievable_outcomes,
    filter_state,
    line_number,
    state_statistics,
)
from cwlab.oracle import consistent_pairs

B, L, R = Outcome.BALANCED, Outcome.LEFT_LIGHT, Outcome.RIGHT_LIGHT


@pytest.mark.parametrize("pair, expected", [
    ((1, 2), {L, B}),
    ((3, 4), {B}),
    ((3, 1), {B, L}),
    ((2, 1), {R, B}),
    ((1, 3), {L}),
])
def test_achievable_outcomes(pair, expected):
    assert achievable_outcomes(Weighing((1,), (2,)), pair) == expected


def test_case_analysis_on_three_coins():
    s = PairState.full(3)
    s = filter_state(filter_state(s, Weighing((1,), (2,)), L), Weighing((1,), (3,)), R)
    assert set(s.pairs()) == {(3, 1)}
    s = PairState.full(3)
    s = filter_state(filter_state(s, Weighing((1,), (2,)), B), Weighing((1,), (3,)), B)
    assert set(s.pairs()) == {(2, 1), (3, 1)}


def test_off_scale_weighing_keeps_untouched_state():
    s = PairState.from_pairs(6, [(1, 2), (2, 1), (3, 1)])
    assert filter_state(s, Weighing((5,), (6,)), B) == s


def test_state_statistics():
    full = state_statistics(PairState.full(4))
    assert len(full.fake_support) == 4 and full.bidirectional_count == 6
    one = state_statistics(PairState.from_pairs(3, [(3, 1)]))
    assert one.fake_support == {3} and one.bidirectional_count == 0
    assert state_statistics(PairState.from_pairs(2, [(1, 2), (2, 1)])).bidirectional_count == 1


def test_initial_state_has_all_ordered_pairs():
    assert len(PairState.full(5)) == 20


@pytest.mark.parametrize("left, right", [((1,), ()), ((1, 2), (3,)), ((1,), (1,)), ((0,), (2,))])
def test_bad_weighings_rejected(left, right):
    with pytest.raises(ValueError):
        Weighing(left, right)


def test_line_numbers():
    assert line_number(()) == 0
    assert line_number((L,)) == 2
    assert line_number((L, B)) == 7


@st.composite
def weighings(draw, n):
    coins = draw(st.permutations(range(1, n + 1)))
    k = draw(st.integers(1, n // 2))
    return Weighing(tuple(coins[:k]), tuple(coins[k:2 * k]))


@st.composite
def problems(draw, max_n=5, max_len=4):
    n = draw(st.integers(2, max_n))
    ws = draw(st.lists(weighings(n), min_size=1, max_size=max_len))
    os = draw(st.lists(st.sampled_from(OUTCOMES), min_size=len(ws), max_size=len(ws)))
    return n, ws, os


@settings(max_examples=200, deadline=None)
@given(problems())
def test_filter_matches_choice_enumeration(problem):
    n, ws, os = problem
    s = PairState.full(n)
    for w, o in zip(ws, os):
        s = filter_state(s, w, o)
    assert set(s.pairs()) == consistent_pairs(n, ws, os)


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_split_covers_and_duplicates_only_with_chameleon_on_scale(data):
    n = data.draw(st.integers(2, 7))
    w = data.draw(weighings(n))
    s = PairState.full(n)
    kids = [set(filter_state(s, w, o).pairs()) for o in OUTCOMES]
    for f, c in itertools.permutations(range(1, n + 1), 2):
        hits = sum((f, c) in k for k in kids)
        assert 1 <= hits <= 2
        if hits == 2:
            assert c in w.coins


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_filter_idempotent_and_mirror(data):
    n = data.draw(st.integers(2, 7))
    w = data.draw(weighings(n))
    o = data.draw(st.sampled_from(OUTCOMES))
    once = filter_state(PairState.full(n), w, o)
    assert filter_state(once, w, o) == once
    for pair in itertools.permutations(range(1, n + 1), 2):
        assert achievable_outcomes(w.swapped(), pair) == {x.mirrored() for x in achievable_outcomes(w, pair)}
