import itertools

import pytest

from cwlab import fixtures
from cwlab._engine import scalable_pair_ok
from cwlab.completion import _signature_ok, leaf_signature
from cwlab.core import Decision, Leaf, Outcome, StrategyTree, Terminal, Weighing
from cwlab.scaling import CompletionNotFound, InvalidTree, is_scalable, scale_once, triple
from cwlab.search import SearchConfig, search_exists
from cwlab.verifier import verify_fc

EXPECTED = {
    "inline_2_3": True,
    "inline_2_4": False,
    "scalable_3_6": True,
    "balanced_3_4": True,
    "a_4_10": True,
    "b_4_11": False,
    "c_5_20": True,
    "d_6_36": True,
    # the never-separated (5,6) leaves all keep a spare weighing or leave the
    # pair split by the case 3/4 pattern; see the acceptance suite
    "inline_3_6": True,
}


@pytest.mark.parametrize("name, expected", sorted(EXPECTED.items()))
def test_classification(trees, name, expected):
    assert bool(is_scalable(trees[name])) is expected


def test_line_7_is_never_separated(trees):
    report = is_scalable(trees["inline_3_6"])
    lines = {d.line for d in report.together_leaves if set(d.leaf.coins) == {5, 6}}
    assert 7 in lines
    assert "line 7" in report.summary()


def test_four_coin_diagnosis_names_a_leaf(trees):
    report = is_scalable(trees["inline_2_4"])
    assert report.bad_leaves and not report


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_predicate_agrees_with_scaling(trees, name):
    t = trees[name]
    try:
        scale_once(t)
        scaled = True
    except CompletionNotFound:
        scaled = False
    assert bool(is_scalable(t)) is scaled


@pytest.mark.parametrize("w, n", [(1, 2), (2, 3), (2, 4), (3, 5), (3, 6)])
def test_predicate_agrees_on_search_witnesses(w, n):
    for mode in ("solution", "scalable"):
        outcome = search_exists(SearchConfig(w, n, mode))
        if not outcome.found:
            continue
        t = outcome.tree
        try:
            scale_once(t)
            scaled = True
        except CompletionNotFound:
            scaled = False
        assert bool(is_scalable(t)) is scaled


@pytest.mark.parametrize("name", ["inline_2_3", "scalable_3_6", "a_4_10", "c_5_20", "d_6_36"])
def test_scaling_keeps_scalability(trees, name):
    t = trees[name]
    result = scale_once(t)
    assert result.tree.n_coins == 3 * t.n_coins
    assert result.tree.depth == t.depth + result.completion_depth_used
    assert result.completion_depth_used == 2
    assert verify_fc(result.tree).valid
    assert is_scalable(result.tree)


def test_three_coins_scale_to_nine(trees):
    t = scale_once(trees["inline_2_3"]).tree
    assert (t.depth, t.n_coins) == (4, 9)
    assert t.root.weighing == Weighing((1, 2, 3), (4, 5, 6))


def test_prefix_is_replayed_on_triples(trees):
    t = trees["a_4_10"]
    out = scale_once(t).tree
    a, b = t.root, out.root
    for o in (Outcome.BALANCED, Outcome.LEFT_LIGHT):
        assert b.weighing.left == tuple(c for x in a.weighing.left for c in triple(x))
        assert b.weighing.right == tuple(c for x in a.weighing.right for c in triple(x))
        a, b = a.children[o], b.children[o]


def test_four_coins_need_three_extra(trees):
    with pytest.raises(CompletionNotFound) as err:
        scale_once(trees["inline_2_4"])
    assert err.value.path == (Outcome.BALANCED, Outcome.RIGHT_LIGHT)
    result = scale_once(trees["inline_2_4"], allow_depth3=True)
    assert (result.tree.depth, result.tree.n_coins) == (5, 12)
    assert result.completion_depth_used == 3
    assert verify_fc(result.tree).valid


def test_invalid_input_rejected():
    bad = StrategyTree(3, Decision(Weighing((1,), (2,)), (Terminal(Leaf.output(1)),) * 3))
    with pytest.raises(InvalidTree):
        scale_once(bad)
    with pytest.raises(InvalidTree):
        is_scalable(bad)


def _rows(bits_a, bits_b):
    # groups 0 and 1 hold the support, group 2 is an outside chameleon group
    def row(me, other, bits):
        loop, to_other, outside = bits
        return (loop << me) | (to_other << other) | (outside << 2)
    return (row(0, 1, bits_a), row(1, 0, bits_b), 0)


def test_closed_form_matches_completion_table():
    flags = [f for f in itertools.product((0, 1), repeat=3) if any(f)]
    for a, b in itertools.product(flags, repeat=2):
        rows = _rows(a, b)
        assert scalable_pair_ok(rows, 0b11) == _signature_ok(leaf_signature(rows, 0b11)), (a, b)
    for a in flags:
        rows = _rows(a, (0, 0, 0))
        assert scalable_pair_ok(rows, 0b01) == _signature_ok(leaf_signature(rows, 0b01)), a


def test_two_loops_share_a_leaf():
    rows = _rows((1, 0, 0), (1, 0, 0))
    assert scalable_pair_ok(rows, 0b11)
    assert _signature_ok(leaf_signature(rows, 0b11))
