import random

import pytest

from cwlab import fixtures
from cwlab.codec import parse
from cwlab.core import (
    OUTCOMES,
    Decision,
    Leaf,
    LeafKind,
    MalformedTree,
    PairState,
    StrategyTree,
    Terminal,
    Weighing,
    filter_state,
)
from cwlab.oracle import all_weighings, brute_verify_fc, brute_verify_ff, reachable_leaves
from cwlab.verifier import residual_at, verify, verify_fc, verify_ff, verify_pseudo

from conftest import path_to_line

FC_FIXTURES = [name for name, (_, _, mode) in fixtures.CATALOG.items() if mode == "fc"]


@pytest.mark.parametrize("name", FC_FIXTURES)
def test_fixture_valid_in_every_mode(trees, name):
    t = trees[name]
    assert verify_fc(t).valid
    assert verify_ff(t).valid
    assert verify_pseudo(t).valid


def test_pseudo_fixture_only_valid_as_pseudo(trees):
    t = trees["pseudo_4_11"]
    assert verify_pseudo(t).valid
    fc = verify_fc(t)
    assert not fc.valid
    assert all(v.leaf.kind is LeafKind.FAKESET for v in fc.violations)


@pytest.mark.parametrize("name, line, slot", [("inline_3_6", 4, 0), ("d_6_36", 203, 2)])
def test_impossible_branches_unreachable(trees, name, line, slot):
    t = trees[name]
    path = path_to_line(line)
    node = t.root
    for o in path:
        node = node.children[o]
    assert node.children[slot] == Terminal(Leaf.impossible())
    assert not residual_at(t, path + (OUTCOMES[slot],))


def test_two_coins_no_weighing():
    t = StrategyTree(2, Terminal(Leaf.output(1, 2)))
    assert verify_fc(t).valid
    assert verify_ff(t).valid


def test_swapped_outputs_give_witness():
    text = fixtures.text("inline_2_4").replace("(3, 4), (1, 2), (3, 4)", "(1, 2), (3, 4), (3, 4)")
    text = text.replace("(3,4), (1,2), (3,4)", "(1,2), (3,4), (3,4)")
    t = parse(text, 4)
    report = verify_fc(t)
    assert not report.valid
    f, c = report.violations[0].witness
    ok, oracle_witness = brute_verify_fc(t)
    assert not ok and oracle_witness is not None
    # the verifier's witness really reaches the bad leaf
    leaf = report.violations[0].leaf
    assert any(term.leaf == leaf and f not in leaf.coins for _, term in reachable_leaves(t, f, c))


def test_ff_on_three_coins(trees):
    assert verify_ff(trees["inline_2_3"]).valid
    assert brute_verify_ff(trees["inline_2_3"])


def test_single_output_fails_ff():
    assert not verify_ff(StrategyTree(3, Terminal(Leaf.output(1)))).valid


def test_pseudo_set_missing_the_fake():
    text = fixtures.text("pseudo_4_11").replace("{3,4,9,10,11}", "{3,4,10,11}")
    t = parse(text, 11)
    report = verify_pseudo(t)
    assert not report.valid
    bad = report.violations[0]
    assert bad.leaf.coins == (3, 4, 10, 11)
    f, c = bad.witness
    assert f == 9
    assert any(term.leaf == bad.leaf for _, term in reachable_leaves(t, f, c))


def test_coin_out_of_range_is_malformed():
    with pytest.raises(MalformedTree):
        StrategyTree(2, Decision(Weighing((1,), (3,)), (Terminal(Leaf.output(1, 2)),) * 3))


def test_reports_are_deterministic(trees):
    t = trees["pseudo_4_11"]
    a, b = verify_fc(t), verify_fc(t)
    assert a.to_dict() == b.to_dict()
    paths = [v.path for v in a.violations]
    assert paths == sorted(paths)


def test_mode_by_name(trees):
    assert verify(trees["a_4_10"], "fc").valid
    assert not verify(trees["pseudo_4_11"], "fc").valid


def random_tree(rng: random.Random, n: int, depth: int) -> StrategyTree:
    pool = all_weighings(n)

    def build(state, r):
        if r == 0 or rng.random() < 0.2:
            support = sorted(state.fake_support)
            roll = rng.random()
            if not state and roll < 0.5:
                return Terminal(Leaf.impossible())
            if 1 <= len(support) <= 2 and roll < 0.7:
                return Terminal(Leaf.output(*support))
            kind = rng.randrange(3)
            if kind == 0:
                return Terminal(Leaf.impossible())
            coins = rng.sample(range(1, n + 1), kind)
            return Terminal(Leaf.output(*coins))
        w = rng.choice(pool)
        return Decision(w, tuple(build(filter_state(state, w, o), r - 1) for o in OUTCOMES))

    return StrategyTree(n, build(PairState.full(n), depth))


def test_verifier_matches_brute_force_on_corpus():
    rng = random.Random(20260101)
    valid = 0
    for i in range(1500):
        n = 2 + i % 3
        t = random_tree(rng, n, 1 + i % 3)
        expect, _ = brute_verify_fc(t)
        assert verify_fc(t).valid == expect
        valid += expect
    # the corpus exercises both verdicts
    assert 50 < valid < 1450
