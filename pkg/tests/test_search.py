import pytest

from cwlab.constructions import TooManyCoins, classic_fake_tree, generate_power_solution
from cwlab.core import Decision, StrategyTree, Terminal, iter_nodes
from cwlab.scaling import is_scalable
from cwlab.search import (
    BudgetExceeded,
    ExhaustedNoSolution,
    InfeasibleDepth,
    PruneFlags,
    SearchConfig,
    SearchMode,
    search_best,
    search_exists,
)
from cwlab.verifier import verify_fc, verify_ff, verify_pseudo


@pytest.mark.parametrize("w, n, found", [
    (1, 2, True), (1, 3, False), (2, 4, True), (2, 5, False), (3, 6, True), (3, 7, False),
])
def test_solution_verdicts_with_and_without_pruning(w, n, found):
    on = search_exists(SearchConfig(w, n))
    off = search_exists(SearchConfig(w, n, prune=PruneFlags.none()))
    assert on.found is found and off.found is found
    if found:
        assert verify_fc(on.tree).valid and verify_ff(on.tree).valid
        assert on.tree.depth <= w


@pytest.mark.parametrize("w, n", [(1, 2), (1, 3), (2, 3), (2, 4), (2, 5), (3, 4), (3, 5)])
def test_symmetry_reduction_keeps_verdicts(w, n):
    a = search_exists(SearchConfig(w, n))
    b = search_exists(SearchConfig(w, n, symmetry=False))
    assert a.found == b.found
    assert b.nodes_explored >= a.nodes_explored


@pytest.mark.parametrize("w, n, found", [(2, 3, True), (2, 4, False), (3, 6, True), (3, 7, False)])
def test_scalable_verdicts(w, n, found):
    for prune in (PruneFlags(), PruneFlags.none()):
        outcome = search_exists(SearchConfig(w, n, SearchMode.SCALABLE, prune))
        assert outcome.found is found
        if found:
            assert is_scalable(outcome.tree)


def test_literal_loop_bound_prunes_seven_at_root():
    outcome = search_exists(SearchConfig(3, 7, "scalable", PruneFlags(literal_def_bound=True)))
    assert outcome.verdict == ExhaustedNoSolution(pruned_at_root=True)


def test_literal_loop_bound_loses_a_real_solution():
    literal = search_exists(SearchConfig(3, 6, "scalable", PruneFlags(literal_def_bound=True)))
    assert not literal.found
    assert search_exists(SearchConfig(3, 6, "scalable")).found


def test_one_weighing_three_coins():
    assert isinstance(search_exists(SearchConfig(1, 3)).verdict, ExhaustedNoSolution)


def test_pseudo_search():
    outcome = search_exists(SearchConfig(3, 6, "pseudo"))
    assert outcome.found and verify_pseudo(outcome.tree).valid
    assert not search_exists(SearchConfig(3, 8, "pseudo")).found


def test_search_is_deterministic():
    a = search_exists(SearchConfig(3, 6))
    b = search_exists(SearchConfig(3, 6))
    assert a.tree == b.tree and a.nodes_explored == b.nodes_explored


def test_parallel_witness_matches_sequential():
    seq = search_exists(SearchConfig(4, 9, threads=1))
    par = search_exists(SearchConfig(4, 9, threads=2))
    assert seq.found and par.tree == seq.tree


def test_witness_weighings_are_canonical():
    t = search_exists(SearchConfig(3, 6)).tree
    assert t.root.weighing.left == tuple(sorted(t.root.weighing.left))
    assert t.root.weighing.left < t.root.weighing.right


def test_node_budget():
    outcome = search_exists(SearchConfig(4, 11, node_budget=5))
    assert isinstance(outcome.verdict, BudgetExceeded)
    assert "open pairs" in outcome.verdict.frontier
    assert not outcome.found


def test_progress_callback():
    seen = []
    search_exists(SearchConfig(3, 6, progress=lambda nodes, r, state: seen.append((nodes, r))))
    assert seen and all(0 <= r <= 3 for _, r in seen)


@pytest.mark.parametrize("w, best", [(1, 2), (2, 4), (3, 6)])
def test_search_best(w, best):
    n, tree = search_best(w)
    assert n == best and tree.n_coins == best and verify_fc(tree).valid


def test_search_best_ceiling():
    with pytest.raises(InfeasibleDepth):
        search_best(5)


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(-1, 3)
    with pytest.raises(ValueError):
        SearchConfig(2, 1)


@pytest.mark.parametrize("n, w, n_coins", [(1, 2, 3), (2, 4, 9), (3, 6, 27)])
def test_power_solutions(n, w, n_coins):
    t = generate_power_solution(n)
    assert (t.depth, t.n_coins) == (w, n_coins)
    assert verify_fc(t).valid and is_scalable(t)


def _leaf_sets(node):
    return [len(x.leaf.coins) for _, x in iter_nodes(node) if isinstance(x, Terminal)]


def test_classic_nine_exact():
    node = classic_fake_tree(range(1, 10), 2, 1)
    assert max(_leaf_sets(node)) == 1
    assert StrategyTree(9, node).depth == 2


def test_classic_eighteen_pairs():
    node = classic_fake_tree(range(1, 19), 2, 2)
    assert max(_leaf_sets(node)) <= 2
    assert StrategyTree(18, node).depth == 2


def test_classic_four_coins_one_weighing():
    node = classic_fake_tree([1, 2, 3, 4], 1, 2)
    assert isinstance(node, Decision)
    assert node.weighing.left == (1,) and node.weighing.right == (2,)
    assert node.children[0].leaf.coins == (3, 4)


def test_classic_too_many():
    with pytest.raises(TooManyCoins):
        classic_fake_tree(range(1, 11), 2, 1)
    with pytest.raises(TooManyCoins):
        classic_fake_tree(range(1, 20), 2, 2)
