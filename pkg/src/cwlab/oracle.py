"""Brute-force reference semantics.

Nothing here uses the bitmask algebra: every ``(fake, chameleon)`` assignment
and every sequence of chameleon choices is simulated with explicit coin
weights.  Slow, but small enough to cross-check the fast code for a handful
of coins.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

from .core import Decision, LeafKind, Outcome, StrategyTree, Terminal, Weighing

REAL = 10
LIGHT = 9


def weigh(weighing: Weighing, fake: int, chameleon: int, mimic: bool) -> Outcome:
    def weight(coin):
        if coin == fake or (coin == chameleon and mimic):
            return LIGHT
        return REAL

    left = sum(weight(c) for c in weighing.left)
    right = sum(weight(c) for c in weighing.right)
    if left < right:
        return Outcome.LEFT_LIGHT
    if right < left:
        return Outcome.RIGHT_LIGHT
    return Outcome.BALANCED


def consistent_pairs(n: int, weighings: Sequence[Weighing], outcomes: Sequence[Outcome]) -> set[tuple[int, int]]:
    """All ``(f, c)`` for which some choice sequence reproduces ``outcomes``."""
    out = set()
    for f, c in itertools.permutations(range(1, n + 1), 2):
        for choices in itertools.product((False, True), repeat=len(weighings)):
            if all(weigh(w, f, c, x) == o for w, x, o in zip(weighings, choices, outcomes)):
                out.add((f, c))
                break
    return out


def reachable_leaves(tree: StrategyTree, fake: int, chameleon: int) -> list[tuple[tuple[Outcome, ...], Terminal]]:
    """Every leaf the chameleon can steer the tree to."""
    found = []

    def walk(node, path):
        if isinstance(node, Terminal):
            found.append((path, node))
            return
        seen = set()
        for mimic in (False, True):
            o = weigh(node.weighing, fake, chameleon, mimic)
            if o not in seen:
                seen.add(o)
                walk(node.children[o], path + (o,))

    walk(tree.root, ())
    return found


def brute_verify_fc(tree: StrategyTree) -> tuple[bool, tuple[int, int] | None]:
    """``(valid, witness)``; the witness is the first failing ``(fake, chameleon)``."""
    n = tree.n_coins
    for f, c in itertools.permutations(range(1, n + 1), 2):
        for _, leaf_node in reachable_leaves(tree, f, c):
            leaf = leaf_node.leaf
            if leaf.kind in (LeafKind.IMPOSSIBLE, LeafKind.FAKESET) or f not in leaf.coins:
                return False, (f, c)
    return True, None


def brute_verify_ff(tree: StrategyTree) -> bool:
    n = tree.n_coins
    for a, b in itertools.combinations(range(1, n + 1), 2):
        node = tree.root
        while isinstance(node, Decision):
            w = node.weighing
            left = sum(c in (a, b) for c in w.left)
            right = sum(c in (a, b) for c in w.right)
            o = Outcome.LEFT_LIGHT if left > right else Outcome.RIGHT_LIGHT if right > left else Outcome.BALANCED
            node = node.children[o]
        if node.leaf.kind is not LeafKind.OUTPUT2 or set(node.leaf.coins) != {a, b}:
            return False
    return True


def all_weighings(n: int, coins: Iterable[int] | None = None) -> list[Weighing]:
    pool = sorted(coins) if coins is not None else list(range(1, n + 1))
    out = []
    for p in range(1, len(pool) // 2 + 1):
        for left in itertools.combinations(pool, p):
            rest = [c for c in pool if c not in left]
            for right in itertools.combinations(rest, p):
                if left < right:
                    out.append(Weighing(left, right))
    return out
