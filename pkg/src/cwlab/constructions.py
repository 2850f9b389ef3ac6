"""Explicit strategy families that need no search."""

from __future__ import annotations

from typing import Callable, Sequence

from .core import Decision, Leaf, Node, StrategyTree, Terminal, Weighing


class TooManyCoins(ValueError):
    pass


def _min_depth(n: int, size: int) -> int:
    d = 0
    while size * 3 ** d < n:
        d += 1
    return d


def _classic(coins: Sequence[int], size: int, finish: Callable[[tuple[int, ...]], Node]) -> Node:
    n = len(coins)
    if n <= size:
        return finish(tuple(coins))
    cap = size * 3 ** (_min_depth(n, size) - 1)
    p = max(1, -(-(n - cap) // 2))
    left, right, off = coins[:p], coins[p:2 * p], coins[2 * p:]
    return Decision(Weighing(tuple(left), tuple(right)),
                    (_classic(off, size, finish), _classic(left, size, finish), _classic(right, size, finish)))


def classic_fake_tree(coins: Sequence[int], w: int, output_size: int = 1,
                      finish: Callable[[tuple[int, ...]], Node] | None = None) -> Node:
    """Ternary search for one light coin among ``coins`` (no chameleon present).

    Leaves name at most ``output_size`` candidates; ``finish`` may replace
    each final candidate tuple by a subtree.
    """
    if output_size not in (1, 2):
        raise ValueError("output_size must be 1 or 2")
    coins = list(coins)
    if len(coins) > output_size * 3 ** w:
        raise TooManyCoins(f"{len(coins)} coins exceed {output_size}*3^{w}")
    if finish is None:
        finish = lambda cand: Terminal(Leaf.output(*cand))  # noqa: E731
    return _classic(coins, output_size, finish)


def _pair_search(first: Sequence[int], second: Sequence[int]) -> Node:
    # one non-real coin in each group: find the light one in each, output both
    def after_first(a):
        if not a:
            return Terminal(Leaf.impossible())
        return _classic(list(second), 1, lambda b: Terminal(Leaf.output(a[0], *b)))

    return _classic(list(first), 1, after_first)


def _power(coins: list[int]) -> Node:
    if len(coins) == 1:
        return Terminal(Leaf.output(coins[0]))
    m = len(coins) // 3
    x1, x2, x3 = coins[:m], coins[m:2 * m], coins[2 * m:]

    def after(light):
        # ``light`` was the lighter pan of the first weighing
        return Decision(Weighing(tuple(light), tuple(x3)), (
            _pair_search(light, x3),
            _power(light),
            _classic(x3, 1, lambda c: Terminal(Leaf.output(*c))),
        ))

    balanced = Decision(Weighing(tuple(x1), tuple(x3)), (
        _classic(x2 + x3, 2, lambda c: Terminal(Leaf.output(*c))),
        _pair_search(x1, x2),
        _power(x3),
    ))
    return Decision(Weighing(tuple(x1), tuple(x2)), (balanced, after(x1), after(x2)))


def generate_power_solution(n: int) -> StrategyTree:
    """A ``(2n, 3**n)`` solution built by splitting into thirds."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return StrategyTree(3 ** n, _power(list(range(1, 3 ** n + 1))))
