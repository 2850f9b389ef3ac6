"""Domain types and balance semantics for one fake coin plus one chameleon.

Coins are numbered ``1..n``.  The fake coin is lighter than a real coin by one
unit; the chameleon, independently for every weighing, either mimics a real
coin or the fake.  A pan's *deficit* is the number of light-behaving coins on
it and the pan with the larger deficit goes up (is lighter).

A :class:`PairState` is the set of ordered ``(fake, chameleon)`` assignments
still consistent with the outcomes seen so far.  It is stored as one bitmask
row per fake candidate: bit ``c - 1`` of ``rows[f - 1]`` is set when ``(f, c)``
is still possible.  Diagonal bits never appear at coin level; the group graph
in :mod:`cwlab.graph` reuses the same rows with loops switched on.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union


class MalformedTree(ValueError):
    """A strategy tree violates a structural invariant."""


class Outcome(enum.IntEnum):
    """Result of a weighing; the value is the child index in a decision node."""

    BALANCED = 0
    LEFT_LIGHT = 1
    RIGHT_LIGHT = 2

    def mirrored(self) -> "Outcome":
        if self is Outcome.BALANCED:
            return self
        return Outcome.RIGHT_LIGHT if self is Outcome.LEFT_LIGHT else Outcome.LEFT_LIGHT

    @property
    def symbol(self) -> str:
        return "=<>"[self.value]


OUTCOMES = (Outcome.BALANCED, Outcome.LEFT_LIGHT, Outcome.RIGHT_LIGHT)


def mask_of(coins: Iterable[int]) -> int:
    m = 0
    for c in coins:
        m |= 1 << (c - 1)
    return m


def coins_of(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length())
        mask ^= low
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class Weighing:
    """Two equal, disjoint pans.  Written order of the coins is preserved."""

    left: tuple[int, ...]
    right: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "left", tuple(int(c) for c in self.left))
        object.__setattr__(self, "right", tuple(int(c) for c in self.right))
        if not self.left or len(self.left) != len(self.right):
            raise ValueError(f"pans must be non-empty and equal: {self.left} v {self.right}")
        both = self.left + self.right
        if len(set(both)) != len(both):
            raise ValueError(f"a coin appears twice in {self.left} v {self.right}")
        if min(both) < 1:
            raise ValueError("coin ids start at 1")

    @property
    def left_mask(self) -> int:
        return mask_of(self.left)

    @property
    def right_mask(self) -> int:
        return mask_of(self.right)

    @property
    def coins(self) -> frozenset[int]:
        return frozenset(self.left + self.right)

    def side(self, coin: int) -> int:
        """+1 on the left pan, -1 on the right pan, 0 off the scale."""
        if coin in self.left:
            return 1
        if coin in self.right:
            return -1
        return 0

    def swapped(self) -> "Weighing":
        return Weighing(self.right, self.left)

    def relabel(self, mapping) -> "Weighing":
        return Weighing(tuple(mapping(c) for c in self.left), tuple(mapping(c) for c in self.right))

    def sort_key(self):
        return (len(self.left), tuple(sorted(self.left)), tuple(sorted(self.right)))

    def __str__(self) -> str:
        return " ".join(map(str, self.left)) + " v " + " ".join(map(str, self.right))


class LeafKind(enum.Enum):
    OUTPUT1 = "output1"
    OUTPUT2 = "output2"
    FAKESET = "fakeset"
    IMPOSSIBLE = "impossible"


@dataclass(frozen=True)
class Leaf:
    kind: LeafKind
    coins: tuple[int, ...] = ()

    def __post_init__(self):
        coins = tuple(int(c) for c in self.coins)
        object.__setattr__(self, "coins", coins)
        expected = {LeafKind.OUTPUT1: 1, LeafKind.OUTPUT2: 2, LeafKind.IMPOSSIBLE: 0}
        if self.kind in expected and len(coins) != expected[self.kind]:
            raise ValueError(f"{self.kind.value} leaf takes {expected[self.kind]} coins, got {coins}")
        if len(set(coins)) != len(coins):
            raise ValueError(f"repeated coin in leaf {coins}")
        if self.kind is LeafKind.FAKESET and not 3 <= len(coins) <= 6:
            raise ValueError(f"fake-set leaf must list 3..6 coins, got {len(coins)}")

    @classmethod
    def output(cls, *coins: int) -> "Leaf":
        if len(coins) == 0:
            return cls(LeafKind.IMPOSSIBLE)
        if len(coins) == 1:
            return cls(LeafKind.OUTPUT1, coins)
        if len(coins) == 2:
            return cls(LeafKind.OUTPUT2, coins)
        return cls(LeafKind.FAKESET, coins)

    @classmethod
    def impossible(cls) -> "Leaf":
        return cls(LeafKind.IMPOSSIBLE)

    @property
    def mask(self) -> int:
        return mask_of(self.coins)

    def relabel(self, mapping) -> "Leaf":
        return Leaf(self.kind, tuple(mapping(c) for c in self.coins))

    def __str__(self) -> str:
        if self.kind is LeafKind.FAKESET:
            return "{" + ",".join(map(str, self.coins)) + "}"
        return "(" + ",".join(map(str, self.coins)) + ")"


@dataclass(frozen=True)
class Terminal:
    leaf: Leaf


@dataclass(frozen=True)
class Decision:
    weighing: Weighing
    children: tuple["Node", "Node", "Node"]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if len(self.children) != 3:
            raise MalformedTree(f"decision on {self.weighing} has {len(self.children)} children")


Node = Union[Decision, Terminal]


def node_depth(node: Node) -> int:
    if isinstance(node, Terminal):
        return 0
    return 1 + max(node_depth(ch) for ch in node.children)


def iter_nodes(node: Node, path: tuple = ()) -> Iterator[tuple[tuple[Outcome, ...], Node]]:
    """Pre-order walk yielding ``(path, node)``; children in outcome order."""
    yield path, node
    if isinstance(node, Decision):
        for o, ch in zip(OUTCOMES, node.children):
            yield from iter_nodes(ch, path + (o,))


def relabel_node(node: Node, mapping) -> Node:
    if isinstance(node, Terminal):
        return Terminal(node.leaf.relabel(mapping))
    return Decision(node.weighing.relabel(mapping), tuple(relabel_node(ch, mapping) for ch in node.children))


def line_number(path: Sequence[Outcome]) -> int:
    """Canonical line number of the decision reached by ``path`` (root is 0)."""
    line = 0
    for o in path:
        line = 3 * line + 1 + int(o)
    return line


@dataclass(frozen=True)
class StrategyTree:
    n_coins: int
    root: Node

    def __post_init__(self):
        if self.n_coins < 2:
            raise MalformedTree("need at least two coins")
        for path, node in iter_nodes(self.root):
            if isinstance(node, Decision):
                coins = node.weighing.coins
            else:
                coins = node.leaf.coins
            if coins and max(coins) > self.n_coins:
                raise MalformedTree(f"coin {max(coins)} out of range at path {path}")

    @property
    def depth(self) -> int:
        return node_depth(self.root)

    def leaves(self) -> Iterator[tuple[tuple[Outcome, ...], Leaf]]:
        for path, node in iter_nodes(self.root):
            if isinstance(node, Terminal):
                yield path, node.leaf

    def count_leaves(self) -> int:
        return sum(1 for _ in self.leaves())


@dataclass(frozen=True)
class PairState:
    """Consistent ``(fake, chameleon)`` assignments as bitmask rows."""

    n_coins: int
    rows: tuple[int, ...]

    @classmethod
    def full(cls, n: int) -> "PairState":
        everything = (1 << n) - 1
        return cls(n, tuple(everything & ~(1 << i) for i in range(n)))

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "PairState":
        rows = [0] * n
        for f, c in pairs:
            if f == c or not (1 <= f <= n and 1 <= c <= n):
                raise ValueError(f"invalid pair {(f, c)} for {n} coins")
            rows[f - 1] |= 1 << (c - 1)
        return cls(n, tuple(rows))

    def pairs(self) -> list[tuple[int, int]]:
        return [(f + 1, c) for f, row in enumerate(self.rows) for c in coins_of(row)]

    def __contains__(self, pair) -> bool:
        f, c = pair
        return bool(self.rows[f - 1] >> (c - 1) & 1)

    def __len__(self) -> int:
        return sum(popcount(r) for r in self.rows)

    def __bool__(self) -> bool:
        return any(self.rows)

    @property
    def support_mask(self) -> int:
        m = 0
        for i, row in enumerate(self.rows):
            if row:
                m |= 1 << i
        return m

    @property
    def fake_support(self) -> frozenset[int]:
        return frozenset(i + 1 for i, row in enumerate(self.rows) if row)

    @property
    def chameleon_mask(self) -> int:
        m = 0
        for row in self.rows:
            m |= row
        return m


def achievable_outcomes(weighing: Weighing, pair: tuple[int, int]) -> frozenset[Outcome]:
    """Outcomes the chameleon can produce when ``pair = (fake, chameleon)``."""
    f, c = pair
    out = set()
    for mimic in (0, 1):
        left = (f in weighing.left) + mimic * (c in weighing.left)
        right = (f in weighing.right) + mimic * (c in weighing.right)
        if left > right:
            out.add(Outcome.LEFT_LIGHT)
        elif right > left:
            out.add(Outcome.RIGHT_LIGHT)
        else:
            out.add(Outcome.BALANCED)
    return frozenset(out)


def split_rows(rows: Sequence[int], left: int, right: int) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
    """Children of ``rows`` for the three outcomes of weighing ``left`` v ``right``.

    Works for coin-level states and for group graphs with loops alike.
    """
    bal, lo, hi = [], [], []
    for i, row in enumerate(rows):
        bit = 1 << i
        if not row:
            bal.append(0)
            lo.append(0)
            hi.append(0)
        elif left & bit:
            bal.append(row & right)
            lo.append(row)
            hi.append(0)
        elif right & bit:
            bal.append(row & left)
            lo.append(0)
            hi.append(row)
        else:
            bal.append(row)
            lo.append(row & left)
            hi.append(row & right)
    return tuple(bal), tuple(lo), tuple(hi)


def filter_state(state: PairState, weighing: Weighing, outcome: Outcome) -> PairState:
    if weighing.coins and max(weighing.coins) > state.n_coins:
        raise ValueError(f"weighing {weighing} mentions a coin beyond {state.n_coins}")
    children = split_rows(state.rows, weighing.left_mask, weighing.right_mask)
    return PairState(state.n_coins, children[int(outcome)])


@dataclass(frozen=True)
class StateStatistics:
    fake_support: frozenset[int]
    bidirectional_count: int


def bidirectional_count(rows: Sequence[int]) -> int:
    d = 0
    for i, row in enumerate(rows):
        higher = row >> (i + 1)
        j = i + 1
        while higher:
            if higher & 1 and rows[j] >> i & 1:
                d += 1
            higher >>= 1
            j += 1
    return d


def state_statistics(state: PairState) -> StateStatistics:
    return StateStatistics(state.fake_support, bidirectional_count(state.rows))
