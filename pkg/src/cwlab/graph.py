"""Group graphs: the residual when coins are grouped and a group may hold
both non-real coins.

Vertex ``u`` has an edge to ``v`` when the fake may be in group ``u`` and the
chameleon in group ``v``; a loop means both may sit in ``u``.  Rows use the
same bit layout as :class:`cwlab.core.PairState` with diagonal bits allowed,
so outcome updates are the coin-level split applied verbatim.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

from ._engine import graph_stats
from .core import Outcome, Weighing, coins_of, split_rows


class InvalidWeighing(ValueError):
    pass


class GraphStats(NamedTuple):
    D: int
    E: int
    F: int


@dataclass(frozen=True)
class GroupGraph:
    n: int
    rows: tuple[int, ...]

    @classmethod
    def initial(cls, n: int) -> "GroupGraph":
        return cls(n, ((1 << n) - 1,) * n)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "GroupGraph":
        rows = [0] * n
        for u, v in edges:
            rows[u - 1] |= 1 << (v - 1)
        return cls(n, tuple(rows))

    @property
    def edges(self) -> frozenset[tuple[int, int]]:
        return frozenset((u + 1, v) for u, row in enumerate(self.rows) for v in coins_of(row))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u - 1] >> (v - 1) & 1)

    def dump(self) -> str:
        """One ``u v`` edge per line (a plain edge list)."""
        return "".join(f"{u} {v}\n" for u, v in sorted(self.edges))


def update(graph: GroupGraph, weighing: Weighing, outcome: Outcome) -> GroupGraph:
    if max(weighing.coins) > graph.n:
        raise InvalidWeighing(f"{weighing} names a vertex beyond {graph.n}")
    return GroupGraph(graph.n, split_rows(graph.rows, weighing.left_mask, weighing.right_mask)[int(outcome)])


def stats(graph: GroupGraph) -> GraphStats:
    return GraphStats(*graph_stats(graph.rows))


def prune_bound_holds(s: GraphStats, remaining: int, absolute: bool = False) -> bool:
    """``D + ceil(max(E - F, 0) / 6) + F <= 3**remaining``.

    With ``absolute`` the middle term uses ``|E - F|`` instead.  This form
    can reject graphs that do have a finish: a two-coin leaf on a double edge
    may also hold two vertices of E, and the count charges them again.  The
    search only applies it on request; see :func:`leaf_count_bound_holds`.
    """
    extra = abs(s.E - s.F) if absolute else max(s.E - s.F, 0)
    return s.D + -(-extra // 6) + s.F <= 3 ** remaining


def leaf_count_bound_holds(s: GraphStats, remaining: int, cap: int = 2) -> bool:
    """``D + ceil(F / cap) <= 3**remaining``, the sound count: a double edge
    needs a leaf of its own and a leaf holds at most ``cap`` loops."""
    return s.D + -(-s.F // cap) <= 3 ** remaining
