"""Composition: run a K-coin solution on groups of ``a`` coins, then finish
the two surviving groups plus the leftover coins.

The second stage is found by completion search on the exact coin-level
residual at each leaf, so leaves the K-coin tree marks impossible (reachable
when the fake is among the leftover coins) are finished too.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import fixtures
from .bounds import fc_upper
from .completion import complete
from .core import OUTCOMES, Decision, Leaf, Node, Outcome, StrategyTree, Terminal, Weighing
from .search import SearchConfig, search_exists
from .verifier import VerificationReport, split_sparse, verify_fc


class NoBaseSolution(ValueError):
    pass


@dataclass
class CompositionResult:
    n: int
    group_size: int
    groups: int
    leftover: int
    bound: int
    tree: StrategyTree | None
    report: VerificationReport | None
    failed_paths: list[tuple[Outcome, ...]]

    @property
    def ok(self) -> bool:
        return self.report is not None and self.report.valid

    def summary(self) -> str:
        head = (f"N={self.n} as {self.groups} groups of {self.group_size}"
                f" + {self.leftover} leftover, bound {self.bound} weighings")
        if self.tree is None:
            routes = ", ".join("".join(o.symbol for o in p) or "(root)" for p in self.failed_paths)
            return f"{head}: no completion at {routes}"
        return f"{head}: depth {self.tree.depth}, {self.report.summary()}"


def base_solution(k: int) -> StrategyTree:
    """A shipped or searched solution for exactly ``k`` coins."""
    for name, (coins, _, mode) in fixtures.CATALOG.items():
        if coins == k and mode == "fc":
            return fixtures.load(name)
    if k <= 6:
        outcome = search_exists(SearchConfig(fc_upper(k), k))
        if outcome.found:
            return outcome.tree
    raise NoBaseSolution(f"no {k}-coin solution is shipped and {k} is too large to search")


def _expand(w: Weighing, a: int) -> Weighing:
    def members(g):
        return tuple(range((g - 1) * a + 1, g * a + 1))
    return Weighing(tuple(c for g in w.left for c in members(g)), tuple(c for g in w.right for c in members(g)))


def compose(n: int, a: int) -> CompositionResult:
    if a < 1:
        raise ValueError("group size must be positive")
    k, r = divmod(n, a)
    if k < 2:
        raise ValueError("need at least two full groups")
    outer = base_solution(k)
    budget = fc_upper(2 * a + r) if 2 * a + r >= 2 else 0
    bound = fc_upper(k) + budget
    everything = (1 << n) - 1
    failed = []

    def walk(node, rows, path) -> Node | None:
        if isinstance(node, Terminal):
            # the leaf's own depth plus the completion stays within the bound
            live = {f: row for f, row in rows.items() if row}
            if not live:
                return Terminal(Leaf.impossible())
            done = complete(live, n, max(0, bound - len(path)))
            if done is None:
                failed.append(path)
            return done
        w = _expand(node.weighing, a)
        kids = split_sparse(rows, w.left_mask, w.right_mask)
        out = [walk(ch, kids[o], path + (o,)) for o, ch in zip(OUTCOMES, node.children)]
        if any(x is None for x in out):
            return None
        return Decision(w, tuple(out))

    root = walk(outer.root, {i: everything & ~(1 << i) for i in range(n)}, ())
    if root is None:
        return CompositionResult(n, a, k, r, bound, None, None, failed)
    tree = StrategyTree(n, root)
    return CompositionResult(n, a, k, r, bound, tree, verify_fc(tree), failed)
