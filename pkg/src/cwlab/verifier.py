"""Check strategy trees against the adversarial chameleon.

Every root-to-leaf path carries the residual set of assignments still
consistent with its outcomes.  An output leaf is correct when every surviving
assignment has its fake among the output coins; the impossible marker ``()``
needs an empty residual.  Output leaves whose residual is empty are reported
as dead leaves, not as errors.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any

from .core import (
    OUTCOMES,
    Decision,
    Leaf,
    LeafKind,
    MalformedTree,
    Outcome,
    PairState,
    StrategyTree,
    Terminal,
    coins_of,
)
from .completion import complete, scaled_group_rows


class Mode(enum.Enum):
    FC = "fc"
    FF = "ff"
    PSEUDO = "pseudo"


@dataclass(frozen=True)
class Violation:
    path: tuple[Outcome, ...]
    leaf: Leaf
    residual: Any
    reason: str
    witness: tuple[int, int] | None = None

    def describe(self) -> str:
        route = "".join(o.symbol for o in self.path) or "(root)"
        text = f"path {route}: leaf {self.leaf}: {self.reason}"
        if self.witness:
            text += f" (fake {self.witness[0]}, {'chameleon' if self.residual_kind == 'fc' else 'fake'} {self.witness[1]})"
        return text

    @property
    def residual_kind(self) -> str:
        return "fc" if isinstance(self.residual, PairState) else "ff"


@dataclass
class VerificationReport:
    valid: bool
    mode: Mode
    violations: list[Violation] = field(default_factory=list)
    dead_leaves: list[tuple[Outcome, ...]] = field(default_factory=list)
    max_depth: int = 0
    n_coins: int = 0

    def summary(self) -> str:
        verdict = "valid" if self.valid else "invalid"
        return (f"{verdict} {self.mode.value}-solution for {self.n_coins} coins, depth {self.max_depth}, "
                f"{len(self.violations)} violations, {len(self.dead_leaves)} dead leaves")

    def to_dict(self) -> dict[str, Any]:
        return {
            "valid": self.valid,
            "mode": self.mode.value,
            "n_coins": self.n_coins,
            "max_depth": self.max_depth,
            "violations": [
                {
                    "path": "".join(o.symbol for o in v.path),
                    "leaf": str(v.leaf),
                    "reason": v.reason,
                    "witness": list(v.witness) if v.witness else None,
                }
                for v in self.violations
            ],
            "dead_leaves": ["".join(o.symbol for o in p) for p in self.dead_leaves],
        }


def split_sparse(rows: dict[int, int], left: int, right: int):
    """Three children of a sparse row map ``{fake_index: chameleon_mask}``."""
    bal, lo, hi = {}, {}, {}
    for i, row in rows.items():
        bit = 1 << i
        if left & bit:
            b = row & right
            if b:
                bal[i] = b
            lo[i] = row
        elif right & bit:
            b = row & left
            if b:
                bal[i] = b
            hi[i] = row
        else:
            bal[i] = row
            b = row & left
            if b:
                lo[i] = b
            b = row & right
            if b:
                hi[i] = b
    return bal, lo, hi


def _ff_split(rows: dict[int, int], left: int, right: int):
    # rows[a] holds partners b > a of the unordered fake pair {a, b}
    off = ~(left | right)
    bal, lo, hi = {}, {}, {}
    for a, row in rows.items():
        bit = 1 << a
        if left & bit:
            parts = (row & right, row & ~right, 0)
        elif right & bit:
            parts = (row & left, 0, row & ~left)
        else:
            parts = (row & off, row & left, row & right)
        for d, p in zip((bal, lo, hi), parts):
            if p:
                d[a] = p
    return bal, lo, hi


def _full_rows(n: int) -> dict[int, int]:
    everything = (1 << n) - 1
    return {i: everything & ~(1 << i) for i in range(n)}


def _state(n: int, rows: dict[int, int]) -> PairState:
    return PairState(n, tuple(rows.get(i, 0) for i in range(n)))


def _first_pair(rows: dict[int, int], bad_fakes: int | None = None, bad_chameleons: int | None = None):
    for f in sorted(rows):
        if bad_fakes is not None and not (bad_fakes >> f & 1):
            continue
        row = rows[f]
        if bad_chameleons is not None:
            row &= bad_chameleons
        if row:
            return (f + 1, coins_of(row)[0])
    return None


def fakeset_finishes(group_rows: dict[int, int], n: int, depth: int = 2) -> bool:
    """Whether a fake-only set can be reduced to two coins after one scaling.

    ``group_rows`` is the leaf residual with loops (both non-real coins in one
    group); every group becomes three coins and the result must be finished in
    ``depth`` weighings.
    """
    groups = sorted(group_rows)
    scaled = scaled_group_rows(group_rows, groups)
    return complete(scaled, 3 * n, depth) is not None


def _check_fc_leaf(leaf: Leaf, rows: dict[int, int], allow_fakeset: bool, group_rows=None, n: int = 0):
    """Return ``(reason, witness)`` for a wrong leaf, else ``None``."""
    support = 0
    for f in rows:
        support |= 1 << f
    out = leaf.mask
    if leaf.kind is LeafKind.IMPOSSIBLE:
        return "branch marked impossible is reachable", _first_pair(rows)
    if leaf.kind is LeafKind.FAKESET:
        if not allow_fakeset:
            return "fake-only set is not an answer to the FC-problem", _first_pair(rows)
        if support & ~out:
            return "fake may lie outside the set", _first_pair(rows, bad_fakes=support & ~out)
        if not fakeset_finishes(group_rows, n):
            return ("set cannot be reduced to two coins in two weighings after scaling",
                    _first_pair(rows, bad_chameleons=out) or _first_pair(rows))
        return None
    if support & ~out:
        return "fake may lie outside the output", _first_pair(rows, bad_fakes=support & ~out)
    return None


def _walk_fc(tree: StrategyTree, mode: Mode) -> VerificationReport:
    n = tree.n_coins
    report = VerificationReport(True, mode, n_coins=n)
    # pseudo mode also tracks the group graph (loops = both coins in one group)
    groups = {i: (1 << n) - 1 for i in range(n)} if mode is Mode.PSEUDO else None
    stack = [(tree.root, (), _full_rows(n), groups)]
    while stack:
        node, path, rows, groups = stack.pop()
        report.max_depth = max(report.max_depth, len(path))
        if isinstance(node, Terminal):
            leaf = node.leaf
            if not rows:
                if leaf.kind is not LeafKind.IMPOSSIBLE:
                    report.dead_leaves.append(path)
                continue
            bad = _check_fc_leaf(leaf, rows, mode is Mode.PSEUDO, groups, n)
            if bad:
                report.violations.append(Violation(path, leaf, _state(n, rows), bad[0], bad[1]))
            continue
        if not isinstance(node, Decision):
            raise MalformedTree(f"unexpected node {node!r} at {path}")
        w = node.weighing
        if max(w.coins) > n:
            raise MalformedTree(f"coin out of range in {w}")
        children = split_sparse(rows, w.left_mask, w.right_mask)
        group_kids = split_sparse(groups, w.left_mask, w.right_mask) if groups is not None else (None,) * 3
        for o in reversed(OUTCOMES):
            stack.append((node.children[o], path + (o,), children[o], group_kids[o]))
    report.violations.sort(key=lambda v: v.path)
    report.dead_leaves.sort()
    report.valid = not report.violations
    return report


def verify_fc(tree: StrategyTree) -> VerificationReport:
    return _walk_fc(tree, Mode.FC)


def verify_pseudo(tree: StrategyTree) -> VerificationReport:
    return _walk_fc(tree, Mode.PSEUDO)


def verify_ff(tree: StrategyTree) -> VerificationReport:
    """Run the tree on two equally light fakes; every reachable leaf must name both."""
    n = tree.n_coins
    report = VerificationReport(True, Mode.FF, n_coins=n)
    everything = (1 << n) - 1
    start = {a: everything & ~((1 << (a + 1)) - 1) for a in range(n - 1)}
    stack = [(tree.root, (), start)]
    while stack:
        node, path, rows = stack.pop()
        report.max_depth = max(report.max_depth, len(path))
        if isinstance(node, Terminal):
            leaf = node.leaf
            pairs = frozenset((a + 1, b) for a, row in rows.items() for b in coins_of(row))
            if not pairs:
                if leaf.kind is LeafKind.OUTPUT2:
                    report.dead_leaves.append(path)
                continue
            witness = min(pairs)
            if leaf.kind is not LeafKind.OUTPUT2:
                report.violations.append(Violation(path, leaf, pairs, "leaf cannot name two fakes", witness))
            elif pairs != {tuple(sorted(leaf.coins))}:
                others = sorted(pairs - {tuple(sorted(leaf.coins))})
                report.violations.append(Violation(path, leaf, pairs, "another pair of fakes reaches this leaf", others[0]))
            continue
        w = node.weighing
        children = _ff_split(rows, w.left_mask, w.right_mask)
        for o in reversed(OUTCOMES):
            stack.append((node.children[o], path + (o,), children[o]))
    report.violations.sort(key=lambda v: v.path)
    report.dead_leaves.sort()
    report.valid = not report.violations
    return report


def verify(tree: StrategyTree, mode: Mode | str) -> VerificationReport:
    mode = Mode(mode)
    if mode is Mode.FC:
        return verify_fc(tree)
    if mode is Mode.FF:
        return verify_ff(tree)
    return verify_pseudo(tree)


def residual_at(tree: StrategyTree, path) -> PairState:
    """Residual state after following ``path`` from the root."""
    rows = _full_rows(tree.n_coins)
    node = tree.root
    for o in path:
        if not isinstance(node, Decision):
            raise ValueError(f"path {path} runs past a leaf")
        rows = split_sparse(rows, node.weighing.left_mask, node.weighing.right_mask)[int(o)]
        node = node.children[int(o)]
    return _state(tree.n_coins, rows)
