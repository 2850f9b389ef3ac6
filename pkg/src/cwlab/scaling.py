"""Scaling: replace every coin by a triple, replay, then finish each leaf.

The group residual at every leaf of the original tree is tracked with loops
(both non-real coins inside one triple).  Expanding it over triples gives the
exact coin-level residual of the scaled tree, which is then finished by a
short completion found by search.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator

from .completion import complete, scaled_group_rows
from .constructions import classic_fake_tree
from .core import (
    OUTCOMES,
    Decision,
    Leaf,
    LeafKind,
    Node,
    Outcome,
    StrategyTree,
    Terminal,
    Weighing,
    coins_of,
    line_number,
    node_depth,
)
from .verifier import split_sparse, verify_fc, verify_pseudo


class InvalidTree(ValueError):
    """The input is not a verified solution of the required kind."""


class CompletionNotFound(RuntimeError):
    def __init__(self, path: tuple[Outcome, ...], depth: int):
        route = "".join(o.symbol for o in path) or "(root)"
        super().__init__(f"no completion of depth <= {depth} after path {route}")
        self.path = path
        self.depth = depth


@dataclass(frozen=True)
class LeafDiagnosis:
    path: tuple[Outcome, ...]
    line: int
    leaf: Leaf
    scalable: bool
    always_together: bool


@dataclass
class ScalabilityReport:
    scalable: bool
    leaves: list[LeafDiagnosis] = field(default_factory=list)

    @property
    def bad_leaves(self) -> list[LeafDiagnosis]:
        return [d for d in self.leaves if not d.scalable]

    @property
    def together_leaves(self) -> list[LeafDiagnosis]:
        """Leaves whose two coins were never separated by any weighing."""
        return [d for d in self.leaves if d.always_together]

    def __bool__(self) -> bool:
        return self.scalable

    def summary(self) -> str:
        text = "scalable" if self.scalable else "not scalable: " + "; ".join(
            f"line {d.line} outputs {d.leaf}" for d in self.bad_leaves)
        together = sorted({(d.line, str(d.leaf)) for d in self.together_leaves})
        if together:
            text += " (never separated: " + ", ".join(f"line {ln} {lf}" for ln, lf in together) + ")"
        return text


def _walk_groups(tree: StrategyTree) -> Iterator[tuple[tuple[Outcome, ...], Leaf, dict, dict, list]]:
    """Yield ``(path, leaf, coin_rows, group_rows, weighings)`` for every leaf."""
    n = tree.n_coins
    everything = (1 << n) - 1
    coin_rows = {i: everything & ~(1 << i) for i in range(n)}
    group_rows = {i: everything for i in range(n)}
    stack = [(tree.root, (), coin_rows, group_rows, [])]
    while stack:
        node, path, rows, groups, ws = stack.pop()
        if isinstance(node, Terminal):
            yield path, node.leaf, rows, groups, ws
            continue
        w = node.weighing
        kids = split_sparse(rows, w.left_mask, w.right_mask)
        gkids = split_sparse(groups, w.left_mask, w.right_mask)
        for o in reversed(OUTCOMES):
            stack.append((node.children[o], path + (o,), kids[o], gkids[o], ws + [(w, o)]))


def bad_case(w: Weighing, o: Outcome, a: int, b: int) -> int | None:
    """Which of the four unhelpful situations a weighing is for ``(a, b)``.

    1: both on the lighter pan; 2: both off a balanced scale; 3: ``a`` on the
    lighter pan, ``b`` off; 4: ``b`` on the lighter pan, ``a`` off.  ``None``
    means the weighing separates the pair usefully.
    """
    sa, sb = w.side(a), w.side(b)
    if o is Outcome.BALANCED:
        return 2 if sa == 0 and sb == 0 else None
    light = 1 if o is Outcome.LEFT_LIGHT else -1
    if sa == light and sb == light:
        return 1
    if sa == light and sb == 0:
        return 3
    if sb == light and sa == 0:
        return 4
    return None


def leaf_is_scalable(ws, a: int, b: int, spare: int) -> bool:
    """Syntactic test for one two-coin leaf.

    The leaf resists scaling when every weighing on its path is unhelpful and
    the path never puts ``a`` and ``b`` on lighter pans separately (that
    would rule out both non-real coins sharing a triple).  A leaf above full
    depth has a spare weighing, enough for six coins with a chameleon.
    """
    if spare > 0:
        return True
    cases = {bad_case(w, o, a, b) for w, o in ws}
    return None in cases or {3, 4} <= cases


def is_scalable(tree: StrategyTree) -> ScalabilityReport:
    """Syntactic scalability test on a verified solution."""
    if not verify_fc(tree).valid:
        raise InvalidTree("is_scalable needs a valid solution")
    depth = tree.depth
    report = ScalabilityReport(True)
    for path, leaf, rows, _, ws in sorted(_walk_groups(tree), key=lambda t: t[0]):
        if leaf.kind is not LeafKind.OUTPUT2 or not rows:
            continue
        a, b = leaf.coins
        ok = leaf_is_scalable(ws, a, b, depth - len(path))
        together = all(w.side(a) == w.side(b) for w, _ in ws)
        line = line_number(path[:-1]) if path else 0
        report.leaves.append(LeafDiagnosis(path, line, leaf, ok, together))
        if not ok:
            report.scalable = False
    return report


def triple(coin: int) -> tuple[int, int, int]:
    return (3 * coin - 2, 3 * coin - 1, 3 * coin)


def scale_weighing(w: Weighing) -> Weighing:
    return Weighing(tuple(c for x in w.left for c in triple(x)), tuple(c for x in w.right for c in triple(x)))


@dataclass
class ScaleResult:
    tree: StrategyTree
    completion_depth_used: int
    per_leaf: dict[tuple[Outcome, ...], Node]


def _leaf_completion(args) -> tuple[Node | None, int]:
    group_rows, n3, budget, fakeset = args
    scaled = scaled_group_rows(group_rows, sorted(group_rows), loops=True)
    coin_level = {f: row & ~(1 << f) for f, row in scaled.items() if row & ~(1 << f)}
    if not coin_level:
        return Terminal(Leaf.impossible()), 0
    sup = 0
    cham = 0
    for f, row in coin_level.items():
        sup |= 1 << f
        cham |= row
    if fakeset and not cham & sup and len(coin_level) <= 18:
        # no chameleon among the candidates: the classic search suffices
        return classic_fake_tree(coins_of(sup), 2, 2), 2
    # prefer a completion that keeps the result scalable
    found = complete(scaled, n3, budget, scalable=True)
    if found is None:
        found = complete(coin_level, n3, budget)
    if found is None:
        return None, 0
    return found, node_depth(found)


def _workers() -> int:
    import os

    try:
        return max(1, int(os.environ.get("CWLAB_THREADS", "1")))
    except ValueError:
        return 1


def scale_once(tree: StrategyTree, allow_depth3: bool = False) -> ScaleResult:
    """Scale a solution or pseudo-solution to ``3N`` coins and re-verify it."""
    pseudo = any(leaf.kind is LeafKind.FAKESET for _, leaf in tree.leaves())
    check = verify_pseudo(tree) if pseudo else verify_fc(tree)
    if not check.valid:
        raise InvalidTree(f"input is not valid: {check.summary()}")
    n3 = 3 * tree.n_coins
    leaves = sorted(_walk_groups(tree), key=lambda t: t[0])
    extra = 3 if allow_depth3 else 2
    # every leaf may use the weighings its path left unused
    jobs = [(groups, n3, tree.depth - len(path) + extra, leaf.kind is LeafKind.FAKESET)
            for path, leaf, _, groups, _ in leaves]
    workers = _workers()
    if workers > 1 and len(jobs) > 64:
        with ProcessPoolExecutor(workers) as pool:
            done = list(pool.map(_leaf_completion, jobs, chunksize=32))
    else:
        done = [_leaf_completion(j) for j in jobs]
    per_leaf = {}
    for (path, *_), job, (node, _) in zip(leaves, jobs, done):
        if node is None:
            raise CompletionNotFound(path, job[2])
        per_leaf[path] = node

    def build(node, path):
        if isinstance(node, Terminal):
            return per_leaf[path]
        return Decision(scale_weighing(node.weighing),
                        tuple(build(ch, path + (o,)) for o, ch in zip(OUTCOMES, node.children)))

    out = StrategyTree(n3, build(tree.root, ()))
    report = verify_fc(out)
    if not report.valid:
        raise AssertionError(f"scaled tree failed verification: {report.violations[0].describe()}")
    return ScaleResult(out, out.depth - tree.depth, per_leaf)


def scale_k(tree: StrategyTree, k: int, allow_depth3: bool = False) -> StrategyTree:
    if k < 1:
        raise ValueError("k must be at least 1")
    for _ in range(k):
        tree = scale_once(tree, allow_depth3).tree
    return tree
