"""Exhaustive search for solutions, scalable solutions and pseudo-solutions.

A depth-first AND/OR search over pair states: at a decision node some
weighing must work, and for that weighing all three outcomes must be
finishable.  Weighings are enumerated once per composition of exchangeable
coin classes, in canonical order (pan size, left pan, right pan), and the
witness is the first tree found in that order.
"""

from __future__ import annotations

import enum
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Union

from ._engine import split
from .core import Decision, Leaf, LeafKind, Node, StrategyTree, Terminal, Weighing, coins_of, popcount
from .kernel import (
    FC,
    PRUNE_DEF,
    PRUNE_DEF_LITERAL,
    PRUNE_LEAF,
    PRUNE_PAIR,
    PRUNE_SUPPORT,
    PSEUDO,
    SCALABLE,
    BudgetExceeded as _Budget,
    Solver,
)
from .verifier import fakeset_finishes, verify_fc, verify_pseudo


class SearchMode(enum.Enum):
    SOLUTION = "solution"
    SCALABLE = "scalable"
    PSEUDO = "pseudo"


_KERNEL_MODE = {SearchMode.SOLUTION: FC, SearchMode.SCALABLE: SCALABLE, SearchMode.PSEUDO: PSEUDO}


class InfeasibleDepth(ValueError):
    """``search_best`` above the feasibility ceiling without an override."""


@dataclass(frozen=True)
class PruneFlags:
    pair_bound: bool = True
    def_bound: bool = True
    leaf_feasibility: bool = True
    # the loop/sink inequality taken literally; it can cut real solutions
    literal_def_bound: bool = False

    @classmethod
    def none(cls) -> "PruneFlags":
        return cls(False, False, False)

    def bits(self) -> int:
        out = 0
        if self.pair_bound:
            out |= PRUNE_PAIR | PRUNE_SUPPORT
        if self.def_bound:
            out |= PRUNE_DEF
        if self.leaf_feasibility:
            out |= PRUNE_LEAF
        if self.literal_def_bound:
            out |= PRUNE_DEF_LITERAL
        return out


@dataclass
class SearchConfig:
    weighings: int
    coins: int
    mode: SearchMode = SearchMode.SOLUTION
    prune: PruneFlags = field(default_factory=PruneFlags)
    node_budget: int | None = None
    time_budget: float | None = None
    symmetry: bool = True
    threads: int | None = None
    progress: Callable[[int, int, tuple], None] | None = None

    def __post_init__(self):
        if isinstance(self.mode, str):
            self.mode = SearchMode(self.mode)
        if self.weighings < 0:
            raise ValueError("weighings must be non-negative")
        if self.coins < 2:
            raise ValueError("at least two coins are needed")


@dataclass(frozen=True)
class Found:
    tree: StrategyTree


@dataclass(frozen=True)
class ExhaustedNoSolution:
    pruned_at_root: bool = False


@dataclass(frozen=True)
class BudgetExceeded:
    frontier: str


Verdict = Union[Found, ExhaustedNoSolution, BudgetExceeded]


@dataclass
class SearchOutcome:
    verdict: Verdict
    nodes_explored: int
    elapsed: float

    @property
    def found(self) -> bool:
        return isinstance(self.verdict, Found)

    @property
    def tree(self) -> StrategyTree | None:
        return self.verdict.tree if isinstance(self.verdict, Found) else None

    def describe(self) -> str:
        v = self.verdict
        if isinstance(v, Found):
            text = f"found (depth {v.tree.depth})"
        elif isinstance(v, ExhaustedNoSolution):
            text = "no solution" + (" (pruned at the root)" if v.pruned_at_root else "")
        else:
            text = f"budget exceeded: {v.frontier}"
        return f"{text}; {self.nodes_explored} nodes, {self.elapsed:.2f}s"


class SearchBudgetExceeded(RuntimeError):
    def __init__(self, outcome: SearchOutcome):
        super().__init__(outcome.describe())
        self.outcome = outcome


def initial_rows(n: int, loops: bool) -> tuple[int, ...]:
    everything = (1 << n) - 1
    return tuple(everything if loops else everything & ~(1 << i) for i in range(n))


class _FakesetOk:
    # picklable for worker processes
    def __init__(self, n: int):
        self.n = n

    def __call__(self, rows, sup):
        return fakeset_finishes({i: r for i, r in enumerate(rows) if r}, self.n)


def _solver(cfg: SearchConfig, deadline: float | None, progress=None):
    mode = _KERNEL_MODE[cfg.mode]
    return Solver(
        cfg.coins, mode, prune=cfg.prune.bits(),
        fakeset_ok=_FakesetOk(cfg.coins) if mode == PSEUDO else None,
        node_budget=cfg.node_budget, deadline=deadline, progress=progress,
        symmetry=cfg.symmetry)


def to_node(tree) -> Node:
    """Kernel result (0-based masks) to a tree over coin ids."""
    if tree[0] == "L":
        coins = coins_of(tree[2])
        if tree[1] == "set":
            return Terminal(Leaf(LeafKind.FAKESET, tuple(coins)))
        return Terminal(Leaf.output(*coins))
    _, left, right, kids = tree
    return Decision(Weighing(tuple(coins_of(left)), tuple(coins_of(right))), tuple(to_node(k) for k in kids))


def _threads(cfg: SearchConfig) -> int:
    if cfg.threads is not None:
        return max(1, cfg.threads)
    try:
        return max(1, int(os.environ.get("CWLAB_THREADS", "1")))
    except ValueError:
        return 1


def _root_job(args):
    cfg, deadline, rows, cand = args
    solver = _solver(cfg, deadline)
    r = cfg.weighings
    kids = split(rows, *cand)
    subs = []
    try:
        for kid in kids:
            sub = solver.solve(kid, r - 1)
            if sub is None:
                return None, solver.nodes, False
            subs.append(sub)
    except _Budget:
        return None, solver.nodes, True
    return ("W", cand[0], cand[1], tuple(subs)), solver.nodes, False


def _parallel(cfg: SearchConfig, rows, deadline, workers):
    # the witness is the lowest-index root weighing that works, and subtrees
    # depend only on (state, depth), so the schedule cannot change it
    probe = _solver(cfg, deadline)
    if (leaf := probe.leaf(rows)) is not None:
        return leaf, 0, False
    cands = probe.candidate_list(rows)
    quick = cfg.prune.leaf_feasibility
    r = cfg.weighings
    keep = []
    for cand in cands:
        kids = split(rows, *cand)
        if quick and (rows in kids or (r == 1 and any(probe.leaf(k) is None for k in kids))):
            continue
        if all(probe.bound_ok(k, r - 1) for k in kids):
            keep.append(cand)
    nodes = 1
    hit_budget = False
    plain = replace(cfg, progress=None)
    with ProcessPoolExecutor(workers) as pool:
        jobs = pool.map(_root_job, [(plain, deadline, rows, c) for c in keep])
        for result, used, budget in jobs:
            nodes += used
            hit_budget |= budget
            if result is not None and not hit_budget:
                pool.shutdown(wait=False, cancel_futures=True)
                return result, nodes, False
    return None, nodes, hit_budget


def search_exists(config: SearchConfig) -> SearchOutcome:
    start = time.monotonic()
    deadline = None if config.time_budget is None else start + config.time_budget
    loops = config.mode is not SearchMode.SOLUTION
    rows = initial_rows(config.coins, loops)
    last = {"nodes": 0, "r": config.weighings, "rows": rows}

    def progress(nodes, r, state):
        last.update(nodes=nodes, r=r, rows=state)
        if config.progress is not None:
            config.progress(nodes, r, state)

    solver = _solver(config, deadline, progress)
    if solver.leaf(rows) is None and config.weighings > 0 and not solver.bound_ok(rows, config.weighings):
        return SearchOutcome(ExhaustedNoSolution(pruned_at_root=True), 0, time.monotonic() - start)
    workers = _threads(config)
    try:
        if workers > 1 and config.weighings > 1:
            result, nodes, budget = _parallel(config, rows, deadline, workers)
            if budget:
                raise _Budget()
        else:
            result = solver.solve(rows, config.weighings)
            nodes = solver.nodes
    except _Budget:
        pairs = sum(popcount(x) for x in last["rows"])
        frontier = f"stopped after {max(solver.nodes, last['nodes'])} nodes at depth {last['r']} with {pairs} open pairs"
        return SearchOutcome(BudgetExceeded(frontier), max(solver.nodes, last["nodes"]), time.monotonic() - start)
    elapsed = time.monotonic() - start
    if result is None:
        return SearchOutcome(ExhaustedNoSolution(), nodes, elapsed)
    tree = StrategyTree(config.coins, to_node(result))
    _assert_sound(tree, config.mode)
    return SearchOutcome(Found(tree), nodes, elapsed)


def _assert_sound(tree: StrategyTree, mode: SearchMode) -> None:
    report = verify_pseudo(tree) if mode is SearchMode.PSEUDO else verify_fc(tree)
    if not report.valid:
        raise AssertionError(f"search produced an invalid tree: {report.summary()}")
    if mode is SearchMode.SCALABLE:
        from .scaling import is_scalable

        check = is_scalable(tree)
        if not check:
            raise AssertionError(f"search produced a non-scalable tree: {check.summary()}")


DEFAULT_CEILING = 4


def search_best(w: int, template: SearchConfig | None = None, ceiling: int = DEFAULT_CEILING,
                override: bool = False) -> tuple[int, StrategyTree]:
    """Largest N solvable in ``w`` weighings, with a witness."""
    if w > ceiling and not override:
        raise InfeasibleDepth(f"w={w} is above the feasibility ceiling {ceiling}; pass override=True")
    best = None
    n = 2
    while True:
        if template is None:
            cfg = SearchConfig(w, n)
        else:
            cfg = SearchConfig(w, n, template.mode, template.prune, template.node_budget,
                               template.time_budget, template.symmetry, template.threads, template.progress)
        outcome = search_exists(cfg)
        if isinstance(outcome.verdict, BudgetExceeded):
            raise SearchBudgetExceeded(outcome)
        if not outcome.found:
            break
        best = (n, outcome.tree)
        n += 1
    if best is None:
        raise ValueError(f"no solution with {w} weighings even for two coins")
    return best
