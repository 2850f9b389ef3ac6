import os
import random
import subprocess
import sys

import pytest

from cwlab import _engine, kernel
from cwlab.core import split_rows
from cwlab.search import initial_rows

compiled = pytest.importorskip("cwlab._kernel", reason="compiled kernel not built")

MODES = [kernel.FC, kernel.SCALABLE]


def random_states(seed, count):
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(3, 8)
        mode = rng.choice(MODES)
        rows = initial_rows(n, mode != kernel.FC)
        for _ in range(rng.randint(0, 2)):
            coins = rng.sample(range(n), n)
            k = rng.randint(1, n // 2)
            left = sum(1 << c for c in coins[:k])
            right = sum(1 << c for c in coins[k:2 * k])
            kids = [x for x in split_rows(rows, left, right) if any(x)]
            rows = rng.choice(kids)
        weighable = rng.choice([None, rng.getrandbits(n) | 1])
        yield n, mode, rows, weighable, rng.randint(0, 2)


def test_factory_picks_compiled_for_small_instances():
    assert kernel.BACKEND == "cython"
    assert isinstance(kernel.Solver(10), compiled.Solver)
    assert isinstance(kernel.Solver(kernel.MAX_COMPILED + 1), _engine.Solver)


@pytest.mark.parametrize("seed", range(4))
def test_backends_agree(seed):
    for n, mode, rows, weighable, r in random_states(seed, 60):
        a = _engine.Solver(n, mode, weighable=weighable)
        b = compiled.Solver(n, mode, weighable=weighable)
        assert a.leaf(rows) == b.leaf(rows)
        assert a.bound_ok(rows, r) == b.bound_ok(rows, r)
        assert a.candidate_list(rows) == b.candidate_list(rows)
        assert a.solve(rows, r) == b.solve(rows, r)
        assert a.nodes == b.nodes


@pytest.mark.parametrize("prune", [0, kernel.PRUNE_PAIR, kernel.PRUNE_ALL, kernel.PRUNE_ALL | kernel.PRUNE_DEF_LITERAL])
def test_backends_agree_on_flags(prune):
    for w, n in [(2, 4), (3, 6), (3, 7)]:
        for mode in MODES:
            rows = initial_rows(n, mode != kernel.FC)
            a = _engine.Solver(n, mode, prune=prune)
            b = compiled.Solver(n, mode, prune=prune)
            assert a.solve(rows, w) == b.solve(rows, w)
            assert a.nodes == b.nodes


def test_budget_raised_by_both():
    rows = initial_rows(9, False)
    for cls in (_engine.Solver, compiled.Solver):
        with pytest.raises(kernel.BudgetExceeded):
            cls(9, node_budget=3).solve(rows, 4)


def test_environment_forces_python():
    env = dict(os.environ, CWLAB_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from cwlab import kernel; print(kernel.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
