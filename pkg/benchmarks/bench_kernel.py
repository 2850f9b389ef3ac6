"""Compiled kernel vs the pure-Python engine on the same searches.

    python3 benchmarks/bench_kernel.py [--repeat 3]

Both backends must return identical trees and node counts; the script
exits non-zero if they disagree.
"""

from __future__ import annotations

import argparse
import sys
import time

from cwlab import _engine, kernel
from cwlab.search import PruneFlags, SearchConfig, SearchMode, initial_rows

CASES = [
    # (weighings, coins, mode)
    (2, 4, SearchMode.SOLUTION),
    (3, 6, SearchMode.SOLUTION),
    (3, 7, SearchMode.SOLUTION),
    (3, 6, SearchMode.SCALABLE),
    (3, 7, SearchMode.SCALABLE),
    (2, 4, SearchMode.SCALABLE),
    (4, 9, SearchMode.SOLUTION),
    (4, 11, SearchMode.SOLUTION),
    (4, 10, SearchMode.SCALABLE),
]


def run(make, cfg):
    rows = initial_rows(cfg.coins, cfg.mode is not SearchMode.SOLUTION)
    solver = make(cfg)
    t0 = time.perf_counter()
    tree = solver.solve(rows, cfg.weighings)
    return time.perf_counter() - t0, tree, solver.nodes


def main(argv=None) -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if kernel.BACKEND != "cython":
        print("compiled kernel not built; run `python3 setup.py build_ext --inplace` first")
        return 1
    from cwlab._kernel import Solver as Compiled

    def make(cls):
        def build(cfg):
            mode = {SearchMode.SOLUTION: kernel.FC, SearchMode.SCALABLE: kernel.SCALABLE}[cfg.mode]
            return cls(cfg.coins, mode, prune=cfg.prune.bits())
        return build

    print(f"{'case':<22}{'nodes':>9}{'python s':>11}{'cython s':>11}{'speedup':>9}")
    bad = False
    for w, n, mode in CASES:
        cfg = SearchConfig(w, n, mode, PruneFlags())
        py = [run(make(_engine.Solver), cfg) for _ in range(args.repeat)]
        cy = [run(make(Compiled), cfg) for _ in range(args.repeat)]
        if py[0][1:] != cy[0][1:]:
            bad = True
            print(f"MISMATCH on {mode.value} ({w},{n})")
        tp = min(t for t, _, _ in py)
        tc = min(t for t, _, _ in cy)
        verdict = "found" if py[0][1] is not None else "none"
        label = f"{mode.value} ({w},{n}) {verdict}"
        print(f"{label:<22}{py[0][2]:>9}{tp:>11.4f}{tc:>11.4f}{tp / max(tc, 1e-9):>8.1f}x")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
