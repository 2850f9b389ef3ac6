"""Command-line interface.

Exit codes: 0 success or valid, 1 invalid or not found, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import __version__
from .bounds import emit_tables
from .codec import ParseError, SchemaError, parse, parse_interchange, serialize_interchange, serialize_text
from .composition import NoBaseSolution, compose
from .core import StrategyTree
from .scaling import CompletionNotFound, InvalidTree, scale_once
from .search import BudgetExceeded, PruneFlags, SearchConfig, search_exists
from .verifier import verify

CLI_SCHEMA = "cwlab-cli/1"

OK, NOT_OK, USAGE = 0, 1, 2


class CliError(Exception):
    pass


def _digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def _load(path: str, coins: int | None) -> tuple[StrategyTree, bytes]:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror or exc}") from None
    text = data.decode("utf-8", errors="replace")
    try:
        if text.lstrip().startswith("{"):
            tree = parse_interchange(text)
        else:
            if coins is None:
                tree = parse(text)
                print(f"warning: --coins not given, assuming {tree.n_coins} (largest coin id)", file=sys.stderr)
            else:
                tree = parse(text, coins)
    except ParseError as exc:
        where = f"{path}:{exc.line}" if exc.line else path
        if exc.line and exc.column:
            where += f":{exc.column}"
        raise CliError(f"{where}: {exc.args[0]}") from None
    except SchemaError as exc:
        raise CliError(f"{path}: {exc}") from None
    if coins is not None and tree.n_coins != coins:
        raise CliError(f"{path}: file declares {tree.n_coins} coins, --coins says {coins}")
    return tree, data


def _emit(args, doc: dict, text: str) -> None:
    if args.format == "json":
        out = {"schema_version": CLI_SCHEMA, "tool_version": __version__, **doc}
        sys.stdout.write(json.dumps(out, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _write_tree(tree: StrategyTree, output: str | None) -> None:
    if not output:
        return
    base = Path(output)
    try:
        base.with_suffix(".txt").write_text(serialize_text(tree), encoding="utf-8")
        base.with_suffix(".json").write_text(json.dumps(serialize_interchange(tree), indent=1) + "\n",
                                             encoding="utf-8")
    except OSError as exc:
        raise CliError(f"{output}: {exc.strerror or exc}") from None


def cmd_verify(args) -> int:
    tree, data = _load(args.file, args.coins)
    report = verify(tree, args.mode)
    lines = [report.summary()] + ["  " + v.describe() for v in report.violations[:20]]
    _emit(args, {"command": "verify", "input_digest": _digest(data), "report": report.to_dict()}, "\n".join(lines))
    return OK if report.valid else NOT_OK


def cmd_expand(args) -> int:
    tree, data = _load(args.file, args.coins)
    doc = {"command": "expand", "input_digest": _digest(data), "tree": serialize_interchange(tree)}
    _write_tree(tree, args.output)
    _emit(args, doc, serialize_text(tree))
    return OK


def cmd_scale(args) -> int:
    tree, data = _load(args.file, args.coins)
    used = []
    try:
        for _ in range(args.times):
            result = scale_once(tree, args.allow_depth3)
            tree = result.tree
            used.append(result.completion_depth_used)
    except InvalidTree as exc:
        raise CliError(str(exc)) from None
    except CompletionNotFound as exc:
        _emit(args, {"command": "scale", "input_digest": _digest(data), "error": str(exc)}, f"not scalable: {exc}")
        return NOT_OK
    report = verify(tree, "fc")
    _write_tree(tree, args.output)
    verdict = "valid" if report.valid else "invalid"
    doc = {"command": "scale", "input_digest": _digest(data), "n_coins": tree.n_coins, "depth": tree.depth,
           "completion_depth_used": used, "valid": report.valid, "tree": serialize_interchange(tree)}
    text = serialize_text(tree) + f"# ({tree.depth},{tree.n_coins}) {verdict}\n"
    _emit(args, doc, text)
    return OK if report.valid else NOT_OK


def cmd_search(args) -> int:
    prune = PruneFlags.none() if args.no_prune else PruneFlags(literal_def_bound=args.literal_def_bound)
    cfg = SearchConfig(args.weighings, args.coins, args.mode, prune, args.budget_nodes, args.budget_seconds,
                       symmetry=not args.no_symmetry, threads=args.threads)
    outcome = search_exists(cfg)
    v = outcome.verdict
    doc = {"command": "search", "weighings": cfg.weighings, "coins": cfg.coins, "mode": cfg.mode.value,
           "nodes": outcome.nodes_explored}
    if outcome.found:
        doc["verdict"] = "found"
        doc["tree"] = serialize_interchange(outcome.tree)
        text = serialize_text(outcome.tree) + f"# found; {outcome.describe()}\n"
    elif isinstance(v, BudgetExceeded):
        doc["verdict"] = "budget_exceeded"
        doc["frontier"] = v.frontier
        text = outcome.describe()
    else:
        doc["verdict"] = "no_solution"
        doc["pruned_at_root"] = v.pruned_at_root
        text = outcome.describe()
    _emit(args, doc, text)
    return OK if outcome.found else NOT_OK


def cmd_bounds(args) -> int:
    table = emit_tables(args.max_w, args.max_n)
    if args.csv:
        sys.stdout.write(table.csv())
        return OK
    doc = {
        "command": "bounds",
        "by_w": [{"w": r.w, "found": r.found, "itb": r.itb, "induced_scalable": r.induced_scalable,
                  "scalable_itb": r.scalable_itb} for r in table.by_w],
        "by_n": [{"n": r.n, "fc_lower": r.fc_lower, "fc_upper": r.fc_upper} for r in table.by_n],
    }
    _emit(args, doc, table.text())
    return OK


def cmd_compose(args) -> int:
    try:
        result = compose(args.coins, args.group_size)
    except (ValueError, NoBaseSolution) as exc:
        raise CliError(str(exc)) from None
    if result.tree is not None:
        _write_tree(result.tree, args.output)
    doc = {"command": "compose", "coins": result.n, "group_size": result.group_size, "groups": result.groups,
           "leftover": result.leftover, "bound": result.bound, "valid": result.ok,
           "depth": result.tree.depth if result.tree is not None else None}
    _emit(args, doc, result.summary())
    return OK if result.ok else NOT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cwlab", description="Fake-coin and chameleon-coin weighing strategies.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, tree_input=True, output=False):
        sp.add_argument("--format", choices=("text", "json"), default="text")
        if tree_input:
            sp.add_argument("file", help="tree in the line format or cwlab-tree/1 JSON")
            sp.add_argument("--coins", type=int, help="number of coins (inferred with a warning if omitted)")
        if output:
            sp.add_argument("-o", "--output", help="write OUTPUT.txt and OUTPUT.json")

    sp = sub.add_parser("verify", help="check a tree")
    common(sp)
    sp.add_argument("--mode", choices=("fc", "ff", "pseudo"), default="fc")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("expand", help="print the tree with every branch written out")
    common(sp, output=True)
    sp.set_defaults(func=cmd_expand)

    sp = sub.add_parser("scale", help="replace coins by triples and finish every leaf")
    common(sp, output=True)
    sp.add_argument("--times", type=int, default=1)
    sp.add_argument("--allow-depth3", action="store_true")
    sp.set_defaults(func=cmd_scale)

    sp = sub.add_parser("search", help="exhaustive search for a solution")
    common(sp, tree_input=False)
    sp.add_argument("--weighings", type=int, required=True)
    sp.add_argument("--coins", type=int, required=True)
    sp.add_argument("--mode", choices=("solution", "scalable", "pseudo"), default="solution")
    sp.add_argument("--no-prune", action="store_true")
    sp.add_argument("--no-symmetry", action="store_true")
    sp.add_argument("--literal-def-bound", action="store_true", help="also apply the unsound literal loop/sink bound")
    sp.add_argument("--budget-nodes", type=int)
    sp.add_argument("--budget-seconds", type=float)
    sp.add_argument("--threads", type=int, help="worker processes (default: CWLAB_THREADS or 1)")
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("bounds", help="print the bound tables")
    common(sp, tree_input=False)
    sp.add_argument("--max-w", type=int, default=10)
    sp.add_argument("--max-n", type=int, default=0)
    sp.add_argument("--csv", action="store_true")
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("compose", help="groups of a coins, then finish the survivors")
    common(sp, tree_input=False, output=True)
    sp.add_argument("--coins", type=int, required=True)
    sp.add_argument("--group-size", type=int, required=True)
    sp.set_defaults(func=cmd_compose)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
