"""Reading and writing strategy trees.

Text format, one decision per line::

    0. 1 2 v 3 4 : => 1, => 2, sym.
    1. 1 3 v 5 6 : => 4, => 5, (5, 6).
    4. 2 4 v 5 6 : (), (2, 4), (5, 6).

The three actions answer *balanced*, *left pan lighter*, *right pan lighter*.
An action is a go-to (``=> n``, ``-> n`` or ``⇒ n``; line ``L`` may only jump
to ``3L+1``, ``3L+2``, ``3L+3`` in that position), an output ``(a)``,
``(a, b)``, a fake-only set ``{a, b, c, ...}``, the impossible marker ``()``,
or ``sym``.  ``sym`` as the third action, or written after the closing period,
makes the right-light branch the mirror image of the left-light branch: the
i-th coin of the left pan is exchanged with the i-th coin of the right pan
throughout the copied subtree.  A trailing ``sym`` only fills a go-to whose
line is absent.

Extensions: lines starting with ``#`` are comments, headers such as
``First weighing:`` are skipped, and a tree without weighings is written as a
single line ``0. (1, 2).``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Any, Union

from .core import Decision, Leaf, LeafKind, Node, StrategyTree, Terminal, Weighing, relabel_node

SCHEMA = "cwlab-tree/1"

_ARROWS = ("=>", "->", "⇒", "→")
_HEADER = re.compile(r"^[A-Za-z][\w \-]*:\s*$")


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class TextSyntaxError(ParseError):
    pass


class DanglingGoto(ParseError):
    pass


class PanSizeMismatch(ParseError):
    pass


class DuplicateLine(ParseError):
    pass


class CoinOutOfRange(ParseError):
    pass


class SchemaError(ValueError):
    pass


@dataclass(frozen=True)
class Goto:
    target: int


@dataclass(frozen=True)
class Sym:
    pass


Action = Union[Goto, Leaf, Sym]


@dataclass(frozen=True)
class PseudoCodeLine:
    line_no: int
    weighing: Weighing | None
    actions: tuple[Action, ...]
    trailing_sym: bool = False
    source_line: int = 0


class _Scanner:
    def __init__(self, text: str, source_line: int):
        self.text = text
        self.pos = 0
        self.source_line = source_line

    def error(self, message: str, cls=TextSyntaxError):
        return cls(message, self.source_line, self.pos + 1)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, s: str) -> bool:
        self.skip()
        return self.text.startswith(s, self.pos)

    def expect(self, s: str):
        if not self.peek(s):
            raise self.error(f"expected {s!r}")
        self.pos += len(s)

    def number(self) -> int:
        self.skip()
        m = re.match(r"\d+", self.text[self.pos:])
        if not m:
            raise self.error("expected a number")
        self.pos += m.end()
        return int(m.group())

    def at_number(self) -> bool:
        self.skip()
        return self.pos < len(self.text) and self.text[self.pos].isdigit()

    def at_end(self) -> bool:
        self.skip()
        return self.pos >= len(self.text)


def _number_list(sc: _Scanner, close: str) -> tuple[int, ...]:
    coins = []
    if sc.peek(close):
        sc.expect(close)
        return ()
    while True:
        coins.append(sc.number())
        if sc.peek(","):
            sc.expect(",")
            continue
        sc.expect(close)
        return tuple(coins)


def _action(sc: _Scanner) -> tuple[Action, int]:
    sc.skip()
    col = sc.pos + 1
    for arrow in _ARROWS:
        if sc.peek(arrow):
            sc.expect(arrow)
            return Goto(sc.number()), col
    if sc.peek("sym"):
        sc.expect("sym")
        return Sym(), col
    if sc.peek("("):
        sc.expect("(")
        coins = _number_list(sc, ")")
        if len(coins) > 2:
            raise TextSyntaxError("an output lists at most two coins", sc.source_line, col)
        try:
            return Leaf.output(*coins), col
        except ValueError as exc:
            raise TextSyntaxError(str(exc), sc.source_line, col) from None
    if sc.peek("{"):
        sc.expect("{")
        coins = _number_list(sc, "}")
        try:
            return Leaf(LeafKind.FAKESET, coins), col
        except ValueError as exc:
            raise TextSyntaxError(str(exc), sc.source_line, col) from None
    raise sc.error("expected an action")


def parse_line(text: str, source_line: int = 1) -> PseudoCodeLine:
    sc = _Scanner(text, source_line)
    line_no = sc.number()
    sc.expect(".")
    if not sc.at_number():
        # terminal root line, e.g. "0. (1, 2)."
        leaf, col = _action(sc)
        if not isinstance(leaf, Leaf):
            raise TextSyntaxError("a line without a weighing must be an output", source_line, col)
        sc.expect(".")
        if not sc.at_end():
            raise sc.error("unexpected text after the period")
        return PseudoCodeLine(line_no, None, (leaf,), False, source_line)
    left = []
    while sc.at_number():
        left.append(sc.number())
    sc.skip()
    col_v = sc.pos + 1
    sc.expect("v")
    right = []
    while sc.at_number():
        right.append(sc.number())
    if len(left) != len(right) or not left:
        raise PanSizeMismatch(f"pans of size {len(left)} and {len(right)}", source_line, col_v)
    try:
        weighing = Weighing(tuple(left), tuple(right))
    except ValueError as exc:
        raise TextSyntaxError(str(exc), source_line, col_v) from None
    sc.expect(":")
    actions = []
    for i in range(3):
        act, col = _action(sc)
        if isinstance(act, Sym) and i != 2:
            raise TextSyntaxError("sym may only stand for the third outcome", source_line, col)
        if isinstance(act, Goto) and act.target != 3 * line_no + 1 + i:
            raise TextSyntaxError(
                f"line {line_no} outcome {i + 1} must go to {3 * line_no + 1 + i}, not {act.target}", source_line, col
            )
        actions.append(act)
        if i < 2:
            sc.expect(",")
    sc.expect(".")
    trailing = False
    if sc.peek("sym"):
        sc.expect("sym")
        trailing = True
    if not sc.at_end():
        raise sc.error("unexpected text after the period")
    return PseudoCodeLine(line_no, weighing, tuple(actions), trailing, source_line)


def parse_lines(text: str) -> dict[int, PseudoCodeLine]:
    lines: dict[int, PseudoCodeLine] = {}
    for k, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#") or _HEADER.match(stripped):
            continue
        if not stripped[0].isdigit():
            raise TextSyntaxError("a line must start with its number", k, 1)
        line = parse_line(raw, k)
        if line.line_no in lines:
            raise DuplicateLine(f"line number {line.line_no} defined twice", k, 1)
        lines[line.line_no] = line
    return lines


def pan_swap(weighing: Weighing):
    """Positional transposition exchanging the i-th left and i-th right coin."""
    table = {}
    for a, b in zip(weighing.left, weighing.right):
        table[a] = b
        table[b] = a
    return lambda c: table.get(c, c)


def parse(text: str, n_coins: int | None = None) -> StrategyTree:
    """Parse the line format into a fully expanded tree.

    ``n_coins`` defaults to the largest coin id mentioned.
    """
    lines = parse_lines(text)
    if 0 not in lines:
        raise DanglingGoto("no line 0", None, None)
    highest = 0
    for ln in lines.values():
        coins = list(ln.weighing.left + ln.weighing.right) if ln.weighing else []
        for act in ln.actions:
            if isinstance(act, Leaf):
                coins.extend(act.coins)
        if coins:
            highest = max(highest, max(coins))
            if n_coins is not None and max(coins) > n_coins:
                raise CoinOutOfRange(f"coin {max(coins)} exceeds {n_coins} coins", ln.source_line, None)
    n = n_coins if n_coins is not None else max(highest, 2)

    def build(line_no: int) -> Node:
        ln = lines[line_no]
        if ln.weighing is None:
            if line_no != 0:
                raise TextSyntaxError("only line 0 may be a bare output", ln.source_line, None)
            return Terminal(ln.actions[0])
        children: list[Node] = []
        for i, act in enumerate(ln.actions):
            if isinstance(act, Leaf):
                children.append(Terminal(act))
            elif isinstance(act, Goto) and act.target in lines:
                children.append(build(act.target))
            elif isinstance(act, Sym) or (i == 2 and ln.trailing_sym):
                children.append(relabel_node(children[1], pan_swap(ln.weighing)))
            else:
                raise DanglingGoto(f"line {line_no} jumps to missing line {act.target}", ln.source_line, None)
        return Decision(ln.weighing, tuple(children))

    return StrategyTree(n, build(0))


def _action_text(line_no: int, i: int, child: Node) -> str:
    if isinstance(child, Terminal):
        leaf = child.leaf
        if leaf.kind is LeafKind.FAKESET:
            return "{" + ", ".join(map(str, leaf.coins)) + "}"
        return "(" + ", ".join(map(str, leaf.coins)) + ")"
    return f"=> {3 * line_no + 1 + i}"


def serialize_text(tree: StrategyTree, headers: bool = True, sym: bool = False) -> str:
    """Write every decision on its own canonical line.

    With ``sym`` a third child that is the pan-swap mirror of the second is
    written as ``sym`` and its lines are left out, as in hand-written listings.
    """
    if isinstance(tree.root, Terminal):
        return f"0. {_action_text(0, 0, tree.root)}.\n"
    out = []
    level = [(0, tree.root)]
    depth = 1
    while level:
        if headers:
            out.append(f"Weighing {depth}:")
        nxt = []
        for line_no, node in level:
            kids = node.children
            folded = (sym and isinstance(kids[1], Decision)
                      and kids[2] == relabel_node(kids[1], pan_swap(node.weighing)))
            acts = [_action_text(line_no, i, ch) for i, ch in enumerate(kids)]
            if folded:
                acts[2] = "sym"
                kids = kids[:2]
            out.append(f"{line_no}. {node.weighing} : {', '.join(acts)}.")
            for i, ch in enumerate(kids):
                if isinstance(ch, Decision):
                    nxt.append((3 * line_no + 1 + i, ch))
        level = nxt
        depth += 1
    return "\n".join(out) + "\n"


def _node_doc(node: Node) -> dict[str, Any]:
    if isinstance(node, Terminal):
        return {"leaf": {"kind": node.leaf.kind.value, "coins": list(node.leaf.coins)}}
    return {
        "weighing": {"left": list(node.weighing.left), "right": list(node.weighing.right)},
        "children": [_node_doc(ch) for ch in node.children],
    }


def serialize_interchange(tree: StrategyTree) -> dict[str, Any]:
    return {"schema": SCHEMA, "n_coins": tree.n_coins, "root": _node_doc(tree.root)}


def _int_list(value, where: str) -> tuple[int, ...]:
    if not isinstance(value, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in value):
        raise SchemaError(f"{where} must be a list of integers")
    return tuple(value)


def _node_from_doc(doc, where: str) -> Node:
    if not isinstance(doc, dict):
        raise SchemaError(f"{where} must be an object")
    if "leaf" in doc:
        leaf = doc["leaf"]
        if not isinstance(leaf, dict) or "kind" not in leaf:
            raise SchemaError(f"{where}.leaf needs a kind")
        try:
            kind = LeafKind(leaf["kind"])
            return Terminal(Leaf(kind, _int_list(leaf.get("coins", []), f"{where}.leaf.coins")))
        except ValueError as exc:
            raise SchemaError(f"{where}.leaf: {exc}") from None
    if "weighing" not in doc or "children" not in doc:
        raise SchemaError(f"{where} needs either a leaf or a weighing with children")
    w = doc["weighing"]
    if not isinstance(w, dict):
        raise SchemaError(f"{where}.weighing must be an object")
    try:
        weighing = Weighing(_int_list(w.get("left"), f"{where}.weighing.left"),
                            _int_list(w.get("right"), f"{where}.weighing.right"))
    except ValueError as exc:
        raise SchemaError(f"{where}.weighing: {exc}") from None
    children = doc["children"]
    if not isinstance(children, list) or len(children) != 3:
        raise SchemaError(f"{where}.children must hold exactly three nodes")
    return Decision(weighing, tuple(_node_from_doc(ch, f"{where}.children[{i}]") for i, ch in enumerate(children)))


def parse_interchange(doc: dict[str, Any] | str) -> StrategyTree:
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"not JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise SchemaError("document must be an object")
    if doc.get("schema") != SCHEMA:
        raise SchemaError(f"unsupported schema {doc.get('schema')!r}")
    n = doc.get("n_coins")
    if not isinstance(n, int) or n < 2:
        raise SchemaError("n_coins must be an integer >= 2")
    root = _node_from_doc(doc.get("root"), "root")
    try:
        return StrategyTree(n, root)
    except ValueError as exc:
        raise SchemaError(str(exc)) from None

