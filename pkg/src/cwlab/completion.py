"""Finish a residual state with a few extra weighings.

Scaling, composition and the pseudo-solution check all end up with the same
question: given the assignments still consistent at a leaf, can a short
decision tree pin the fake down to two coins?  The residual is first
*compressed*: only the fake candidates and a handful of makeweights are
allowed on the scale, and every chameleon candidate outside that pool is
merged into one never-weighed slot.  A chameleon that never reaches the scale
behaves like a real coin, so the compression is exact for trees that only
weigh pool coins.
"""

from __future__ import annotations

from functools import lru_cache

from .core import Decision, Leaf, Node, Terminal, Weighing, coins_of
from .kernel import FC, SCALABLE, Solver

DEFAULT_MAKEWEIGHTS = 3


def compress(rows: dict[int, int], n_coins: int, makeweights: int = DEFAULT_MAKEWEIGHTS):
    """Return ``(pool, crows)``: the coin ids allowed on the scale and the
    compressed rows (pool index order, one extra slot at the end).

    The pool holds every fake candidate, up to ``makeweights`` known-real
    coins, and up to ``makeweights`` coins from each class of chameleon-only
    candidates (coins pairing with the same fakes are interchangeable).
    """
    support = 0
    chameleons = 0
    for f, row in rows.items():
        support |= 1 << f
        chameleons |= row
    pool = coins_of(support)
    extra = []
    used = support | chameleons
    c = 0
    while len(extra) < makeweights and c < n_coins:
        if not used >> c & 1:
            extra.append(c + 1)
        c += 1
    classes: dict[int, list[int]] = {}
    for c in coins_of(chameleons & ~support):
        column = 0
        for f, row in rows.items():
            if row >> (c - 1) & 1:
                column |= 1 << f
        members = classes.setdefault(column, [])
        if len(members) < makeweights:
            members.append(c)
    for members in classes.values():
        extra.extend(members)
    pool.extend(sorted(extra))
    index = {coin: i for i, coin in enumerate(pool)}
    outside = len(pool)
    crows = [0] * (len(pool) + 1)
    for f, row in rows.items():
        bits = 0
        for c in coins_of(row):
            bits |= 1 << index.get(c, outside)
        crows[index[f + 1]] = bits
    return pool, tuple(crows)


@lru_cache(maxsize=None)
def _solve_compressed(crows: tuple[int, ...], weighable: int, depth: int, scalable: bool = False):
    """Shallowest completion of a compressed state, or ``None``."""
    for d in range(depth + 1):
        if scalable:
            solver = Solver(len(crows), SCALABLE, weighable=weighable)
        else:
            solver = Solver(len(crows), FC, weighable=weighable)
        found = solver.solve(crows, d)
        if found is not None:
            return found
    return None


def engine_to_node(tree, pool) -> Node:
    """Translate a kernel result (pool-index masks) into a tree over coin ids."""
    if tree[0] == "L":
        return Terminal(Leaf.output(*(pool[i - 1] for i in coins_of(tree[2]))))
    _, left, right, kids = tree
    w = Weighing(tuple(pool[i - 1] for i in coins_of(left)), tuple(pool[i - 1] for i in coins_of(right)))
    return Decision(w, tuple(engine_to_node(k, pool) for k in kids))


def complete(rows: dict[int, int], n_coins: int, depth: int, makeweights: int = DEFAULT_MAKEWEIGHTS,
             scalable: bool = False) -> Node | None:
    """A decision tree of depth at most ``depth`` finishing ``rows``, or ``None``.

    With ``scalable`` the rows carry loops and every leaf of the completion
    must itself survive one more scaling.
    """
    if not scalable:
        rows = {f: row & ~(1 << f) for f, row in rows.items() if row & ~(1 << f)}
    if not rows:
        return Terminal(Leaf.impossible())
    pool, crows = compress(rows, n_coins, makeweights)
    found = _solve_compressed(crows, (1 << len(pool)) - 1, depth, scalable)
    if found is None:
        return None
    return engine_to_node(found, pool)


def node_depth_of(tree) -> int:
    if tree[0] == "L":
        return 0
    return 1 + max(node_depth_of(k) for k in tree[3])


def scaled_group_rows(group_rows: dict[int, int], groups, size: int = 3, loops: bool = False):
    """Expand a group-level residual (rows with loops) over the listed groups
    into coin-level rows where each group becomes ``size`` coins.

    Group ids are 0-based; coins of group ``g`` are ``size*g .. size*g+size-1``
    in the result.  Edges into groups outside ``groups`` are kept as coins of
    those groups too, so the caller can compress normally.  With ``loops``
    every coin also keeps an edge to itself (input for the next scaling).
    """
    out: dict[int, int] = {}
    for g in groups:
        row = group_rows.get(g, 0)
        if not row:
            continue
        for i in range(size):
            f = size * g + i
            bits = 0
            for h in coins_of(row):
                h -= 1
                for j in range(size):
                    c = size * h + j
                    if c != f or loops:
                        bits |= 1 << c
            if bits:
                out[f] = bits
    return out


def leaf_signature(rows, sup: int) -> tuple:
    """Per support coin: (loop, edge to the other support coin, edge elsewhere)."""
    sig = []
    for a in coins_of(sup):
        a -= 1
        row = rows[a]
        other = sup & ~(1 << a)
        sig.append((bool(row >> a & 1), bool(row & other), bool(row & ~sup)))
    return tuple(sorted(sig))


@lru_cache(maxsize=None)
def _signature_ok(sig: tuple) -> bool:
    # canonical instance: support groups 0 (and 1), one outside chameleon
    # group 2, one all-real group 3 for makeweights
    rows = {}
    for a, (loop, to_other, outside) in enumerate(sig):
        row = 0
        if loop:
            row |= 1 << a
        if to_other:
            row |= 1 << (1 - a)
        if outside:
            row |= 1 << 2
        rows[a] = row
    scaled = scaled_group_rows(rows, sorted(rows))
    return complete(scaled, 12, 2) is not None


def scalable_leaf_ok(rows, sup: int) -> bool:
    """Whether a leaf with fake support ``sup`` (at most two coins, rows with
    loops) is finished by two weighings after scaling."""
    if not sup:
        return True
    return _signature_ok(leaf_signature(rows, sup))
