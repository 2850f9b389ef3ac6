"""Pure-Python AND/OR search kernel.

States are tuples of row bitmasks over 0-based coin indices (bit ``c`` of
``rows[f]`` means fake ``f`` with chameleon ``c``).  Group-graph states keep
diagonal bits as loops.  The compiled kernel in ``_kernel.pyx`` implements the
same algorithm and must return identical trees and node counts.

Result trees are nested tuples::

    ("L", kind, mask)                 kind: "out" (support mask) or "set"
    ("W", left_mask, right_mask, (bal, lo, hi))
"""

from __future__ import annotations

import time

FC, SCALABLE, PSEUDO = 0, 1, 2

PRUNE_PAIR = 1
PRUNE_DEF = 2
PRUNE_LEAF = 4
PRUNE_SUPPORT = 8
PRUNE_DEF_LITERAL = 16
PRUNE_ALL = PRUNE_PAIR | PRUNE_DEF | PRUNE_LEAF | PRUNE_SUPPORT


class BudgetExceeded(Exception):
    pass


def popcount(x: int) -> int:
    return bin(x).count("1")


def split(rows, left, right):
    bal = []
    lo = []
    hi = []
    for i, row in enumerate(rows):
        bit = 1 << i
        if not row:
            bal.append(0)
            lo.append(0)
            hi.append(0)
        elif left & bit:
            bal.append(row & right)
            lo.append(row)
            hi.append(0)
        elif right & bit:
            bal.append(row & left)
            lo.append(0)
            hi.append(row)
        else:
            bal.append(row)
            lo.append(row & left)
            hi.append(row & right)
    return tuple(bal), tuple(lo), tuple(hi)


def support_of(rows) -> int:
    m = 0
    for i, row in enumerate(rows):
        if row:
            m |= 1 << i
    return m


def double_edges(rows) -> int:
    d = 0
    n = len(rows)
    for i in range(n):
        row = rows[i] >> (i + 1)
        j = i + 1
        while row:
            if row & 1 and rows[j] >> i & 1:
                d += 1
            row >>= 1
            j += 1
    return d


def graph_stats(rows):
    """``(D, E, F)`` of a group graph given as rows with loops."""
    n = len(rows)
    sinks = 0
    loops = 0
    for i in range(n):
        if not rows[i]:
            sinks |= 1 << i
        elif rows[i] >> i & 1:
            loops += 1
    e = 0
    for i in range(n):
        if rows[i] & sinks:
            e += 1
    return double_edges(rows), e, loops


def pair_bound_ok(rows, r, support_term, cap=2):
    d = 0
    covered = 0
    n = len(rows)
    for i in range(n):
        row = rows[i] >> (i + 1)
        j = i + 1
        while row:
            if row & 1 and rows[j] >> i & 1:
                d += 1
                covered |= (1 << i) | (1 << j)
            row >>= 1
            j += 1
    need = d
    if support_term:
        loose = popcount(support_of(rows) & ~covered)
        need += (loose + cap - 1) // cap
    return need <= 3 ** r


def def_bound_ok(rows, r, cap=2):
    """``D + ceil(F / cap) <= 3**r``.

    A double edge needs a leaf of its own with no loop on it, and a leaf holds
    at most ``cap`` loops (two for a two-coin leaf, six for a fake-only set).
    """
    d, _, f = graph_stats(rows)
    return d + (f + cap - 1) // cap <= 3 ** r


def literal_def_bound_ok(rows, r, absolute=False):
    """``D + ceil(max(E - F, 0) / 6) + F <= 3**r`` taken at face value.

    Not sound: a two-coin leaf joined by a double edge may also hold two
    vertices of E, which this count charges twice.
    """
    d, e, f = graph_stats(rows)
    extra = abs(e - f) if absolute else max(e - f, 0)
    return d + (extra + 5) // 6 + f <= 3 ** r


def scalable_pair_ok(rows, sup) -> bool:
    """Closed form of the leaf table: a leaf with at most two coins survives
    one more scaling unless a coin ``x`` with a loop has an edge to the other
    coin ``y`` and ``y`` has an edge back or a loop of its own."""
    if sup & (sup - 1) == 0:
        return True
    low = sup & -sup
    a = low.bit_length() - 1
    b = (sup ^ low).bit_length() - 1
    return not (_loop_into(rows, a, b) or _loop_into(rows, b, a))


def _loop_into(rows, x, y):
    return rows[x] >> x & 1 and rows[x] >> y & 1 and (rows[y] >> x & 1 or rows[y] >> y & 1)


def coin_classes(rows, weighable):
    """Partition weighable coins into classes of mutually exchangeable coins.

    Coins ``a`` and ``b`` share a class when swapping them maps the state onto
    itself; the relation is an equivalence because composed transpositions of
    automorphisms are automorphisms.
    """
    n = len(rows)
    cols = [0] * n
    for f in range(n):
        row = rows[f]
        while row:
            low = row & -row
            c = low.bit_length() - 1
            cols[c] |= 1 << f
            row ^= low
    classes = []
    rep_of = {}
    for a in range(n):
        if not weighable >> a & 1:
            continue
        placed = False
        for k, cls in enumerate(classes):
            b = cls[0]
            if _swappable(rows, cols, a, b):
                cls.append(a)
                placed = True
                break
        if not placed:
            classes.append([a])
        rep_of[a] = len(classes)
    return classes


def _swap_bits(x, a, b):
    ba = x >> a & 1
    bb = x >> b & 1
    if ba != bb:
        x ^= (1 << a) | (1 << b)
    return x


def _swappable(rows, cols, a, b):
    if _swap_bits(rows[a], a, b) != rows[b]:
        return False
    if _swap_bits(cols[a], a, b) != cols[b]:
        return False
    return True


def candidates(rows, weighable):
    """Weighings up to coin exchange and pan mirroring, in canonical order."""
    classes = coin_classes(rows, weighable)
    out = {}
    k = len(classes)
    total = sum(len(c) for c in classes)
    choice = [(0, 0)] * k

    def rec(i, nl, nr):
        if i == k:
            if nl == nr and nl > 0:
                left = 0
                right = 0
                for (l, r), cls in zip(choice, classes):
                    for c in cls[:l]:
                        left |= 1 << c
                    for c in cls[l:l + r]:
                        right |= 1 << c
                lk = _wkey(nl, left, right)
                rk = _wkey(nl, right, left)
                key, w = (lk, (left, right)) if lk <= rk else (rk, (right, left))
                mirror = tuple((r, l) for l, r in choice)
                sig = min(tuple(choice), mirror)
                if sig not in out or key < out[sig][0]:
                    out[sig] = (key, w)
            return
        size = len(classes[i])
        for l in range(size + 1):
            for r in range(size - l + 1):
                choice[i] = (l, r)
                rec(i + 1, nl + l, nr + r)
        choice[i] = (0, 0)

    if total >= 2:
        rec(0, 0, 0)
    return [w for _, w in sorted(out.values())]


def _bits(mask):
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def _wkey(p, left, right):
    return (p, _bits(left), _bits(right))


class Solver:
    """Depth-bounded AND/OR search with memoisation.

    ``mode`` selects the leaf rule.  ``leaf_table(rows, support)`` may
    override the built-in two-coin rule of the scalable and pseudo modes.
    ``fakeset_ok`` decides fake-only-set leaves in pseudo mode; sets holding a
    double edge are never accepted.
    """

    def __init__(self, n, mode=FC, prune=PRUNE_ALL, weighable=None, leaf_table=None,
                 fakeset_ok=None, node_budget=None, deadline=None, progress=None,
                 symmetry=True, absolute_def=False):
        self.n = n
        self.mode = mode
        self.prune = prune
        self.weighable = (1 << n) - 1 if weighable is None else weighable
        self.leaf_table = leaf_table
        self.fakeset_ok = fakeset_ok
        self.node_budget = node_budget
        self.deadline = deadline
        self.progress = progress
        self.symmetry = symmetry
        self.absolute_def = absolute_def
        self.nodes = 0
        self.failed = {}
        self.solved = {}

    # leaf rule -------------------------------------------------------
    def leaf(self, rows):
        sup = support_of(rows)
        k = popcount(sup)
        if self.mode == FC:
            if k <= 2:
                return ("L", "out", sup)
            return None
        if k <= 2:
            ok = scalable_pair_ok(rows, sup) if self.leaf_table is None else self.leaf_table(rows, sup)
            if ok:
                return ("L", "out", sup)
        if (self.mode == PSEUDO and 3 <= k <= 6 and not double_edges(rows)
                and self.fakeset_ok(rows, sup)):
            return ("L", "set", sup)
        return None

    def bound_ok(self, rows, r):
        cap = 6 if self.mode == PSEUDO else 2
        if self.prune & PRUNE_PAIR and not pair_bound_ok(rows, r, self.prune & PRUNE_SUPPORT, cap):
            return False
        if self.mode != FC:
            if self.prune & PRUNE_DEF and not def_bound_ok(rows, r, cap):
                return False
            if self.prune & PRUNE_DEF_LITERAL and not literal_def_bound_ok(rows, r, self.absolute_def):
                return False
        return True

    def _tick(self, r, rows):
        self.nodes += 1
        if self.node_budget is not None and self.nodes > self.node_budget:
            raise BudgetExceeded()
        if self.nodes & 1023 == 0 or self.nodes == 1:
            if self.deadline is not None and time.monotonic() > self.deadline:
                raise BudgetExceeded()
            if self.progress is not None:
                self.progress(self.nodes, r, rows)

    def candidate_list(self, rows):
        if self.symmetry:
            return candidates(rows, self.weighable)
        return candidates_plain(self.weighable)

    # search ----------------------------------------------------------
    def solve(self, rows, r):
        leaf = self.leaf(rows)
        if leaf is not None:
            return leaf
        if r <= 0:
            return None
        if not self.bound_ok(rows, r):
            return None
        got = self.solved.get(rows)
        # exact depth only: the witness stays a function of (state, r)
        if got is not None and got[0] == r:
            return got[1]
        if self.failed.get(rows, -1) >= r:
            return None
        self._tick(r, rows)
        quick = self.prune & PRUNE_LEAF
        for left, right in self.candidate_list(rows):
            kids = split(rows, left, right)
            if quick:
                if kids[0] == rows or kids[1] == rows or kids[2] == rows:
                    continue
                if r == 1 and (self.leaf(kids[0]) is None or self.leaf(kids[1]) is None
                               or self.leaf(kids[2]) is None):
                    continue
            if not (self.bound_ok(kids[0], r - 1) and self.bound_ok(kids[1], r - 1)
                    and self.bound_ok(kids[2], r - 1)):
                continue
            subs = [None, None, None]
            ok = True
            for o in _order(kids):
                sub = self.solve(kids[o], r - 1)
                if sub is None:
                    ok = False
                    break
                subs[o] = sub
            if ok:
                result = ("W", left, right, tuple(subs))
                self.solved[rows] = (r, result)
                return result
        if self.failed.get(rows, -1) < r:
            self.failed[rows] = r
        return None


def _order(kids):
    # hardest child first so failures surface early; ties keep outcome order
    sizes = [sum(popcount(x) for x in k) for k in kids]
    return sorted(range(3), key=lambda o: (-sizes[o], o))


def candidates_plain(weighable):
    coins = _bits(weighable)
    out = []
    n = len(coins)

    def rec(i, left, right, nl, nr):
        if i == n:
            if nl == nr and nl > 0 and _wkey(nl, left, right) <= _wkey(nl, right, left):
                out.append((_wkey(nl, left, right), (left, right)))
            return
        bit = 1 << coins[i]
        rec(i + 1, left, right, nl, nr)
        rec(i + 1, left | bit, right, nl + 1, nr)
        rec(i + 1, left, right | bit, nl, nr + 1)

    rec(0, 0, 0, 0, 0)
    return [w for _, w in sorted(out)]
