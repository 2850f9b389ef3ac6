# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of ``_engine.Solver`` for instances of at most 64 coins.

Same algorithm, same candidate order, same memo semantics: trees and node
counts are identical to the pure-Python kernel.
"""

import time

from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, free, qsort

from ._engine import BudgetExceeded, FC, SCALABLE, PSEUDO, PRUNE_PAIR, PRUNE_DEF, PRUNE_LEAF, PRUNE_SUPPORT, PRUNE_DEF_LITERAL, PRUNE_ALL

DEF MAXN = 64


cdef inline int popc(uint64_t x) noexcept nogil:
    return __builtin_popcountll(x)


cdef inline int lowbit(uint64_t x) noexcept nogil:
    return __builtin_ctzll(x)


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


ctypedef struct Cand:
    int p
    uint64_t left
    uint64_t right


cdef inline int mask_cmp(uint64_t a, uint64_t b) noexcept nogil:
    # lexicographic order of the ascending bit lists of equal-size masks
    cdef uint64_t x = a ^ b
    if x == 0:
        return 0
    if (a >> lowbit(x)) & 1:
        return -1
    return 1


cdef inline int key_cmp(int p1, uint64_t l1, uint64_t r1, int p2, uint64_t l2, uint64_t r2) noexcept nogil:
    if p1 != p2:
        return -1 if p1 < p2 else 1
    cdef int c = mask_cmp(l1, l2)
    if c:
        return c
    return mask_cmp(r1, r2)


cdef int cand_cmp(const void *a, const void *b) noexcept nogil:
    cdef Cand *x = <Cand *> a
    cdef Cand *y = <Cand *> b
    return key_cmp(x.p, x.left, x.right, y.p, y.left, y.right)


cdef inline void split3(int n, uint64_t *rows, uint64_t left, uint64_t right,
                        uint64_t *bal, uint64_t *lo, uint64_t *hi) noexcept nogil:
    cdef int i
    cdef uint64_t row, bit
    for i in range(n):
        row = rows[i]
        bit = (<uint64_t> 1) << i
        if not row:
            bal[i] = 0
            lo[i] = 0
            hi[i] = 0
        elif left & bit:
            bal[i] = row & right
            lo[i] = row
            hi[i] = 0
        elif right & bit:
            bal[i] = row & left
            lo[i] = 0
            hi[i] = row
        else:
            bal[i] = row
            lo[i] = row & left
            hi[i] = row & right


cdef inline uint64_t support_c(int n, uint64_t *rows) noexcept nogil:
    cdef uint64_t m = 0
    cdef int i
    for i in range(n):
        if rows[i]:
            m |= (<uint64_t> 1) << i
    return m


cdef inline int rows_equal(int n, uint64_t *a, uint64_t *b) noexcept nogil:
    cdef int i
    for i in range(n):
        if a[i] != b[i]:
            return 0
    return 1


cdef int double_edges_c(int n, uint64_t *rows) noexcept nogil:
    cdef int d = 0, i, j
    cdef uint64_t row
    for i in range(n):
        row = rows[i] >> (i + 1) if i + 1 < 64 else 0
        while row:
            j = i + 1 + lowbit(row)
            if (rows[j] >> i) & 1:
                d += 1
            row &= row - 1
    return d


cdef int pair_bound_c(int n, uint64_t *rows, int r, int support_term, int cap) noexcept nogil:
    cdef int d = 0, i, j
    cdef uint64_t covered = 0, row
    for i in range(n):
        row = rows[i] >> (i + 1) if i + 1 < 64 else 0
        while row:
            j = i + 1 + lowbit(row)
            if (rows[j] >> i) & 1:
                d += 1
                covered |= ((<uint64_t> 1) << i) | ((<uint64_t> 1) << j)
            row &= row - 1
    cdef long long need = d
    if support_term:
        need += (popc(support_c(n, rows) & ~covered) + cap - 1) // cap
    return need <= pow3(r)


cdef inline long long pow3(int r) noexcept nogil:
    cdef long long x = 1
    cdef int i
    for i in range(r):
        x *= 3
    return x


cdef int def_bound_c(int n, uint64_t *rows, int r, int cap) noexcept nogil:
    cdef int loops = 0, i
    for i in range(n):
        if (rows[i] >> i) & 1:
            loops += 1
    return double_edges_c(n, rows) + (loops + cap - 1) // cap <= pow3(r)


cdef inline int loop_into(uint64_t *rows, int x, int y) noexcept nogil:
    return ((rows[x] >> x) & 1) and ((rows[x] >> y) & 1) and (((rows[y] >> x) & 1) or ((rows[y] >> y) & 1))


cdef int scalable_pair_c(uint64_t *rows, uint64_t sup) noexcept nogil:
    if sup & (sup - 1) == 0:
        return 1
    cdef int a = lowbit(sup)
    cdef int b = lowbit(sup & (sup - 1))
    return not (loop_into(rows, a, b) or loop_into(rows, b, a))


cdef int literal_def_bound_c(int n, uint64_t *rows, int r, int absolute) noexcept nogil:
    cdef uint64_t sinks = 0, row
    cdef int loops = 0, e = 0, d = 0, i, j, extra
    for i in range(n):
        if not rows[i]:
            sinks |= (<uint64_t> 1) << i
        elif (rows[i] >> i) & 1:
            loops += 1
    for i in range(n):
        if rows[i] & sinks:
            e += 1
    for i in range(n):
        row = rows[i] >> (i + 1) if i + 1 < 64 else 0
        while row:
            j = i + 1 + lowbit(row)
            if (rows[j] >> i) & 1:
                d += 1
            row &= row - 1
    if absolute:
        extra = e - loops if e >= loops else loops - e
    else:
        extra = e - loops if e > loops else 0
    return d + (extra + 5) // 6 + loops <= pow3(r)


cdef inline uint64_t swap_bits(uint64_t x, int a, int b) noexcept nogil:
    if ((x >> a) & 1) != ((x >> b) & 1):
        x ^= ((<uint64_t> 1) << a) | ((<uint64_t> 1) << b)
    return x


cdef class Solver:
    cdef public int n, mode, prune
    cdef public object weighable_obj
    cdef uint64_t weighable
    cdef public object leaf_table, fakeset_ok, node_budget, deadline, progress
    cdef public bint symmetry, absolute_def
    cdef public long long nodes
    cdef public dict failed, solved
    cdef object _plain

    def __init__(self, n, mode=FC, prune=PRUNE_ALL, weighable=None, leaf_table=None,
                 fakeset_ok=None, node_budget=None, deadline=None, progress=None,
                 symmetry=True, absolute_def=False):
        if n > MAXN:
            raise ValueError("compiled kernel handles at most 64 coins")
        self.n = n
        self.mode = mode
        self.prune = prune
        self.weighable_obj = (1 << n) - 1 if weighable is None else weighable
        self.weighable = <uint64_t> self.weighable_obj
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
        self._plain = None

    @property
    def weighable_mask(self):
        return self.weighable_obj

    cdef tuple _tuple(self, uint64_t *rows):
        return tuple([rows[i] for i in range(self.n)])

    cdef object _leaf(self, uint64_t *rows):
        cdef uint64_t sup = support_c(self.n, rows)
        cdef int k = popc(sup)
        if self.mode == FC:
            if k <= 2:
                return ("L", "out", sup)
            return None
        if k <= 2:
            if self.leaf_table is None:
                ok = scalable_pair_c(rows, sup)
            else:
                ok = self.leaf_table(self._tuple(rows), sup)
            if ok:
                return ("L", "out", sup)
        if (self.mode == PSEUDO and 3 <= k <= 6 and double_edges_c(self.n, rows) == 0
                and self.fakeset_ok(self._tuple(rows), sup)):
            return ("L", "set", sup)
        return None

    def leaf(self, rows):
        cdef uint64_t buf[MAXN]
        for i in range(self.n):
            buf[i] = rows[i]
        return self._leaf(buf)

    cdef bint _bound_ok(self, uint64_t *rows, int r):
        cdef int cap = 6 if self.mode == PSEUDO else 2
        if self.prune & PRUNE_PAIR and not pair_bound_c(self.n, rows, r, self.prune & PRUNE_SUPPORT, cap):
            return False
        if self.mode != FC:
            if self.prune & PRUNE_DEF and not def_bound_c(self.n, rows, r, cap):
                return False
            if self.prune & PRUNE_DEF_LITERAL and not literal_def_bound_c(self.n, rows, r, self.absolute_def):
                return False
        return True

    def bound_ok(self, rows, r):
        cdef uint64_t buf[MAXN]
        for i in range(self.n):
            buf[i] = rows[i]
        return self._bound_ok(buf, r)

    cdef _tick(self, int r, tuple rows):
        self.nodes += 1
        if self.node_budget is not None and self.nodes > self.node_budget:
            raise BudgetExceeded()
        if self.nodes & 1023 == 0 or self.nodes == 1:
            if self.deadline is not None and time.monotonic() > self.deadline:
                raise BudgetExceeded()
            if self.progress is not None:
                self.progress(self.nodes, r, rows)

    cdef int _candidates(self, uint64_t *rows, Cand **out) except -1:
        """Fill ``out`` with a malloc'd candidate array; return its length."""
        cdef int n = self.n
        cdef uint64_t cols[MAXN]
        cdef int cls_first[MAXN]
        cdef int cls_size[MAXN]
        cdef uint64_t cls_members[MAXN]
        cdef int k = 0, a, j, total = 0, found
        cdef uint64_t row
        for a in range(n):
            cols[a] = 0
        for a in range(n):
            row = rows[a]
            while row:
                j = lowbit(row)
                cols[j] |= (<uint64_t> 1) << a
                row &= row - 1
        for a in range(n):
            if not (self.weighable >> a) & 1:
                continue
            found = 0
            for j in range(k):
                b = cls_first[j]
                if swap_bits(rows[a], a, b) == rows[b] and swap_bits(cols[a], a, b) == cols[b]:
                    cls_size[j] += 1
                    cls_members[j] |= (<uint64_t> 1) << a
                    found = 1
                    break
            if not found:
                cls_first[k] = a
                cls_size[k] = 1
                cls_members[k] = (<uint64_t> 1) << a
                k += 1
            total += 1
        if total < 2:
            out[0] = NULL
            return 0
        # per-class member lists in ascending order
        cdef int order[MAXN][MAXN]
        cdef int c, m
        cdef uint64_t mm
        for c in range(k):
            mm = cls_members[c]
            m = 0
            while mm:
                order[c][m] = lowbit(mm)
                m += 1
                mm &= mm - 1
        # enumerate (l, r) per class with an explicit odometer
        cdef int lch[MAXN]
        cdef int rch[MAXN]
        for c in range(k):
            lch[c] = 0
            rch[c] = 0
        cdef int cap = 1024, cnt = 0
        cdef Cand *buf = <Cand *> malloc(cap * sizeof(Cand))
        cdef int nl, nr, cmpv, i
        cdef uint64_t l1, r1, l2, r2, t
        cdef int p
        while True:
            nl = 0
            nr = 0
            for c in range(k):
                nl += lch[c]
                nr += rch[c]
            if nl == nr and nl > 0:
                # keep only the lexicographically smaller of choice / mirror
                cmpv = 0
                for c in range(k):
                    if lch[c] != rch[c]:
                        cmpv = -1 if lch[c] < rch[c] else 1
                        break
                if cmpv <= 0:
                    l1 = 0
                    r1 = 0
                    l2 = 0
                    r2 = 0
                    for c in range(k):
                        for i in range(lch[c]):
                            l1 |= (<uint64_t> 1) << order[c][i]
                        for i in range(lch[c], lch[c] + rch[c]):
                            r1 |= (<uint64_t> 1) << order[c][i]
                        for i in range(rch[c]):
                            l2 |= (<uint64_t> 1) << order[c][i]
                        for i in range(rch[c], rch[c] + lch[c]):
                            r2 |= (<uint64_t> 1) << order[c][i]
                    p = nl
                    if key_cmp(p, r1, l1, p, l1, r1) < 0:
                        t = l1; l1 = r1; r1 = t
                    if key_cmp(p, r2, l2, p, l2, r2) < 0:
                        t = l2; l2 = r2; r2 = t
                    if key_cmp(p, l2, r2, p, l1, r1) < 0:
                        l1 = l2
                        r1 = r2
                    if cnt == cap:
                        cap *= 2
                        buf = <Cand *> realloc_cands(buf, cap)
                    buf[cnt].p = p
                    buf[cnt].left = l1
                    buf[cnt].right = r1
                    cnt += 1
            # advance odometer (last class fastest, matching the recursion order)
            c = k - 1
            while c >= 0:
                if rch[c] < cls_size[c] - lch[c]:
                    rch[c] += 1
                    break
                if lch[c] < cls_size[c]:
                    lch[c] += 1
                    rch[c] = 0
                    break
                lch[c] = 0
                rch[c] = 0
                c -= 1
            if c < 0:
                break
        qsort(buf, cnt, sizeof(Cand), cand_cmp)
        out[0] = buf
        return cnt

    cdef int _candidates_plain(self, Cand **out) except -1:
        if self._plain is None:
            from ._engine import candidates_plain, popcount
            self._plain = candidates_plain(self.weighable_obj)
        cdef list plain = self._plain
        cdef int cnt = len(plain), i
        cdef Cand *buf = <Cand *> malloc((cnt if cnt else 1) * sizeof(Cand))
        for i in range(cnt):
            l, r = plain[i]
            buf[i].left = <uint64_t> l
            buf[i].right = <uint64_t> r
            buf[i].p = popc(buf[i].left)
        out[0] = buf
        return cnt

    def candidate_list(self, rows):
        cdef uint64_t buf[MAXN]
        cdef Cand *cands
        cdef int cnt, i
        for i in range(self.n):
            buf[i] = rows[i]
        if self.symmetry:
            cnt = self._candidates(buf, &cands)
        else:
            cnt = self._candidates_plain(&cands)
        result = [(cands[i].left, cands[i].right) for i in range(cnt)]
        if cands != NULL:
            free(cands)
        return result

    def solve(self, rows, r):
        cdef uint64_t buf[MAXN]
        for i in range(self.n):
            buf[i] = rows[i]
        return self._solve(buf, tuple(rows), r)

    cdef object _solve(self, uint64_t *rows, tuple key, int r):
        leaf = self._leaf(rows)
        if leaf is not None:
            return leaf
        if r <= 0:
            return None
        if not self._bound_ok(rows, r):
            return None
        got = self.solved.get(key)
        # exact depth only: the witness stays a function of (state, r)
        if got is not None and got[0] == r:
            return got[1]
        if self.failed.get(key, -1) >= r:
            return None
        self._tick(r, key)
        cdef int n = self.n
        cdef Cand *cands
        cdef int cnt
        if self.symmetry:
            cnt = self._candidates(rows, &cands)
        else:
            cnt = self._candidates_plain(&cands)
        cdef uint64_t kids[3][MAXN]
        cdef int quick = self.prune & PRUNE_LEAF
        cdef int ci, o, ok, i
        cdef int sizes[3]
        cdef int ordr[3]
        try:
            for ci in range(cnt):
                split3(n, rows, cands[ci].left, cands[ci].right, kids[0], kids[1], kids[2])
                if quick:
                    if rows_equal(n, kids[0], rows) or rows_equal(n, kids[1], rows) or rows_equal(n, kids[2], rows):
                        continue
                    if r == 1 and (self._leaf(kids[0]) is None or self._leaf(kids[1]) is None
                                   or self._leaf(kids[2]) is None):
                        continue
                if not (self._bound_ok(kids[0], r - 1) and self._bound_ok(kids[1], r - 1)
                        and self._bound_ok(kids[2], r - 1)):
                    continue
                for o in range(3):
                    sizes[o] = 0
                    for i in range(n):
                        sizes[o] += popc(kids[o][i])
                order3(sizes, ordr)
                subs = [None, None, None]
                ok = 1
                for i in range(3):
                    o = ordr[i]
                    sub = self._solve(kids[o], self._tuple(kids[o]), r - 1)
                    if sub is None:
                        ok = 0
                        break
                    subs[o] = sub
                if ok:
                    result = ("W", cands[ci].left, cands[ci].right, tuple(subs))
                    self.solved[key] = (r, result)
                    return result
        finally:
            if cands != NULL:
                free(cands)
        if self.failed.get(key, -1) < r:
            self.failed[key] = r
        return None


cdef inline void order3(int *sizes, int *ordr) noexcept nogil:
    # hardest child first; ties keep outcome order (stable)
    cdef int i, j, t
    ordr[0] = 0
    ordr[1] = 1
    ordr[2] = 2
    for i in range(1, 3):
        j = i
        while j > 0 and sizes[ordr[j - 1]] < sizes[ordr[j]]:
            t = ordr[j - 1]; ordr[j - 1] = ordr[j]; ordr[j] = t
            j -= 1


cdef extern from "stdlib.h":
    void *realloc(void *ptr, size_t size) nogil


cdef inline Cand *realloc_cands(Cand *buf, int cap) noexcept nogil:
    return <Cand *> realloc(buf, cap * sizeof(Cand))
