import math

import pytest

from cwlab.bounds import (
    PROVEN,
    emit_tables,
    fc_bounds,
    fc_exact,
    fc_upper,
    induced_scalable_bound,
    itb,
    log_upper,
    scalable_itb,
    upper_by_thirds,
)

ITB = [3, 4, 7, 13, 22, 38, 66, 115, 198, 344]
FOUND = [2, 4, 6, 11, 20, 36, 60, 108, 180, 324]
INDUCED = [2, 4, 7, 12, 22, 38, 66, 114, 198, 343]
SCALABLE_ITB = [2, 3, 6, 12, 21, 37, 65, 114, 197, 343]

# least N needing each number of weighings
FC_TABLE = {1: (2, 2), 2: (3, 4), 3: (5, 6), 4: (7, 11), 5: (12, 20), 6: (21, 36), 7: (39, 62)}


def test_weighing_rows():
    ws = range(1, 11)
    assert [itb(w) for w in ws] == ITB
    assert [induced_scalable_bound(w) for w in ws] == INDUCED
    assert [scalable_itb(w) for w in ws] == SCALABLE_ITB


def test_chain_and_monotone():
    for w in range(31):
        assert scalable_itb(w) <= induced_scalable_bound(w) <= itb(w)
        if w:
            assert itb(w - 1) <= itb(w)
            assert scalable_itb(w - 1) <= scalable_itb(w)
            assert induced_scalable_bound(w - 1) <= induced_scalable_bound(w)


def test_defining_inequalities():
    for w in range(25):
        n = scalable_itb(w)
        assert n * (n + 1) // 2 <= 3 ** w < (n + 1) * (n + 2) // 2
        m = induced_scalable_bound(w)
        assert m * m <= 2 * 3 ** w < (m + 1) ** 2


def test_negative_rejected():
    with pytest.raises(ValueError):
        itb(-1)


def test_fc_table():
    for w, (lo, hi) in FC_TABLE.items():
        for n in range(lo, hi + 1):
            assert fc_exact(n) == w, n
    for n in (37, 38):
        assert fc_exact(n) == (6, 7)
    assert fc_bounds(2) == (1, 1)
    assert fc_exact(20) == 5
    assert fc_upper(62) == 7


def test_bounds_hold_against_table():
    for n in range(2, 63):
        lo, hi = fc_bounds(n)
        assert lo <= hi
        assert lo >= math.ceil(math.log(n * (n - 1) // 2, 3) - 1e-9)


def test_large_uppers():
    assert fc_upper(180) == 9
    assert fc_upper(324) == 10
    # the composition route alone for 180 = 9*20
    assert fc_upper(20) + fc_upper(18) == 10


def test_closed_forms():
    for n in range(2, 400):
        assert fc_upper(n) <= upper_by_thirds(n)
    for n in range(9, 400):
        assert fc_upper(n) <= log_upper(n) + 1e-9


def test_proven_values():
    assert PROVEN[0] == 2 and PROVEN[3] == 6


def test_emitted_tables():
    t = emit_tables(10, 40)
    rows = {r.w: r for r in t.by_w}
    assert rows[6].found == 36 and rows[9].found == 180 and rows[2].scalable_itb == 3
    for r in t.by_w:
        assert r.found <= r.itb
    text = t.text()
    itb_row = next(x for x in text.splitlines() if x.startswith("ITB"))
    assert itb_row.split()[-1] == "344"
    assert t.csv().splitlines()[0] == "w,found,itb,induced_scalable,scalable_itb"
