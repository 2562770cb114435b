from hypothesis import given, strategies as st

from tncode import gf2

rows_st = st.lists(st.integers(0, 2**12 - 1), max_size=10)


def test_rank_small():
    assert gf2.rank([0b011, 0b110, 0b101]) == 2
    assert gf2.rank([]) == 0
    assert gf2.rank([0, 0]) == 0


@given(rows_st)
def test_rref_rows_span_the_same_space(rows):
    red, pivots = gf2.rref(rows)
    assert len(red) == len(pivots) == gf2.rank(rows)
    for r in rows:
        assert gf2.in_span(r, red, pivots)
    for r in red:
        assert gf2.rank(rows + [r]) == gf2.rank(rows)


@given(rows_st)
def test_pivots_are_cleared(rows):
    red, pivots = gf2.rref(rows)
    for i, pv in enumerate(pivots):
        for j, r in enumerate(red):
            assert ((r >> pv) & 1) == (i == j)


@given(rows_st)
def test_right_inverse(rows):
    red, _ = gf2.rref(rows)
    cols = gf2.right_inverse_columns(red, 12)
    for i, v in enumerate(cols):
        for j, r in enumerate(red):
            assert (r & v).bit_count() % 2 == (i == j)
