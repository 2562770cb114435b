import numpy as np
import pytest
from hypothesis import given, strategies as st

from tncode.pauli import (
    PRODUCT,
    PauliString,
    commutes,
    concat,
    delete_qubits,
    embed,
    format_pauli,
    multiply,
    parse,
    restrict,
    symplectic,
    weight,
)

from conftest import paulis


def test_single_qubit_product_is_y():
    assert format_pauli(multiply(parse("XI"), parse("ZI"))) == "YI"


def test_steane_generator_product():
    assert format_pauli(multiply(parse("XXIXXII"), parse("IXXXIIX"))) == "XIXIXIX"


def test_product_table_matches_bits():
    for a in range(4):
        for b in range(4):
            pa, pb = PauliString.from_labels([a]), PauliString.from_labels([b])
            assert (pa * pb)[0] == PRODUCT[a, b]


def test_commutation_examples():
    assert not commutes(parse("X"), parse("Z"))
    assert commutes(parse("XXIXXII"), parse("ZZIZZII"))
    assert not commutes(parse("IIZZIII"), parse("XXIXXII"))


def test_weight_examples():
    assert weight(PauliString.identity(7)) == 0
    assert weight(parse("IIZZIII")) == 2
    assert weight(parse("XXXXXXX")) == 7


def test_parse_examples():
    assert list(parse("XYZYXIZ").labels()) == [1, 2, 3, 2, 1, 0, 3]
    empty = parse("")
    assert empty.n == 0 and empty.is_identity
    with pytest.raises(ValueError):
        parse("QZ")


def test_restrict_embed_examples():
    assert format_pauli(restrict(parse("XXIXXII"), [0, 1])) == "XX"
    assert format_pauli(embed(parse("Z"), [3], 7)) == "IIIZIII"
    with pytest.raises(ValueError):
        restrict(parse("XX"), [0, 0])
    with pytest.raises(IndexError):
        embed(parse("Z"), [7], 7)


def test_length_mismatch():
    with pytest.raises(ValueError):
        multiply(parse("X"), parse("XX"))
    with pytest.raises(ValueError):
        commutes(parse("X"), parse("XX"))


def test_delete_and_concat():
    p = parse("XYZI")
    assert format_pauli(delete_qubits(p, [1, 3])) == "XZ"
    assert format_pauli(concat(parse("XY"), parse("ZI"))) == "XYZI"


@given(paulis(9), paulis(9))
def test_commutation_symmetric(a, b):
    assert commutes(a, b) == commutes(b, a)


@given(paulis(9))
def test_square_is_identity(a):
    assert (a * a).is_identity


@given(paulis(9), paulis(9), paulis(9))
def test_symplectic_bilinear(a, b, c):
    assert symplectic(a * b, c) == symplectic(a, c) ^ symplectic(b, c)


@given(paulis(8), paulis(8), paulis(8))
def test_product_associative_commutative(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a


@given(st.text(alphabet="IXYZ", max_size=40))
def test_parse_format_round_trip(text):
    assert format_pauli(parse(text)) == text


@given(paulis(5), st.permutations(range(11)))
def test_embed_restrict_round_trip(p, perm):
    legs = list(perm[:5])
    assert restrict(embed(p, legs, 11), legs) == p


@given(st.lists(st.integers(0, 3), max_size=30))
def test_labels_round_trip(labels):
    p = PauliString.from_labels(labels)
    assert list(p.labels()) == labels
    assert weight(p) == int(np.count_nonzero(labels))
