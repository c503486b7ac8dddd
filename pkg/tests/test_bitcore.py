from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ait.bitcore import (decode_pref, encode_pref, pair, parse_bits, render_bits, shortlex_key,
                         strings_of_length, strings_up_to, triple, unpair)
from ait.errors import MalformedCode

bits = st.text(alphabet="01", max_size=24)


def test_pref_examples():
    assert encode_pref("") == "1"
    assert encode_pref("1") == "011"
    assert encode_pref("01") == "00101"
    assert pair("1", "0") == "0110"
    assert triple("", "", "") == "11"


@given(bits, bits)
def test_pref_round_trip(u, rest):
    assert decode_pref(encode_pref(u) + rest) == (u, rest)
    assert len(encode_pref(u)) == 2 * len(u) + 1


@given(bits, bits)
def test_pair_round_trip(x, y):
    assert unpair(pair(x, y)) == (x, y)


@given(bits, bits, bits)
def test_triple_nesting(x, y, z):
    a, rest = unpair(triple(x, y, z))
    assert a == x and unpair(rest) == (y, z)


@given(bits, bits)
def test_pref_code_is_prefix_free(u, v):
    if u != v:
        a, b = encode_pref(u), encode_pref(v)
        assert not a.startswith(b) and not b.startswith(a)


def test_pref_kraft_by_length():
    # 2^n words of length n, each coded in 2n+1 bits.
    for n in range(8):
        total = sum(Fraction(1, 2 ** len(encode_pref(u))) for u in strings_of_length(n))
        assert total == Fraction(1, 2 ** (n + 1))


@pytest.mark.parametrize("w", ["", "0", "000", "0010", "00011"])
def test_decode_malformed(w):
    with pytest.raises(MalformedCode):
        decode_pref(w)


def test_strings_up_to_order():
    assert strings_up_to(2) == ["", "0", "1", "00", "01", "10", "11"]
    assert len(strings_up_to(5)) == 63
    assert sorted(strings_up_to(3), key=shortlex_key) == strings_up_to(3)


def test_cli_bit_tokens():
    assert parse_bits("-") == ""
    assert parse_bits("0110") == "0110"
    assert render_bits("") == "-"
    with pytest.raises(ValueError):
        parse_bits("012")
