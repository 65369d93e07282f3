import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bsort.bitword import (
    F6, F32, F64, I4, I8, SCHEMES, U3, U8, Decomposition, Kind, SchemeError, WordScheme,
    decode_array, decompose_finite_fraction, encode_array, floating, fraction_digits,
    key_to_word, last_exponent_mask, mask_msb, mask_shift_right, order_keys,
    total_order_key, value_to_word, word_to_value, words_from_keys,
)


def f6_value(word):
    """Independent decode of the 6-bit toy float: exact rational or special tag."""
    s = -1 if word & 0b100000 else 1
    e = (word >> 2) & 0b111
    t = word & 0b11
    if e == 0b111:
        return ("nan", s) if t else ("inf", s)
    if e == 0:
        return s * Fraction(t, 4) * Fraction(2) ** (1 - 3)
    return s * (1 + Fraction(t, 4)) * Fraction(2) ** (e - 3)


# --------------------------------------------------------------------------
# schemes

def test_builtin_schemes():
    assert (F32.exp_bits, F32.mant_bits, F32.width) == (8, 23, 32)
    assert (F64.exp_bits, F64.mant_bits, F64.width) == (11, 52, 64)
    assert (F6.exp_bits, F6.mant_bits, F6.width, F6.bias) == (3, 2, 6, 3)
    for code in ("u8", "u16", "u32", "u64", "i8", "i16", "i32", "i64", "f32", "f64", "f6"):
        assert SCHEMES[code].code == code


@pytest.mark.parametrize("kw", [
    dict(kind=Kind.UNSIGNED, width=0),
    dict(kind=Kind.UNSIGNED, width=65),
    dict(kind=Kind.FLOAT, width=8, exp_bits=3, mant_bits=2),
    dict(kind=Kind.FLOAT, width=4, exp_bits=0, mant_bits=3),
    dict(kind=Kind.SIGNED, width=8, exp_bits=2),
])
def test_invalid_schemes(kw):
    with pytest.raises(SchemeError):
        WordScheme(**kw)


# --------------------------------------------------------------------------
# masks

def test_mask_msb():
    assert mask_msb(U8) == 0x80
    assert mask_msb(F6) == 0b100000
    assert mask_msb(I4) == 0b1000


def test_mask_shift_right():
    assert mask_shift_right(0b1000) == 0b0100
    assert mask_shift_right(0b0001) == 0
    assert mask_shift_right(0b100000) == 0b010000
    assert mask_shift_right(1 << 63) == 1 << 62


@pytest.mark.parametrize("code", list(SCHEMES))
def test_mask_enumeration(code):
    scheme = SCHEMES[code]
    seen = []
    m = mask_msb(scheme)
    while m:
        seen.append(m)
        m = mask_shift_right(m)
    assert len(seen) == len(set(seen)) == scheme.width
    assert all(x & (x - 1) == 0 and x < 1 << scheme.width for x in seen)


def test_last_exponent_mask():
    assert last_exponent_mask(F32) == 1 << 23
    assert last_exponent_mask(F6) == 0b000100
    assert last_exponent_mask(F64) == 1 << 52
    with pytest.raises(SchemeError):
        last_exponent_mask(U8)


# --------------------------------------------------------------------------
# total order key

def test_total_order_key_examples():
    assert total_order_key(0x2A, U8) == 0x2A
    assert total_order_key(0x80, I8) == 0x00
    assert total_order_key(0b110001, F6) == 0b001110
    assert total_order_key(0b111100, F6) == 0b000011
    assert total_order_key(0b111100, F6) < total_order_key(0b110001, F6)


@pytest.mark.parametrize("code", ["u3", "i4", "f6", "u8", "i8"])
def test_key_is_a_bijection(code):
    scheme = SCHEMES[code]
    universe = range(1 << scheme.width)
    keys = [total_order_key(w, scheme) for w in universe]
    assert sorted(keys) == list(universe)
    assert [key_to_word(k, scheme) for k in keys] == list(universe)


def test_f6_key_order_categories():
    ordered = sorted(range(64), key=lambda w: total_order_key(w, F6))
    vals = [f6_value(w) for w in ordered]

    def rank(word, v):
        neg = bool(word & 0b100000)
        if isinstance(v, tuple):
            if v[0] == "nan":
                return 0 if neg else 8
            return 1 if neg else 7
        if v == 0:
            return 3 if neg else 4
        return 2 if v < 0 else 5

    ranks = [rank(w, v) for w, v in zip(ordered, vals)]
    assert ranks == sorted(ranks)
    assert set(ranks) == {0, 1, 2, 3, 4, 5, 7, 8}
    finite = [v for v in vals if not isinstance(v, tuple)]
    assert all(a <= b for a, b in zip(finite, finite[1:]))
    nonzero = [v for v in finite if v != 0]
    assert all(a < b for a, b in zip(nonzero, nonzero[1:]))


@pytest.mark.parametrize("code", list(SCHEMES))
def test_vectorised_keys_match_scalar(code, rng):
    scheme = SCHEMES[code]
    words = (rng.integers(0, 2**63, 500, dtype=np.uint64) * np.uint64(2)
             + rng.integers(0, 2, 500, dtype=np.uint64)) & np.uint64(scheme.all_ones)
    words = words.astype(scheme.container)
    keys = order_keys(words, scheme)
    assert keys.tolist() == [total_order_key(w, scheme) for w in words.tolist()]
    assert np.array_equal(words_from_keys(keys, scheme), words)


@given(st.floats(allow_nan=False, width=32), st.floats(allow_nan=False, width=32))
def test_f32_key_agrees_with_native_compare(x, y):
    kx = total_order_key(value_to_word(x, F32), F32)
    ky = total_order_key(value_to_word(y, F32), F32)
    if x < y:
        assert kx < ky
    elif x > y:
        assert kx > ky
    elif math.copysign(1, x) != math.copysign(1, y):
        assert (kx < ky) == (math.copysign(1, x) < 0)
    else:
        assert kx == ky


@given(st.floats(allow_nan=False), st.floats(allow_nan=False))
def test_f64_key_agrees_with_native_compare(x, y):
    kx = total_order_key(value_to_word(x, F64), F64)
    ky = total_order_key(value_to_word(y, F64), F64)
    if x != y:
        assert (kx < ky) == (x < y)


# --------------------------------------------------------------------------
# values

def test_f6_case_encodings():
    words = [value_to_word(v, F6) for v in (1.75, 1.25, -2.5, -math.inf)]
    assert words == [0b001111, 0b001101, 0b110001, 0b111100]
    assert decode_array(np.array(words), F6) == [1.75, 1.25, -2.5, -math.inf]


def test_minifloat_decode_matches_independent_decode():
    for w in range(64):
        ref = f6_value(w)
        got = word_to_value(w, F6)
        if isinstance(ref, tuple):
            assert math.isnan(got) if ref[0] == "nan" else got == ref[1] * math.inf
        else:
            assert Fraction(got) == ref
            assert math.copysign(1, got) == (-1 if w & 0b100000 else 1)


def test_value_to_word_errors():
    with pytest.raises(ValueError):
        value_to_word(256, U8)
    with pytest.raises(ValueError):
        value_to_word(-129, I8)
    with pytest.raises(ValueError):
        value_to_word(1.1, F6)
    with pytest.raises(ValueError):
        value_to_word(1e39, F32)


def test_nan_text_value_is_canonical_quiet_nan():
    assert value_to_word(math.nan, F32) == 0x7FC00000
    assert value_to_word(math.nan, F64) == 0x7FF8000000000000
    assert value_to_word(math.nan, F6) == 0b011110


def test_encode_native_array_is_bit_view():
    x = np.array([-0.0, 0.0, np.inf], dtype=np.float32)
    assert encode_array(x, F32).tolist() == [0x80000000, 0, 0x7F800000]
    assert encode_array([-1, 0, 7], I4).tolist() == [0b1111, 0, 0b0111]


# --------------------------------------------------------------------------
# decomposition

def evaluate_digits(text, base):
    """Digit-by-digit positional evaluation with exact rationals."""
    neg = text.startswith("-")
    text = text.lstrip("+-")
    ip, _, fp = text.partition(".")
    total = Fraction(0)
    for i, ch in enumerate(reversed(ip)):
        total += int(ch, 36) * Fraction(base) ** i
    for i, ch in enumerate(fp, 1):
        total += int(ch, 36) * Fraction(base) ** -i
    return -total if neg else total


@pytest.mark.parametrize("digits, base, expected", [
    ("112.9", 10, (1, 1129, -1)),
    ("-8.348975", 10, (-1, 8348975, -6)),
    ("111.11", 2, (1, 0b11111, -2)),
    ("-101.1", 2, (-1, 0b1011, -1)),
    ("4789", 10, (1, 4789, 0)),
])
def test_decomposition_examples(digits, base, expected):
    d = decompose_finite_fraction(digits, base)
    assert (d.s, d.m, d.p, d.b) == (*expected, base)
    assert d.value() == evaluate_digits(digits, base)


def test_decomposition_bad_digit():
    with pytest.raises(ValueError):
        decompose_finite_fraction("102.1", 2)
    with pytest.raises(ValueError):
        decompose_finite_fraction("-", 10)


@given(
    st.sampled_from([2, 3, 7, 10, 16]),
    st.booleans(),
    st.lists(st.integers(0, 15), min_size=1, max_size=12),
    st.lists(st.integers(0, 15), max_size=12),
)
def test_decomposition_round_trip(base, neg, ip, fp):
    digits = "0123456789abcdef"
    text = ("-" if neg else "") + "".join(digits[d % base] for d in ip)
    if fp:
        text += "." + "".join(digits[d % base] for d in fp)
    d = decompose_finite_fraction(text, base)
    assert d.m >= 0 and d.p <= 0 and d.s in (-1, 1)
    assert d.value() == evaluate_digits(text, base)


def test_fraction_digits():
    assert fraction_digits(0.75, 2) == "0.11"
    assert fraction_digits(-2.0, 2) == "-10"
    assert fraction_digits(Fraction(1129, 10), 10) == "112.9"
    with pytest.raises(ValueError):
        fraction_digits(Fraction(1, 3), 10)
