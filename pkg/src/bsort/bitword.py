"""Word schemes, single-bit masks and the total-order key transform.

Raw words are plain non-negative integers holding a bit pattern in their low
``width`` bits.  Arrays of raw words are numpy unsigned arrays (any container
at least ``width`` bits wide); scalars are Python ints.
"""
from __future__ import annotations

import enum
import math
import string
import struct
from dataclasses import dataclass
from fractions import Fraction

import numpy as np


class SchemeError(ValueError):
    """Raised when a word scheme is invalid or the wrong kind for an operation."""


class Kind(enum.Enum):
    UNSIGNED = "unsigned"
    SIGNED = "signed"
    FLOAT = "float"


@dataclass(frozen=True)
class WordScheme:
    kind: Kind
    width: int
    exp_bits: int = 0
    mant_bits: int = 0
    code: str = ""

    def __post_init__(self):
        if not 1 <= self.width <= 64:
            raise SchemeError(f"width must be in [1, 64], got {self.width}")
        if self.kind is Kind.FLOAT:
            if self.exp_bits < 1 or self.mant_bits < 1:
                raise SchemeError("float schemes need exp_bits >= 1 and mant_bits >= 1")
            if self.width != self.exp_bits + self.mant_bits + 1:
                raise SchemeError(
                    f"float width {self.width} != 1 + {self.exp_bits} + {self.mant_bits}"
                )
        elif self.exp_bits or self.mant_bits:
            raise SchemeError("exp_bits/mant_bits only apply to float schemes")

    @property
    def all_ones(self) -> int:
        return (1 << self.width) - 1

    @property
    def sign_bit(self) -> int:
        return 1 << (self.width - 1)

    @property
    def bias(self) -> int:
        return (1 << (self.exp_bits - 1)) - 1

    @property
    def container(self) -> np.dtype:
        """Smallest numpy unsigned dtype that holds a raw word."""
        for dt in (np.uint8, np.uint16, np.uint32, np.uint64):
            if np.dtype(dt).itemsize * 8 >= self.width:
                return np.dtype(dt)
        raise AssertionError("unreachable")

    @property
    def native(self) -> np.dtype | None:
        """numpy value dtype whose bits are exactly this scheme, if one exists."""
        return _NATIVE.get(self.code)

    @property
    def nbytes(self) -> int:
        return (self.width + 7) // 8

    def __str__(self):
        return self.code or f"{self.kind.value}{self.width}"


def unsigned(width: int, code: str = "") -> WordScheme:
    return WordScheme(Kind.UNSIGNED, width, code=code or f"u{width}")


def signed(width: int, code: str = "") -> WordScheme:
    return WordScheme(Kind.SIGNED, width, code=code or f"i{width}")


def floating(exp_bits: int, mant_bits: int, code: str = "") -> WordScheme:
    width = exp_bits + mant_bits + 1
    return WordScheme(Kind.FLOAT, width, exp_bits, mant_bits, code=code or f"f{width}")


U8, U16, U32, U64 = (unsigned(w) for w in (8, 16, 32, 64))
I8, I16, I32, I64 = (signed(w) for w in (8, 16, 32, 64))
F32 = floating(8, 23)
F64 = floating(11, 52)
F6 = floating(3, 2)
U3 = unsigned(3)
I4 = signed(4)

SCHEMES: dict[str, WordScheme] = {
    s.code: s for s in (U8, U16, U32, U64, I8, I16, I32, I64, F32, F64, F6, U3, I4)
}
NATIVE_CODES = ("u8", "u16", "u32", "u64", "i8", "i16", "i32", "i64", "f32", "f64")

# Scheme byte used by the binary file format.
SCHEME_BYTES: dict[str, int] = {
    "u8": 0x01, "u16": 0x02, "u32": 0x03, "u64": 0x04,
    "i8": 0x11, "i16": 0x12, "i32": 0x13, "i64": 0x14,
    "f32": 0x23, "f64": 0x24,
    "f6": 0x30, "u3": 0x31, "i4": 0x32,
}

_NATIVE = {
    "u8": np.dtype(np.uint8), "u16": np.dtype(np.uint16),
    "u32": np.dtype(np.uint32), "u64": np.dtype(np.uint64),
    "i8": np.dtype(np.int8), "i16": np.dtype(np.int16),
    "i32": np.dtype(np.int32), "i64": np.dtype(np.int64),
    "f32": np.dtype(np.float32), "f64": np.dtype(np.float64),
}


def get_scheme(code: str) -> WordScheme:
    try:
        return SCHEMES[code]
    except KeyError:
        raise SchemeError(
            f"unknown scheme {code!r}; expected one of {', '.join(SCHEMES)}"
        ) from None


def scheme_for_dtype(dtype) -> WordScheme:
    dtype = np.dtype(dtype)
    for code, dt in _NATIVE.items():
        if dt == dtype:
            return SCHEMES[code]
    raise SchemeError(f"no word scheme for dtype {dtype}")


# --------------------------------------------------------------------------
# masks

def mask_msb(scheme: WordScheme) -> int:
    return 1 << (scheme.width - 1)


def mask_shift_right(m: int) -> int:
    # masks are unsigned, so this is always a logical shift
    return m >> 1


def last_exponent_mask(scheme: WordScheme) -> int:
    """Mask of the least significant exponent bit."""
    if scheme.kind is not Kind.FLOAT:
        raise SchemeError(f"{scheme} is not a float scheme")
    return 1 << scheme.mant_bits


# --------------------------------------------------------------------------
# total order key

def total_order_key(word: int, scheme: WordScheme) -> int:
    """Map a raw word to an unsigned key whose natural order is the sort order.

    Unsigned words map to themselves, signed words get their sign bit flipped,
    and float words are complemented when negative or get the sign bit set
    otherwise.
    """
    word = int(word)
    if scheme.kind is Kind.UNSIGNED:
        return word
    if scheme.kind is Kind.SIGNED:
        return word ^ scheme.sign_bit
    if word & scheme.sign_bit:
        return word ^ scheme.all_ones
    return word | scheme.sign_bit


def key_to_word(key: int, scheme: WordScheme) -> int:
    """Inverse of :func:`total_order_key`."""
    key = int(key)
    if scheme.kind is Kind.UNSIGNED:
        return key
    if scheme.kind is Kind.SIGNED:
        return key ^ scheme.sign_bit
    if key & scheme.sign_bit:
        return key ^ scheme.sign_bit
    return key ^ scheme.all_ones


def order_keys(words: np.ndarray, scheme: WordScheme) -> np.ndarray:
    """Vectorised :func:`total_order_key`; returns keys in the scheme's container dtype."""
    dt = scheme.container
    w = np.asarray(words).astype(dt, copy=False)
    sign = dt.type(scheme.sign_bit)
    if scheme.kind is Kind.UNSIGNED:
        return w.copy()
    if scheme.kind is Kind.SIGNED:
        return w ^ sign
    ones = dt.type(scheme.all_ones)
    neg = (w & sign) != 0
    return np.where(neg, w ^ ones, w | sign).astype(dt, copy=False)


def words_from_keys(keys: np.ndarray, scheme: WordScheme) -> np.ndarray:
    """Vectorised :func:`key_to_word`."""
    dt = scheme.container
    k = np.asarray(keys).astype(dt, copy=False)
    sign = dt.type(scheme.sign_bit)
    if scheme.kind is Kind.UNSIGNED:
        return k.copy()
    if scheme.kind is Kind.SIGNED:
        return k ^ sign
    ones = dt.type(scheme.all_ones)
    return np.where((k & sign) != 0, k ^ sign, k ^ ones).astype(dt, copy=False)


# --------------------------------------------------------------------------
# values <-> raw words

def is_nan_word(word: int, scheme: WordScheme) -> bool:
    if scheme.kind is not Kind.FLOAT:
        return False
    exp_mask = ((1 << scheme.exp_bits) - 1) << scheme.mant_bits
    return (word & exp_mask) == exp_mask and (word & ((1 << scheme.mant_bits) - 1)) != 0


def quiet_nan(scheme: WordScheme) -> int:
    """Positive quiet NaN with an otherwise empty payload."""
    exp_mask = ((1 << scheme.exp_bits) - 1) << scheme.mant_bits
    return exp_mask | (1 << (scheme.mant_bits - 1))


def infinity(scheme: WordScheme, negative: bool = False) -> int:
    word = ((1 << scheme.exp_bits) - 1) << scheme.mant_bits
    return word | scheme.sign_bit if negative else word


def word_to_value(word: int, scheme: WordScheme):
    """Decode a raw word into a Python int (integer schemes) or float."""
    word = int(word)
    if scheme.kind is Kind.UNSIGNED:
        return word
    if scheme.kind is Kind.SIGNED:
        return word - (1 << scheme.width) if word & scheme.sign_bit else word
    if scheme.code == "f32":
        return struct.unpack("<f", struct.pack("<I", word))[0]
    if scheme.code == "f64":
        return struct.unpack("<d", struct.pack("<Q", word))[0]
    return _decode_minifloat(word, scheme)


def _decode_minifloat(word: int, scheme: WordScheme) -> float:
    t, e = scheme.mant_bits, scheme.exp_bits
    sign = -1.0 if word & scheme.sign_bit else 1.0
    exp = (word >> t) & ((1 << e) - 1)
    mant = word & ((1 << t) - 1)
    if exp == (1 << e) - 1:
        return math.nan if mant else sign * math.inf
    if exp == 0:
        return sign * math.ldexp(mant, 1 - scheme.bias - t)
    return sign * math.ldexp(mant | (1 << t), exp - scheme.bias - t)


def value_to_word(value, scheme: WordScheme) -> int:
    """Encode a number as a raw word.

    Raises ValueError when the value is out of range for an integer scheme or
    not exactly representable in a toy float scheme.  ``nan`` always encodes
    to :func:`quiet_nan`.
    """
    if scheme.kind is not Kind.FLOAT:
        if isinstance(value, float):
            if not value.is_integer():
                raise ValueError(f"{value!r} is not an integer")
            value = int(value)
        lo, hi = (0, scheme.all_ones) if scheme.kind is Kind.UNSIGNED else (
            -(1 << (scheme.width - 1)), (1 << (scheme.width - 1)) - 1)
        if not lo <= value <= hi:
            raise ValueError(f"{value} out of range [{lo}, {hi}] for {scheme}")
        return value & scheme.all_ones
    value = float(value)
    if math.isnan(value):
        return quiet_nan(scheme)
    if scheme.code == "f32":
        try:
            return struct.unpack("<I", struct.pack("<f", value))[0]
        except OverflowError:
            raise ValueError(f"{value!r} overflows f32") from None
    if scheme.code == "f64":
        return struct.unpack("<Q", struct.pack("<d", value))[0]
    for word in range(1 << scheme.width):
        decoded = _decode_minifloat(word, scheme)
        if decoded == value and math.copysign(1.0, decoded) == math.copysign(1.0, value):
            return word
    raise ValueError(f"{value!r} is not representable in {scheme}")


def encode_array(values, scheme: WordScheme) -> np.ndarray:
    """Encode a sequence of numbers into a raw-word array (container dtype)."""
    native = scheme.native
    if native is not None and isinstance(values, np.ndarray) and values.dtype == native:
        return values.view(scheme.container).copy()
    return np.array([value_to_word(v, scheme) for v in values], dtype=scheme.container)


def decode_array(words, scheme: WordScheme) -> list:
    return [word_to_value(w, scheme) for w in np.asarray(words).tolist()]


# --------------------------------------------------------------------------
# sign / integer mantissa / non-positive exponent decomposition

@dataclass(frozen=True)
class Decomposition:
    s: int
    m: int
    p: int
    b: int

    def value(self) -> Fraction:
        return self.s * self.m * Fraction(self.b) ** self.p


def _digit_value(ch: str, base: int) -> int:
    d = string.digits + string.ascii_lowercase
    v = d.find(ch.lower())
    if v < 0 or v >= base:
        raise ValueError(f"invalid digit {ch!r} for base {base}")
    return v


def decompose_finite_fraction(digits: str, base: int = 10) -> Decomposition:
    """Split ``[-]int[.frac]`` written in ``base`` into ``s * m * base**p``.

    >>> decompose_finite_fraction("112.9")
    Decomposition(s=1, m=1129, p=-1, b=10)
    >>> decompose_finite_fraction("111.11", 2)
    Decomposition(s=1, m=31, p=-2, b=2)
    """
    if base < 2 or base > 36:
        raise ValueError(f"base must be in [2, 36], got {base}")
    text = digits.strip()
    s = 1
    if text[:1] in "+-" and text:
        s = -1 if text[0] == "-" else 1
        text = text[1:]
    int_part, _, frac_part = text.partition(".")
    if not int_part and not frac_part:
        raise ValueError(f"no digits in {digits!r}")
    a = 0
    for ch in int_part:
        a = a * base + _digit_value(ch, base)
    c = 0
    for ch in frac_part:
        c = c * base + _digit_value(ch, base)
    q = len(frac_part)
    return Decomposition(s, a * base**q + c, -q, base)


def fraction_digits(x, base: int = 2) -> str:
    """Finite positional expansion of ``x`` in ``base`` (raises if it recurs)."""
    x = Fraction(x)
    sign = "-" if x < 0 else ""
    x = abs(x)
    whole, frac = divmod(x, 1)
    alphabet = string.digits + string.ascii_lowercase
    out = []
    w = int(whole)
    while True:
        w, r = divmod(w, base)
        out.append(alphabet[r])
        if not w:
            break
    head = "".join(reversed(out))
    tail = []
    for _ in range(4096):
        if not frac:
            break
        frac *= base
        d, frac = divmod(frac, 1)
        tail.append(alphabet[int(d)])
    else:
        raise ValueError(f"{x} has no finite expansion in base {base}")
    return sign + head + ("." + "".join(tail) if tail else "")
