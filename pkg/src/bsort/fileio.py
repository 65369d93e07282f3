"""Text and binary word-file formats used by the CLI.

Binary layout (little-endian)::

    b"BSRT" | version 0x01 | scheme byte | 0x00 | count (u64) | words

Each word takes ``ceil(width / 8)`` bytes, so NaN payloads and -0 survive a
round trip.  Text files hold whitespace- or comma-separated decimal values;
floats also accept ``inf``, ``-inf`` and ``nan``.
"""
from __future__ import annotations

import math
import struct

import numpy as np

from .bitword import (
    SCHEME_BYTES,
    Kind,
    WordScheme,
    get_scheme,
    value_to_word,
    word_to_value,
)

MAGIC = b"BSRT"
VERSION = 0x01
_HEADER = struct.Struct("<4sBBBQ")
_CODE_OF_BYTE = {v: k for k, v in SCHEME_BYTES.items()}


class FormatError(ValueError):
    """Malformed input; ``line`` is 1-based for text input, None for binary."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


def _parse_token(tok: str, scheme: WordScheme):
    if scheme.kind is Kind.FLOAT:
        low = tok.lower()
        if low in ("inf", "+inf", "infinity", "+infinity"):
            return math.inf
        if low in ("-inf", "-infinity"):
            return -math.inf
        if low in ("nan", "+nan", "-nan"):
            return math.nan
        return float(tok)
    return int(tok, 10)


def parse_text(text: str, scheme: WordScheme) -> np.ndarray:
    words = []
    for lineno, line in enumerate(text.splitlines(), 1):
        for tok in line.replace(",", " ").split():
            try:
                words.append(value_to_word(_parse_token(tok, scheme), scheme))
            except ValueError as exc:
                raise FormatError(f"bad value {tok!r} for {scheme}: {exc}", lineno) from None
    return np.array(words, dtype=scheme.container)


def format_value(word: int, scheme: WordScheme) -> str:
    value = word_to_value(word, scheme)
    if scheme.kind is not Kind.FLOAT:
        return str(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "-inf" if value < 0 else "inf"
    if scheme.code == "f32":
        return str(np.float32(value))
    return repr(value)


def format_text(words: np.ndarray, scheme: WordScheme) -> str:
    return " ".join(format_value(w, scheme) for w in np.asarray(words).tolist()) + "\n"


def _word_dtype(nbytes: int) -> np.dtype | None:
    return {1: np.dtype("<u1"), 2: np.dtype("<u2"), 4: np.dtype("<u4"), 8: np.dtype("<u8")}.get(nbytes)


def to_binary(words: np.ndarray, scheme: WordScheme) -> bytes:
    header = _HEADER.pack(MAGIC, VERSION, SCHEME_BYTES[scheme.code], 0, len(words))
    dt = _word_dtype(scheme.nbytes)
    if dt is not None:
        return header + np.asarray(words).astype(dt).tobytes()
    return header + b"".join(int(w).to_bytes(scheme.nbytes, "little") for w in words)


def from_binary(data: bytes) -> tuple[WordScheme, np.ndarray]:
    if len(data) < _HEADER.size:
        raise FormatError("truncated header")
    magic, version, code, _reserved, count = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise FormatError(f"unsupported version {version}")
    if code not in _CODE_OF_BYTE:
        raise FormatError(f"unknown scheme byte {code:#04x}")
    scheme = get_scheme(_CODE_OF_BYTE[code])
    body = data[_HEADER.size:]
    if len(body) != count * scheme.nbytes:
        raise FormatError(f"expected {count * scheme.nbytes} bytes of words, got {len(body)}")
    dt = _word_dtype(scheme.nbytes)
    if dt is not None:
        words = np.frombuffer(body, dtype=dt).astype(scheme.container)
    else:
        words = np.array(
            [int.from_bytes(body[i:i + scheme.nbytes], "little")
             for i in range(0, len(body), scheme.nbytes)],
            dtype=scheme.container,
        )
    if scheme.width < scheme.container.itemsize * 8 and (words >> scheme.width).any():
        raise FormatError(f"word exceeds {scheme.width} bits")
    return scheme, words
