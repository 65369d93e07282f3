"""In-place bitwise MSB radix sorting for unsigned, signed and float words.

All functions take numpy arrays of raw words (unsigned dtype, pattern in the
low ``scheme.width`` bits) and mutate them in place.  ``sort_native`` accepts
ordinary numpy integer/float arrays and sorts them through a bit view.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .bitword import (
    Kind,
    SchemeError,
    WordScheme,
    last_exponent_mask,
    mask_msb,
    scheme_for_dtype,
)


@dataclass
class SortStats:
    """Counters gathered while sorting.

    ``inspections_per_level[i]`` counts element examinations at the i-th bit
    processed, counting from the most significant one.
    """

    width: int
    inspections_per_level: np.ndarray = None
    swaps: int = 0
    max_depth: int = 0

    def __post_init__(self):
        if self.inspections_per_level is None:
            self.inspections_per_level = np.zeros(self.width, dtype=np.int64)

    @property
    def levels(self) -> int:
        return int(np.count_nonzero(self.inspections_per_level))

    @property
    def inspections(self) -> int:
        return int(self.inspections_per_level.sum())

    def violations(self, n: int) -> list[str]:
        """Complexity bounds that do not hold for an input of size ``n``."""
        out = []
        if self.max_depth > self.width:
            out.append(f"max_depth {self.max_depth} > width {self.width}")
        worst = int(self.inspections_per_level.max(initial=0))
        if worst > n:
            out.append(f"per-level inspections {worst} > n {n}")
        if self.inspections > self.width * n:
            out.append(f"total inspections {self.inspections} > width*n {self.width * n}")
        return out

    def _absorb(self, counts: np.ndarray, swaps: int, depth: int):
        # counts are indexed by bit position; levels run from the MSB down
        self.inspections_per_level += counts[: self.width][::-1]
        self.swaps += int(swaps)
        self.max_depth = max(self.max_depth, int(depth))


@dataclass
class PassRecord:
    """One partition pass: mask, half-open range, direction, depth and result."""

    mask: int
    ps: int
    pe: int
    asc: bool
    depth: int
    k: int


def _check_words(a: np.ndarray, scheme: WordScheme):
    if not isinstance(a, np.ndarray) or a.ndim != 1:
        raise TypeError("expected a 1-d numpy array of raw words")
    if a.dtype.kind != "u":
        raise TypeError(f"raw words must be an unsigned dtype, got {a.dtype}")
    bits = a.dtype.itemsize * 8
    if bits < scheme.width:
        raise SchemeError(f"{a.dtype} cannot hold {scheme.width}-bit words")
    if bits > scheme.width and a.size and (a >> a.dtype.type(scheme.width)).any():
        raise ValueError(f"words exceed {scheme.width} bits")


def _check_range(a: np.ndarray, ps: int, pe: int):
    if not 0 <= ps <= pe <= a.shape[0]:
        raise IndexError(f"invalid range [{ps}, {pe}) for length {a.shape[0]}")


def _bit(m: int) -> int:
    if m <= 0 or m & (m - 1):
        raise ValueError(f"mask {m:#x} must have exactly one bit set")
    return m.bit_length() - 1


def _counts(width: int) -> np.ndarray:
    return np.zeros(max(width, 64), dtype=np.int64)


def _trace_buffer(n: int, width: int, want: bool) -> np.ndarray:
    if not want:
        return kernels.NO_TRACE
    return np.zeros((max(n, 1) * width + 1, 6), dtype=np.int64)


def _records(buf: np.ndarray, ntrace: int) -> list[PassRecord]:
    return [
        PassRecord(1 << int(r[0]), int(r[1]), int(r[2]), bool(r[3]), int(r[4]), int(r[5]))
        for r in buf[:ntrace]
    ]


# --------------------------------------------------------------------------
# building blocks

def single_pass_partition(a, m, ps, pe, asc=True, stats=None) -> int:
    """Partition ``a[ps:pe]`` on mask ``m``; returns the split index ``k``.

    With ``asc`` words whose masked bit is clear end up in ``[ps, k)`` and the
    rest in ``[k, pe)``; without it the roles swap.
    """
    _check_range(a, ps, pe)
    bit = _bit(m)
    k, swaps = kernels.partition(a, np.uint64(m), ps, pe, bool(asc))
    if stats is not None:
        stats.swaps += int(swaps)
        if pe > ps:
            level = stats.width - 1 - bit
            if 0 <= level < stats.width:
                stats.inspections_per_level[level] += pe - ps
            stats.max_depth = max(stats.max_depth, 1)
    return int(k)


def binary_quicksort(a, m, ps, pe, asc=True, stats=None, *, trace=None):
    """Sort ``a[ps:pe]`` on bit ``m`` and every lower bit as unsigned words."""
    _check_range(a, ps, pe)
    if m == 0:
        return
    bit = _bit(m)
    width = stats.width if stats is not None else bit + 1
    counts = _counts(width)
    buf = _trace_buffer(pe - ps, bit + 1, trace is not None)
    swaps, depth, ntrace = kernels.run_from(
        a, bit, ps, pe, bool(asc), kernels.MODE_RADIX, 1, 0, counts, buf
    )
    if stats is not None:
        stats._absorb(counts, swaps, depth)
    if trace is not None:
        trace.extend(_records(buf, ntrace))


def bsort_f(a, m, ps, pe, asc, scheme: WordScheme, stats=None, *, trace=None):
    """Sort a same-signed float range by exponent bits from ``m`` down, then mantissa."""
    if scheme.kind is not Kind.FLOAT:
        raise SchemeError(f"{scheme} is not a float scheme")
    _check_range(a, ps, pe)
    bit = _bit(m)
    if not scheme.mant_bits <= bit < scheme.mant_bits + scheme.exp_bits:
        raise ValueError(f"mask {m:#x} is not an exponent bit of {scheme}")
    assert last_exponent_mask(scheme) == 1 << scheme.mant_bits
    counts = _counts(scheme.width)
    buf = _trace_buffer(pe - ps, scheme.width, trace is not None)
    swaps, depth, ntrace = kernels.run_from(
        a, bit, ps, pe, bool(asc), kernels.MODE_EXPONENT, 1, scheme.mant_bits, counts, buf
    )
    if stats is not None:
        stats._absorb(counts, swaps, depth)
    if trace is not None:
        trace.extend(_records(buf, ntrace))


# --------------------------------------------------------------------------
# whole-array entry points

_KIND_CODES = {
    Kind.UNSIGNED: kernels.KIND_UNSIGNED,
    Kind.SIGNED: kernels.KIND_SIGNED,
    Kind.FLOAT: kernels.KIND_FLOAT,
}


def _sort(a, scheme, asc, trace, invert_negatives=True) -> SortStats:
    _check_words(a, scheme)
    stats = SortStats(scheme.width)
    counts = _counts(scheme.width)
    buf = _trace_buffer(a.shape[0], scheme.width, trace is not None)
    swaps, depth, ntrace = kernels.bsort_kernel(
        a, _KIND_CODES[scheme.kind], scheme.width, scheme.mant_bits,
        bool(asc), bool(invert_negatives), counts, buf,
    )
    stats._absorb(counts, swaps, depth)
    if trace is not None:
        trace.extend(_records(buf, ntrace))
    return stats


def bsort_unsigned(a, scheme: WordScheme, asc=True, *, trace=None) -> SortStats:
    if scheme.kind is not Kind.UNSIGNED:
        raise SchemeError(f"bsort_unsigned needs an unsigned scheme, got {scheme}")
    return _sort(a, scheme, asc, trace)


def bsort_signed(a, scheme: WordScheme, asc=True, *, trace=None) -> SortStats:
    """Two's-complement sort: sign pass in the opposite direction, then radix on the rest."""
    if scheme.kind is not Kind.SIGNED:
        raise SchemeError(f"bsort_signed needs a signed scheme, got {scheme}")
    return _sort(a, scheme, asc, trace)


def bsort_float(a, scheme: WordScheme, asc=True, *, trace=None,
                invert_negatives=True) -> SortStats:
    """Sign/exponent/mantissa sort.

    After the sign pass the negative partition is sorted with the opposite
    direction so larger magnitudes come first.  ``invert_negatives=False``
    keeps the caller's direction for both partitions, which misorders
    negative numbers; it exists for mutation testing.
    """
    if scheme.kind is not Kind.FLOAT:
        raise SchemeError(f"bsort_float needs a float scheme, got {scheme}")
    return _sort(a, scheme, asc, trace, invert_negatives)


def bsort(a, scheme: WordScheme, asc=True, *, trace=None) -> SortStats:
    """Dispatch to the entry point for ``scheme.kind``."""
    if scheme.kind is Kind.UNSIGNED:
        return bsort_unsigned(a, scheme, asc, trace=trace)
    if scheme.kind is Kind.SIGNED:
        return bsort_signed(a, scheme, asc, trace=trace)
    return bsort_float(a, scheme, asc, trace=trace)


def sort_native(values: np.ndarray, asc=True) -> SortStats:
    """Sort a native numpy int/float array in place by its bit patterns."""
    scheme = scheme_for_dtype(values.dtype)
    if not values.flags.c_contiguous:
        raise ValueError("sort_native needs a contiguous array")
    return bsort(values.view(scheme.container), scheme, asc)


__all__ = [
    "PassRecord",
    "TraceLevel",
    "SortStats",
    "binary_quicksort",
    "bsort",
    "bsort_f",
    "bsort_float",
    "bsort_signed",
    "bsort_unsigned",
    "mask_msb",
    "single_pass_partition",
    "trace_levels",
    "sort_native",
]


@dataclass
class TraceLevel:
    mask: int
    words: np.ndarray
    splits: list


def trace_levels(a, scheme: WordScheme, asc=True) -> list[TraceLevel]:
    """Sort a copy of ``a`` and return its state after each bit level.

    Passes on one bit level touch disjoint ranges, so replaying the recorded
    passes level by level (most significant bit first) reproduces the
    row-per-mask picture; every replayed split index is checked against the
    one the kernel reported.
    """
    out = np.array(a, dtype=a.dtype, copy=True)
    passes: list[PassRecord] = []
    bsort(out.copy(), scheme, asc, trace=passes)
    work = out
    levels = []
    m = mask_msb(scheme)
    while m:
        splits = []
        for rec in sorted((p for p in passes if p.mask == m), key=lambda p: p.ps):
            k = single_pass_partition(work, m, rec.ps, rec.pe, rec.asc)
            if k != rec.k:
                raise AssertionError(f"replayed split {k} != recorded {rec.k} at mask {m:#x}")
            splits.append(k)
        levels.append(TraceLevel(m, work.copy(), splits))
        m >>= 1
    return levels
