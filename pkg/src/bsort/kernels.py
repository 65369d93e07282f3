"""Hot loops: the single-bit partition pass and the explicit-stack driver.

Every entry point in :mod:`bsort.core` funnels into :func:`drain`, which
pops frames ``(bit, ps, pe, asc, mode, depth)`` off a fixed-size stack:

* mode ``MODE_RADIX`` partitions on ``bit`` and recurses on ``bit - 1`` for
  both halves (binary quicksort);
* mode ``MODE_EXPONENT`` does the same but switches its children to
  ``MODE_RADIX`` once the least significant exponent bit has been handled.

Ranges of size <= 1 are dropped without inspection.

Counters: ``counts[bit]`` accumulates elements inspected at that bit
position.  ``trace`` (shape ``(cap, 6)``) receives one row per pass when
``cap > 0``: ``bit, ps, pe, asc, depth, k``.
"""
import numpy as np

from ._jit import njit

MODE_RADIX = 0
MODE_EXPONENT = 1

KIND_UNSIGNED = 0
KIND_SIGNED = 1
KIND_FLOAT = 2

STACK_CAP = 2 * 64 + 4
NO_TRACE = np.zeros((0, 6), dtype=np.int64)


@njit(cache=True)
def partition(a, mask, ps, pe, asc):
    """One forward scan; returns ``(k, swaps)``.

    Element i moves to the front (position k) when its masked bit is clear
    and ``asc`` is set, or when the bit is set and ``asc`` is not.
    """
    k = ps
    swaps = 0
    for i in range(ps, pe):
        v = a[i]
        if ((v & mask) == 0) == asc:
            if i != k:
                a[i] = a[k]
                a[k] = v
                swaps += 1
            k += 1
    return k, swaps


@njit(cache=True)
def drain(a, stack, top, mant_bits, counts, trace, ntrace):
    """Run frames until the stack is empty; returns ``(swaps, max_depth, ntrace)``."""
    swaps = 0
    max_depth = 0
    tcap = trace.shape[0]
    while top > 0:
        top -= 1
        bit = stack[top, 0]
        ps = stack[top, 1]
        pe = stack[top, 2]
        asc = stack[top, 3] != 0
        mode = stack[top, 4]
        depth = stack[top, 5]
        if pe - ps <= 1:
            continue
        mask = np.uint64(1) << np.uint64(bit)
        k, s = partition(a, mask, ps, pe, asc)
        swaps += s
        counts[bit] += pe - ps
        if depth > max_depth:
            max_depth = depth
        if ntrace < tcap:
            trace[ntrace, 0] = bit
            trace[ntrace, 1] = ps
            trace[ntrace, 2] = pe
            trace[ntrace, 3] = 1 if asc else 0
            trace[ntrace, 4] = depth
            trace[ntrace, 5] = k
            ntrace += 1
        if bit == 0:
            continue
        child = mode
        if mode == MODE_EXPONENT and bit == mant_bits:
            child = MODE_RADIX
        # right half first so the left half is processed first
        stack[top, 0] = bit - 1
        stack[top, 1] = k
        stack[top, 2] = pe
        stack[top, 4] = child
        stack[top, 5] = depth + 1
        top += 1
        stack[top, 0] = bit - 1
        stack[top, 1] = ps
        stack[top, 2] = k
        stack[top, 3] = 1 if asc else 0
        stack[top, 4] = child
        stack[top, 5] = depth + 1
        top += 1
    return swaps, max_depth, ntrace


@njit(cache=True)
def push(stack, top, bit, ps, pe, asc, mode, depth):
    stack[top, 0] = bit
    stack[top, 1] = ps
    stack[top, 2] = pe
    stack[top, 3] = 1 if asc else 0
    stack[top, 4] = mode
    stack[top, 5] = depth
    return top + 1


@njit(cache=True)
def run_from(a, bit, ps, pe, asc, mode, depth, mant_bits, counts, trace):
    """Start the driver from a single frame."""
    stack = np.empty((STACK_CAP, 6), dtype=np.int64)
    top = push(stack, 0, bit, ps, pe, asc, mode, depth)
    return drain(a, stack, top, mant_bits, counts, trace, 0)


@njit(cache=True)
def bsort_kernel(a, kind, width, mant_bits, asc, invert_negatives, counts, trace):
    """Whole-array sort for one scheme kind; returns ``(swaps, max_depth, ntrace)``.

    Signed and float arrays get a sign pass in the opposite direction first.
    For floats the sign-set partition is sorted with ``not asc`` when
    ``invert_negatives`` is true.
    """
    n = a.shape[0]
    top_bit = width - 1
    if kind == KIND_UNSIGNED:
        return run_from(a, top_bit, 0, n, asc, MODE_RADIX, 1, mant_bits, counts, trace)
    if n <= 1:
        return 0, 0, 0

    mask = np.uint64(1) << np.uint64(top_bit)
    k, swaps = partition(a, mask, 0, n, not asc)
    counts[top_bit] += n
    ntrace = 0
    if trace.shape[0] > 0:
        trace[0, 0] = top_bit
        trace[0, 1] = 0
        trace[0, 2] = n
        trace[0, 3] = 0 if asc else 1
        trace[0, 4] = 1
        trace[0, 5] = k
        ntrace = 1
    if top_bit == 0:
        return swaps, 1, ntrace

    stack = np.empty((STACK_CAP, 6), dtype=np.int64)
    top = 0
    if kind == KIND_SIGNED:
        top = push(stack, top, top_bit - 1, k, n, asc, MODE_RADIX, 2)
        top = push(stack, top, top_bit - 1, 0, k, asc, MODE_RADIX, 2)
    else:
        # sign-set words sit in [0, k) when ascending, [k, n) when descending
        neg_asc = (not asc) if invert_negatives else asc
        lo_asc = neg_asc if asc else asc
        hi_asc = asc if asc else neg_asc
        top = push(stack, top, top_bit - 1, k, n, hi_asc, MODE_EXPONENT, 2)
        top = push(stack, top, top_bit - 1, 0, k, lo_asc, MODE_EXPONENT, 2)
    s, depth, ntrace = drain(a, stack, top, mant_bits, counts, trace, ntrace)
    if depth < 1:
        depth = 1
    return swaps + s, depth, ntrace
