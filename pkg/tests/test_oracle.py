import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bsort import core
from bsort.bitword import (
    F6, F32, I4, SCHEMES, U3, U8, decode_array, decompose_finite_fraction,
    encode_array, fraction_digits,
)
from bsort.oracle import OrderedWord, exhaustive_check, hierarchy_sort, oracle_sort


def test_oracle_examples():
    assert oracle_sort(np.array([5, 7, 1, 6, 3, 4, 0], dtype=np.uint8), U8).tolist() == [0, 1, 3, 4, 5, 6, 7]
    f6_case = np.array([0b001111, 0b001101, 0b110001, 0b111100], dtype=np.uint8)
    assert decode_array(oracle_sort(f6_case, F6), F6) == [-math.inf, -2.5, 1.25, 1.75]
    assert f6_case.tolist() == [0b001111, 0b001101, 0b110001, 0b111100]


def test_ordered_word():
    ow = OrderedWord.of(0b110001, F6)
    assert (ow.raw, ow.key) == (0b110001, 0b001110)


@pytest.mark.parametrize("code", list(SCHEMES))
@given(data=st.data())
def test_oracle_idempotent_and_symmetric(code, data):
    scheme = SCHEMES[code]
    a = np.array(data.draw(st.lists(st.integers(0, scheme.all_ones), max_size=40)),
                 dtype=scheme.container)
    up = oracle_sort(a, scheme, True)
    assert np.array_equal(oracle_sort(up, scheme, True), up)
    assert np.array_equal(up[::-1], oracle_sort(a, scheme, False))


@given(st.lists(st.floats(allow_nan=False, width=32), max_size=50))
def test_oracle_agrees_with_native_float_order(values):
    a = encode_array(np.array(values, dtype=np.float32), F32)
    out = np.array(decode_array(oracle_sort(a, F32), F32))
    assert np.array_equal(out, np.sort(np.array(values, dtype=np.float64)))
    zeros = [math.copysign(1, v) for v in out if v == 0]
    assert zeros == sorted(zeros)


@pytest.mark.parametrize("scheme", [F6, I4, U3])
def test_exhaustive_check_clean(scheme):
    report = exhaustive_check(scheme, trials=200, seed=1)
    assert report.ok
    assert report.trials == 200 and report.cases == 400


def test_exhaustive_universe_sorted():
    a = np.arange(8, dtype=np.uint8)[::-1].copy()
    core.bsort(a, U3)
    assert a.tolist() == list(range(8))


def test_exhaustive_check_catches_broken_sorter():
    def broken(a, scheme, asc):
        return core.bsort_float(a, scheme, asc, invert_negatives=False)

    report = exhaustive_check(F6, trials=20, seed=2, sorter=broken)
    assert report.mismatches > 0


def test_exhaustive_check_width_limit():
    with pytest.raises(ValueError):
        exhaustive_check(SCHEMES["u16"], trials=1)


def dec(x):
    return decompose_finite_fraction(fraction_digits(x, 2), 2)


def undec(values, ds):
    lookup = {d: v for v, d in zip(values, map(dec, values))}
    return [lookup[d] for d in ds]


def test_wrong_hierarchies_reproduce_failures():
    xs = [-2.0, 0.0, 0.5]
    assert undec(xs, hierarchy_sort(list(map(dec, xs)), ("m", "p", "s"))) == [0.0, 0.5, -2.0]
    assert undec(xs, hierarchy_sort(list(map(dec, xs)), ("p", "m", "s"))) == [0.5, 0.0, -2.0]
    ys = [0.75, 2.0]
    assert undec(ys, hierarchy_sort(list(map(dec, ys)), ("s", "m", "p"))) == [2.0, 0.75]


def test_decompositions_used_by_wrong_hierarchies():
    assert (dec(-2.0).s, dec(-2.0).m, dec(-2.0).p) == (-1, 0b10, 0)
    assert (dec(0.5).m, dec(0.5).p) == (1, -1)
    assert (dec(0.75).m, dec(0.75).p) == (0b11, -2)
