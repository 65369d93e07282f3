"""Reference sorting used to check the radix sort.

Everything here is a comparison sort over :func:`total_order_key`, computed
one scalar at a time with Python ints, so it shares neither the algorithm
nor the vectorised key code with the fast path.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .bitword import Decomposition, WordScheme, total_order_key


@dataclass(frozen=True)
class OrderedWord:
    raw: int
    key: int

    @classmethod
    def of(cls, raw: int, scheme: WordScheme) -> "OrderedWord":
        raw = int(raw)
        return cls(raw, total_order_key(raw, scheme))


def oracle_sort(a, scheme: WordScheme, asc: bool = True) -> np.ndarray:
    """Return a sorted copy of ``a`` (same dtype); ``a`` is left untouched."""
    words = [OrderedWord.of(w, scheme) for w in np.asarray(a).tolist()]
    words.sort(key=lambda ow: ow.key, reverse=not asc)
    dtype = a.dtype if isinstance(a, np.ndarray) else scheme.container
    return np.array([ow.raw for ow in words], dtype=dtype)


@dataclass
class CheckReport:
    scheme: str
    trials: int = 0
    cases: int = 0
    mismatches: int = 0
    bound_violations: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.mismatches == 0 and self.bound_violations == 0


def _default_sorter(a, scheme, asc):
    from .core import bsort

    return bsort(a, scheme, asc)


def exhaustive_check(
    scheme: WordScheme,
    trials: int = 1000,
    seed: int = 0,
    max_len: int | None = None,
    sorter: Callable | None = None,
) -> CheckReport:
    """Compare the radix sort with :func:`oracle_sort` on small-width words.

    Trial 0 sorts the whole universe of ``2**width`` patterns once; the other
    trials draw a random multiset (with repeats) from it and shuffle it.  Both
    directions are checked for every trial.
    """
    if scheme.width > 12:
        raise ValueError("exhaustive_check is limited to width <= 12")
    sorter = sorter or _default_sorter
    universe = list(range(1 << scheme.width))
    max_len = max_len if max_len is not None else 2 * len(universe)
    rng = random.Random(seed)
    report = CheckReport(scheme.code)
    for trial in range(trials):
        if trial == 0:
            case = universe[:]
        else:
            case = [rng.choice(universe) for _ in range(rng.randint(0, max_len))]
        rng.shuffle(case)
        for asc in (True, False):
            a = np.array(case, dtype=scheme.container)
            expected = oracle_sort(a, scheme, asc)
            stats = sorter(a, scheme, asc)
            report.cases += 1
            if not np.array_equal(a, expected):
                report.mismatches += 1
                report.failures.append((case, asc))
            if stats is not None and stats.violations(len(case)):
                report.bound_violations += 1
        report.trials += 1
    return report


def hierarchy_sort(
    values: Sequence[Decomposition],
    order: Sequence[str] = ("s", "p", "m"),
    asc: bool = True,
) -> list[Decomposition]:
    """Multi-pass sort of decomposed numbers by fields in the given priority.

    Each field is compared by its plain integer value (sign -1 before +1),
    which is what a radix pass over that field alone achieves.  Used to show
    which field orders break numeric order.
    """
    for name in order:
        if name not in ("s", "m", "p"):
            raise ValueError(f"unknown field {name!r}")
    return sorted(values, key=lambda d: tuple(getattr(d, f) for f in order), reverse=not asc)
