"""Seeded datasets, timing harness, CSV and SVG output.

Datasets come from SplitMix64: output ``i`` (0-based) of seed ``s`` is the
standard SplitMix64 finaliser applied to ``s + (i + 1) * 0x9E3779B97F4A7C15``
(mod 2**64), with constants 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB and
shifts 30, 27, 31.  Any implementation following that recipe reproduces the
datasets bit for bit.
"""
from __future__ import annotations

import csv
import math
import os
import re
import time
from collections import defaultdict
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from . import core
from .bitword import Kind, WordScheme, get_scheme, order_keys, words_from_keys
from .oracle import oracle_sort

DEFAULT_SEED = 0x5EED_B5027
DEFAULT_SIZES = (10**4, 10**5, 10**6, 10**7)
ALGOS = ("bsort", "platform-sort", "oracle")
DISTRIBUTIONS = ("uniform-bits", "sorted", "reverse-sorted", "few-unique", "gaussian-float")
CSV_HEADER = ("algo", "scheme", "size", "distribution", "repeat", "ns",
              "inspections", "swaps", "max_depth")

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


class VerificationError(RuntimeError):
    """A benchmarked sort produced output that is not in oracle order."""


def splitmix64(seed: int, count: int, start: int = 0) -> np.ndarray:
    """Outputs ``start .. start+count-1`` of the SplitMix64 stream for ``seed``."""
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed % 2**64) + idx * _GOLDEN
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


@dataclass(frozen=True)
class DatasetSpec:
    scheme: str
    size: int
    distribution: str = "uniform-bits"
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        get_scheme(self.scheme)
        name, k = parse_distribution(self.distribution)
        if self.size < 0:
            raise ValueError("size must be >= 0")
        if name == "gaussian-float" and get_scheme(self.scheme).kind is not Kind.FLOAT:
            raise ValueError("gaussian-float needs a float scheme")


def parse_distribution(text: str) -> tuple[str, int | None]:
    """``"few-unique(8)"`` -> ``("few-unique", 8)``; other names carry no parameter."""
    m = re.fullmatch(r"\s*([a-z-]+)\s*(?:[(:]\s*(\d+)\s*\)?)?\s*", text)
    if not m or m.group(1) not in DISTRIBUTIONS:
        raise ValueError(f"unknown distribution {text!r}")
    name, k = m.group(1), m.group(2)
    if name == "few-unique":
        if k is None or int(k) < 1:
            raise ValueError("few-unique needs a positive count, e.g. few-unique(16)")
        return name, int(k)
    if k is not None:
        raise ValueError(f"{name} takes no parameter")
    return name, None


def _uniform01(bits: np.ndarray) -> np.ndarray:
    return (bits >> np.uint64(11)).astype(np.float64) * 2.0**-53


def _nearest_minifloat(x: np.ndarray, scheme: WordScheme) -> np.ndarray:
    from .bitword import word_to_value

    finite = [(word_to_value(w, scheme), w) for w in range(1 << scheme.width)]
    finite = sorted((v, w) for v, w in finite if math.isfinite(v) and not (v == 0 and w))
    vals = np.array([v for v, _ in finite])
    words = np.array([w for _, w in finite], dtype=scheme.container)
    pos = np.clip(np.searchsorted(vals, x), 1, len(vals) - 1)
    left_closer = np.abs(x - vals[pos - 1]) <= np.abs(vals[pos] - x)
    return words[np.where(left_closer, pos - 1, pos)]


def generate(spec: DatasetSpec) -> np.ndarray:
    """Deterministic raw-word array for ``spec`` in the scheme's container dtype."""
    scheme = get_scheme(spec.scheme)
    dt = scheme.container
    name, k = parse_distribution(spec.distribution)
    n = spec.size
    ones = np.uint64(scheme.all_ones)

    if name == "gaussian-float":
        u = _uniform01(splitmix64(spec.seed, 2 * n))
        r = np.sqrt(-2.0 * np.log1p(-u[:n]))
        z = r * np.cos(2.0 * np.pi * u[n:])
        if scheme.native is not None:
            return z.astype(scheme.native).view(dt).copy()
        return _nearest_minifloat(z, scheme)

    if name == "few-unique":
        pool = splitmix64(spec.seed, k) & ones
        picks = splitmix64(spec.seed, n, start=k) % np.uint64(k)
        return pool[picks].astype(dt)

    words = (splitmix64(spec.seed, n) & ones).astype(dt)
    if name == "uniform-bits":
        return words
    ordered = words_from_keys(np.sort(order_keys(words, scheme)), scheme)
    return ordered if name == "sorted" else ordered[::-1].copy()


def verify_order(out: np.ndarray, original: np.ndarray, scheme: WordScheme, asc: bool = True) -> bool:
    """True when ``out`` is ``original`` rearranged into key order."""
    expected = np.sort(order_keys(original, scheme))
    if not asc:
        expected = expected[::-1]
    return np.array_equal(order_keys(out, scheme), expected)


# --------------------------------------------------------------------------
# timing

@dataclass(frozen=True)
class BenchRecord:
    algo: str
    scheme: str
    size: int
    distribution: str
    repeat: int
    ns: int
    inspections: int | None = None
    swaps: int | None = None
    max_depth: int | None = None


def platform_sort(a: np.ndarray, scheme: WordScheme, asc: bool = True) -> np.ndarray:
    """numpy's default sort (introsort) in the scheme's total order.

    Integer schemes with a native dtype sort in place through a view.  Floats
    and toy schemes go through the order-key transform, since numpy's float
    order lumps NaNs together and ties -0 with +0.
    """
    native = scheme.native
    if native is not None and scheme.kind is not Kind.FLOAT:
        v = a.view(native)
        v.sort(kind="quicksort")
        if not asc:
            v[:] = v[::-1].copy()
        return a
    keys = order_keys(a, scheme)
    keys.sort(kind="quicksort")
    if not asc:
        keys = keys[::-1]
    a[:] = words_from_keys(keys, scheme)
    return a


def _warm_up(scheme: WordScheme):
    a = generate(DatasetSpec(scheme.code, 64, "uniform-bits", 1))
    core.bsort(a, scheme)
    platform_sort(a, scheme)


def run_bench(
    specs: Iterable[DatasetSpec],
    algos: Sequence[str] = ("bsort", "platform-sort"),
    repeats: int = 5,
    asc: bool = True,
    hook: Callable[[str], None] | None = None,
) -> list[BenchRecord]:
    """Time each algorithm on each dataset ``repeats`` times.

    Each repeat sorts a fresh clone; only the sort call is inside the timed
    region.  Output is verified against key order afterwards and a mismatch
    raises :class:`VerificationError`.  ``hook`` receives the events
    ``clone``, ``start``, ``stop`` and ``verify`` in order.
    """
    if repeats < 3:
        raise ValueError("repeats must be >= 3")
    for algo in algos:
        if algo not in ALGOS:
            raise ValueError(f"unknown algorithm {algo!r}")
    emit = hook or (lambda event: None)
    specs = list(specs)
    data = {spec: generate(spec) for spec in specs}
    warmed = set()
    records = []
    for spec in specs:
        scheme = get_scheme(spec.scheme)
        if scheme.code not in warmed:
            _warm_up(scheme)
            warmed.add(scheme.code)
        base = data[spec]
        for algo in algos:
            for rep in range(repeats):
                work = base.copy()
                emit("clone")
                stats = None
                emit("start")
                t0 = time.perf_counter_ns()
                if algo == "bsort":
                    stats = core.bsort(work, scheme, asc)
                elif algo == "platform-sort":
                    work = platform_sort(work, scheme, asc)
                else:
                    work = oracle_sort(work, scheme, asc)
                t1 = time.perf_counter_ns()
                emit("stop")
                if not verify_order(work, base, scheme, asc):
                    raise VerificationError(
                        f"{algo} misordered {spec.scheme} n={spec.size} "
                        f"{spec.distribution} seed={spec.seed} repeat={rep}"
                    )
                emit("verify")
                records.append(BenchRecord(
                    algo, spec.scheme, spec.size, spec.distribution, rep, max(1, t1 - t0),
                    stats.inspections if stats else None,
                    stats.swaps if stats else None,
                    stats.max_depth if stats else None,
                ))
    return records


def median_ns(records: Iterable[BenchRecord], algo: str, scheme: str, size: int) -> float:
    times = [r.ns for r in records if (r.algo, r.scheme, r.size) == (algo, scheme, size)]
    if not times:
        raise KeyError((algo, scheme, size))
    return float(np.median(times))


# --------------------------------------------------------------------------
# output

def emit_csv(records: Sequence[BenchRecord], path) -> Path:
    if not records:
        raise ValueError("no records to write")
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in records:
            w.writerow(["" if getattr(r, f) is None else getattr(r, f) for f in CSV_HEADER])
    return path


def read_csv(path) -> list[BenchRecord]:
    out = []
    types = {f.name: f.type for f in fields(BenchRecord)}
    with Path(path).open(newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            kw = {}
            for name in CSV_HEADER:
                val = row[name]
                if types[name] == "str":
                    kw[name] = val
                else:
                    kw[name] = None if val == "" else int(val)
            out.append(BenchRecord(**kw))
    return out


def emit_plot(records: Sequence[BenchRecord], out_dir) -> list[Path]:
    """One log-log SVG per scheme: median wall time against n, one line per algorithm."""
    if not records:
        raise ValueError("no records to plot")
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    by_scheme = defaultdict(lambda: defaultdict(lambda: defaultdict(list)))
    for r in records:
        by_scheme[r.scheme][(r.algo, r.distribution)][r.size].append(r.ns)

    paths = []
    for scheme, series in sorted(by_scheme.items()):
        for (algo, dist), sizes in series.items():
            if len(sizes) < 2:
                raise ValueError(f"{algo}/{scheme}/{dist} needs at least 2 sizes to plot")
        fig, ax = plt.subplots(figsize=(6, 4))
        dists = {d for _, d in series}
        for (algo, dist), sizes in sorted(series.items()):
            xs = sorted(sizes)
            ys = [np.median(sizes[x]) / 1e6 for x in xs]
            label = algo if len(dists) == 1 else f"{algo} ({dist})"
            ax.plot(xs, ys, marker="o", label=label)
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel("n (elements)")
        ax.set_ylabel("median wall time (ms)")
        ax.set_title(f"{scheme}")
        ax.legend()
        fig.tight_layout()
        path = out_dir / f"bench_{scheme}.svg"
        fig.savefig(path, format="svg")
        plt.close(fig)
        paths.append(path)
    return paths


def env_seed(default: int = DEFAULT_SEED) -> int:
    raw = os.environ.get("BSORT_SEED")
    return int(raw, 0) if raw else default
