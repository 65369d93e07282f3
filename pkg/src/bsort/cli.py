"""Command-line driver: ``bsort {sort,verify,bench,trace}``.

Exit codes: 0 success, 1 verification mismatch, 2 parse/usage error,
3 I/O error.
"""
from __future__ import annotations

import argparse
import hashlib
import random
import sys
from pathlib import Path

import numpy as np

from . import core, genbench
from .bitword import (
    SCHEMES,
    Kind,
    SchemeError,
    WordScheme,
    get_scheme,
    infinity,
    quiet_nan,
)
from .fileio import MAGIC, FormatError, format_text, format_value, from_binary, parse_text, to_binary
from .oracle import oracle_sort

EXIT_OK, EXIT_MISMATCH, EXIT_PARSE, EXIT_IO = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _scheme(code: str | None) -> WordScheme | None:
    if code is None:
        return None
    try:
        return get_scheme(code)
    except SchemeError as exc:
        raise CliError(str(exc), EXIT_PARSE) from None


def _asc(order: str) -> bool:
    return order == "asc"


def _read(path: str | None) -> bytes:
    try:
        if path in (None, "-"):
            return sys.stdin.buffer.read()
        return Path(path).read_bytes()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_IO) from None


def _write(path: str | None, data: bytes):
    try:
        if path in (None, "-"):
            sys.stdout.buffer.write(data)
            sys.stdout.flush()
        else:
            Path(path).write_bytes(data)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}", EXIT_IO) from None


def load_words(raw: bytes, fmt: str | None, scheme: WordScheme | None):
    """Decode input bytes; returns ``(scheme, words, format)``."""
    if fmt is None:
        fmt = "binary" if raw[:4] == MAGIC else "text"
    try:
        if fmt == "binary":
            file_scheme, words = from_binary(raw)
            if scheme is not None and scheme != file_scheme:
                raise FormatError(f"file holds {file_scheme} words, --type says {scheme}")
            return file_scheme, words, fmt
        if scheme is None:
            raise FormatError("--type is required for text input")
        return scheme, parse_text(raw.decode("utf-8"), scheme), fmt
    except (FormatError, UnicodeDecodeError) as exc:
        raise CliError(str(exc), EXIT_PARSE) from None


# --------------------------------------------------------------------------
# sort

def cmd_sort(args) -> int:
    scheme, words, fmt = load_words(_read(args.input), args.format, _scheme(args.type))
    core.bsort(words, scheme, _asc(args.order))
    out = to_binary(words, scheme) if fmt == "binary" else format_text(words, scheme).encode()
    _write(args.output, out)
    return EXIT_OK


# --------------------------------------------------------------------------
# verify

def _special_words(scheme: WordScheme, rng: random.Random) -> list[int]:
    nan_payload = rng.getrandbits(scheme.mant_bits) | 1
    nan_base = infinity(scheme)
    return [
        0, scheme.sign_bit,
        infinity(scheme), infinity(scheme, negative=True),
        quiet_nan(scheme), quiet_nan(scheme) | scheme.sign_bit,
        nan_base | nan_payload, nan_base | nan_payload | scheme.sign_bit,
    ]


def random_case(scheme: WordScheme, max_len: int, rng: random.Random) -> list[int]:
    """Uniform raw patterns; float cases also get injected ±0, ±inf and NaNs."""
    n = rng.randint(0, max_len)
    case = [rng.getrandbits(scheme.width) for _ in range(n)]
    if scheme.kind is Kind.FLOAT and n:
        specials = _special_words(scheme, rng)
        for _ in range(rng.randint(0, max(1, n // 4))):
            case[rng.randrange(n)] = rng.choice(specials)
    return case


def run_verify(schemes, trials: int, max_len: int, seed: int, out=print,
               invert_negatives: bool = True) -> int:
    """Compare the radix sort against the oracle; returns the mismatch count."""
    total_bad = 0
    for scheme in schemes:
        cases = bad = bound = 0
        for trial in range(trials):
            rng = random.Random(f"{seed}:{scheme.code}:{trial}")
            case = random_case(scheme, max_len, rng)
            for asc in (True, False):
                a = np.array(case, dtype=scheme.container)
                expected = oracle_sort(a, scheme, asc)
                if scheme.kind is Kind.FLOAT:
                    stats = core.bsort_float(a, scheme, asc, invert_negatives=invert_negatives)
                else:
                    stats = core.bsort(a, scheme, asc)
                cases += 1
                violations = stats.violations(len(case))
                if violations:
                    bound += 1
                    out(f"BOUND {scheme.code} seed={seed} trial={trial}: {'; '.join(violations)}")
                if not np.array_equal(a, expected):
                    bad += 1
                    if bad == 1:
                        out(f"MISMATCH {scheme.code} seed={seed} trial={trial} "
                            f"order={'asc' if asc else 'desc'}")
                        out("  input:    " + " ".join(format_value(w, scheme) for w in case))
                        out("  got:      " + format_text(a, scheme).strip())
                        out("  expected: " + format_text(expected, scheme).strip())
        out(f"{scheme.code:>4}  cases={cases}  mismatches={bad}  bound_violations={bound}")
        total_bad += bad + bound
    return total_bad


def cmd_verify(args) -> int:
    if args.trials < 1 or args.max_len < 0:
        raise CliError("--trials must be >= 1 and --max-len >= 0", EXIT_PARSE)
    schemes = [_scheme(c) for c in _split(args.type)] if args.type else [SCHEMES[c] for c in SCHEMES]
    bad = run_verify(schemes, args.trials, args.max_len, args.seed,
                     invert_negatives=args.mutant != "literal-negatives")
    print("OK" if not bad else f"FAILED: {bad} bad cases")
    return EXIT_OK if not bad else EXIT_MISMATCH


# --------------------------------------------------------------------------
# trace

def cmd_trace(args) -> int:
    scheme = _scheme(args.type)
    if args.values is not None:
        raw = args.values.encode()
    else:
        raw = _read(args.input)
    scheme, words, _ = load_words(raw, None if args.values is None else "text", scheme)
    if scheme.width > 32:
        raise CliError("trace prints binary columns; use a scheme of width <= 32", EXIT_PARSE)
    w = scheme.width

    def cell(word):
        return f"{format_value(word, scheme)}[{int(word):0{w}b}]"

    def row(words, splits):
        cells = []
        for i, word in enumerate(words.tolist()):
            if i in splits and i != 0:
                cells.append("|")
            cells.append(cell(word))
        return " ".join(cells)

    print(f"input      {row(words, [])}")
    for level in core.trace_levels(words, scheme, _asc(args.order)):
        ks = ",".join(map(str, level.splits)) or "-"
        print(f"m={level.mask:0{w}b}  {row(level.words, set(level.splits))}   k={ks}")
    return EXIT_OK


# --------------------------------------------------------------------------
# bench

def parse_size(text: str) -> int:
    t = text.strip().replace("**", "^")
    try:
        if "^" in t:
            base, exp = t.split("^")
            return int(base) ** int(exp)
        value = float(t) if any(c in t for c in ".eE") else int(t)
    except ValueError:
        raise CliError(f"bad size {text!r}", EXIT_PARSE) from None
    if value != int(value) or value < 0:
        raise CliError(f"bad size {text!r}", EXIT_PARSE)
    return int(value)


def _split(text: str) -> list[str]:
    return [t for t in text.split(",") if t.strip()]


def cmd_bench(args) -> int:
    codes = _split(args.type) if args.type else ["u32"]
    sizes = [parse_size(s) for s in _split(args.sizes)] if args.sizes else list(genbench.DEFAULT_SIZES)
    algos = _split(args.algos)
    try:
        specs = [genbench.DatasetSpec(_scheme(c).code, n, args.distribution, args.seed)
                 for c in codes for n in sizes]
        for spec in specs:
            digest = hashlib.sha256(genbench.generate(spec).tobytes()).hexdigest()[:16]
            print(f"dataset {spec.scheme} n={spec.size} {spec.distribution} "
                  f"seed={spec.seed:#x} sha256={digest}")
        records = genbench.run_bench(specs, algos, args.repeats, _asc(args.order))
    except genbench.VerificationError as exc:
        raise CliError(str(exc), EXIT_MISMATCH) from None
    except ValueError as exc:
        raise CliError(str(exc), EXIT_PARSE) from None
    for (algo, scheme, size) in sorted({(r.algo, r.scheme, r.size) for r in records}):
        med = genbench.median_ns(records, algo, scheme, size)
        print(f"{algo:>13} {scheme:>4} n={size:<10} median={med / 1e6:10.3f} ms")
    try:
        genbench.emit_csv(records, args.csv)
        if args.plot_dir:
            for path in genbench.emit_plot(records, args.plot_dir):
                print(f"wrote {path}")
    except OSError as exc:
        raise CliError(f"cannot write results: {exc}", EXIT_IO) from None
    except ValueError as exc:
        raise CliError(str(exc), EXIT_PARSE) from None
    print(f"wrote {args.csv}")
    return EXIT_OK


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    seed = genbench.env_seed()
    p = argparse.ArgumentParser(prog="bsort", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, type_help="word scheme: " + ", ".join(SCHEMES)):
        sp.add_argument("--type", help=type_help)
        sp.add_argument("--order", choices=("asc", "desc"), default="asc")
        sp.add_argument("--seed", type=lambda s: int(s, 0), default=seed,
                        help=f"PRNG seed (default {seed:#x}; env BSORT_SEED overrides)")

    s = sub.add_parser("sort", help="sort a text or binary word file")
    common(s)
    s.add_argument("--input", help="input file (default stdin)")
    s.add_argument("--output", help="output file (default stdout)")
    s.add_argument("--format", choices=("text", "binary"),
                   help="input/output format (default: detect from header)")
    s.set_defaults(func=cmd_sort)

    v = sub.add_parser("verify", help="random differential test against the oracle")
    common(v, "comma-separated schemes (default: all)")
    v.add_argument("--trials", type=int, default=1000)
    v.add_argument("--max-len", type=int, default=256)
    v.add_argument("--mutant", choices=("literal-negatives",), help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="time bsort against the platform sort")
    common(b, "comma-separated schemes (default u32)")
    b.add_argument("--sizes", help="comma-separated sizes, e.g. 1e4,1e5 or 2^20")
    b.add_argument("--algos", default="bsort,platform-sort")
    b.add_argument("--repeats", type=int, default=5)
    b.add_argument("--distribution", default="uniform-bits")
    b.add_argument("--csv", default="bench.csv")
    b.add_argument("--plot-dir")
    b.set_defaults(func=cmd_bench)

    t = sub.add_parser("trace", help="print one row per bit level with split points")
    common(t)
    t.add_argument("--values", help="comma/space separated values")
    t.add_argument("--input")
    t.set_defaults(func=cmd_trace)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"bsort: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
