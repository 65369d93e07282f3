"""Compiled (numba) kernels vs the interpreted fallback path.

The fallback is selected with BSORT_DISABLE_JIT=1 at import time, so it is
timed in a child process.  Sizes are kept small because the interpreted path
runs one Python bytecode loop per element per bit.

    python benchmarks/bench_jit_vs_python.py [--sizes 1000,10000] [--types u8,u32,f64]
"""
import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

CHILD = r"""
import json, sys, time
import numpy as np
import bsort
from bsort import genbench
from bsort.bitword import get_scheme
args = json.loads(sys.argv[1])
out = {"jit": bsort.HAS_JIT, "times": {}}
for code in args["types"]:
    scheme = get_scheme(code)
    bsort.bsort(genbench.generate(genbench.DatasetSpec(code, 64)), scheme)
    for n in args["sizes"]:
        base = genbench.generate(genbench.DatasetSpec(code, n))
        ts = []
        for _ in range(args["repeats"]):
            a = base.copy()
            t0 = time.perf_counter()
            bsort.bsort(a, scheme)
            ts.append(time.perf_counter() - t0)
        out["times"][f"{code}:{n}"] = float(np.median(ts))
print(json.dumps(out))
"""


def run_child(disable_jit, payload):
    env = dict(os.environ)
    if disable_jit:
        env["BSORT_DISABLE_JIT"] = "1"
    else:
        env.pop("BSORT_DISABLE_JIT", None)
    proc = subprocess.run([sys.executable, "-c", CHILD, json.dumps(payload)],
                          env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", default="1000,10000")
    p.add_argument("--types", default="u8,u32,i32,f64")
    p.add_argument("--repeats", type=int, default=3)
    args = p.parse_args()
    payload = {
        "sizes": [int(float(s)) for s in args.sizes.split(",")],
        "types": args.types.split(","),
        "repeats": args.repeats,
    }

    t0 = time.perf_counter()
    jit = run_child(False, payload)
    py = run_child(True, payload)
    if not jit["jit"]:
        print("WARNING: numba not available, both runs are interpreted")

    print(f"{'case':>14} {'numba (ms)':>12} {'python (ms)':>12} {'speedup':>9}")
    for case, t_jit in jit["times"].items():
        t_py = py["times"][case]
        print(f"{case:>14} {t_jit * 1e3:12.3f} {t_py * 1e3:12.3f} {t_py / t_jit:8.0f}x")
    print(f"total wall time {time.perf_counter() - t0:.1f} s")


if __name__ == "__main__":
    main()
