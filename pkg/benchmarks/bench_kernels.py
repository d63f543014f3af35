"""Compare the compiled and pure-Python integer kernels.

Two levels are timed:

* the kernels (``rank``, ``rref``, ``matmul``) on seeded random integer
  matrices, calling the pure-Python module and the compiled dispatcher;
* an end-to-end Springer campaign, run once per backend in a subprocess so the
  import-time selection (``MUKAIDUAL_PURE_PYTHON``) is exercised as users see it.

Usage::

    python benchmarks/bench_kernels.py [--repeat N] [--json]
"""

import argparse
import json
import os
import random
import subprocess
import sys
import timeit

from mukaidual import _pykernels, kernels

# the dispatcher, not the raw extension: it falls back to Python ints on int64 overflow
_kernels = kernels if kernels.BACKEND == "cython" else None

SHAPES = [(4, 4), (6, 8), (10, 10), (16, 16)]
CAMPAIGN = (
    "import time; from mukaidual import nilorbit, BACKEND; t0 = time.perf_counter(); "
    "[nilorbit.springer_campaign(h, t, 500, 42) for h in range(2, 7) for t in range(1, h // 2 + 1)]; "
    "print(BACKEND, time.perf_counter() - t0)"
)


def random_rows(rng, nrows, ncols, lo=-5, hi=5):
    return tuple(tuple(rng.randint(lo, hi) for _ in range(ncols)) for _ in range(nrows))


def bench_kernels(repeat):
    rng = random.Random(0)
    rows = []
    for nrows, ncols in SHAPES:
        a = random_rows(rng, nrows, ncols)
        b = random_rows(rng, ncols, nrows)
        cases = {
            "rank": lambda m, a=a, ncols=ncols: m.rank(a, ncols),
            "rref": lambda m, a=a, ncols=ncols: m.rref(a, ncols),
            "matmul": lambda m, a=a, b=b, ncols=ncols, nrows=nrows: m.matmul(a, b, ncols, nrows),
        }
        for name, fn in cases.items():
            py = min(timeit.repeat(lambda: fn(_pykernels), number=200, repeat=repeat)) / 200
            entry = {"kernel": name, "shape": f"{nrows}x{ncols}", "python_us": py * 1e6}
            if _kernels is not None:
                if fn(_kernels) != fn(_pykernels):
                    raise AssertionError(f"backends disagree on {name} {nrows}x{ncols}")
                cy = min(timeit.repeat(lambda: fn(_kernels), number=200, repeat=repeat)) / 200
                entry["cython_us"] = cy * 1e6
                entry["speedup"] = py / cy
            rows.append(entry)
    return rows


def bench_campaign():
    out = {}
    for label, extra in (("cython", {}), ("python", {"MUKAIDUAL_PURE_PYTHON": "1"})):
        env = {**os.environ, **extra}
        if label == "cython":
            env.pop("MUKAIDUAL_PURE_PYTHON", None)
        res = subprocess.run([sys.executable, "-c", CAMPAIGN], capture_output=True, text=True, env=env, check=True)
        backend, seconds = res.stdout.split()
        out[label] = {"backend": backend, "seconds": float(seconds)}
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    kernels = bench_kernels(args.repeat)
    campaign = bench_campaign()
    if args.json:
        print(json.dumps({"kernels": kernels, "campaign": campaign}, indent=2))
        return
    if _kernels is None:
        print("compiled extension not built; only the Python backend is timed")
    print(f"{'kernel':8} {'shape':7} {'python us':>10} {'cython us':>10} {'speedup':>8}")
    for e in kernels:
        cy = f"{e['cython_us']:10.1f}" if "cython_us" in e else f"{'-':>10}"
        sp = f"{e['speedup']:8.1f}" if "speedup" in e else f"{'-':>8}"
        print(f"{e['kernel']:8} {e['shape']:7} {e['python_us']:10.1f} {cy} {sp}")
    print()
    for label, e in campaign.items():
        print(f"springer campaign (h<=6, 500 samples per pair), {label} requested -> {e['backend']}: {e['seconds']:.2f}s")


if __name__ == "__main__":
    main()
