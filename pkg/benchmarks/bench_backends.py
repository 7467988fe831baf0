"""Wall-clock comparison of the compiled and NumPy simplex kernels.

    python3 benchmarks/bench_backends.py [--repeat 3] [--out results.csv]

Workloads: exact synthesis of random targets for n = 5..9, the full
binary scan at n = 5, and restricted synthesis at n = 10.  Objective
values are compared across kernels as a sanity check.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from math import comb

import numpy as np

from gzz.bounds import conjecture_scan
from gzz.exact import synth_exact
from gzz.heuristic import synth_restricted
from gzz.lp import available_backends
from gzz.matrixcore import CouplingMatrix


def _targets(n: int, count: int, seed: int) -> list[CouplingMatrix]:
    rng = np.random.default_rng([seed, n])
    return [CouplingMatrix(n, rng.uniform(-1, 1, comb(n, 2))) for _ in range(count)]


def workloads(seed: int):
    for n in range(5, 10):
        Ms = _targets(n, 10, seed)
        yield f"exact n={n} x10", lambda b, Ms=Ms: [synth_exact(M, backend=b).total_time for M in Ms]
    yield "scan n=5 (1024 LPs)", lambda b: [conjecture_scan(5, backend=b).t_max]
    Ms = _targets(10, 10, seed)
    yield "restricted n=10 j=3 x10", \
        lambda b, Ms=Ms: [synth_restricted(M, 3, backend=b).total_time for M in Ms]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", help="also write a CSV")
    args = ap.parse_args(argv)

    backends = available_backends()
    if len(backends) < 2:
        print(f"only {backends} available; build the extension to compare", file=sys.stderr)
    rows = []
    print(f"{'workload':28s}" + "".join(f"{b:>12s}" for b in backends) + "     speedup")
    for name, fn in workloads(args.seed):
        best, values = {}, {}
        for b in backends:
            fn(b)  # warm caches (encoding tables, restricted sets)
            t = []
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                values[b] = fn(b)
                t.append(time.perf_counter() - t0)
            best[b] = min(t)
        ref = values[backends[0]]
        agree = all(np.allclose(values[b], ref, atol=1e-8) for b in backends)
        speed = best["python"] / best["cython"] if {"python", "cython"} <= set(best) else float("nan")
        print(f"{name:28s}" + "".join(f"{best[b]:11.3f}s" for b in backends)
              + f"  {speed:9.2f}x" + ("" if agree else "  VALUES DIFFER"))
        rows.append({"workload": name, **{f"{b}_s": best[b] for b in backends},
                     "speedup": speed, "values_agree": agree})
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)
    return 0 if all(r["values_agree"] for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
