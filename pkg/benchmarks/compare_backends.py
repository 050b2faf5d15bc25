"""Time the compiled kernels against the numpy fallback.

Kernel timings call both backend modules directly in this process. End-to-end
greedy timings run in subprocesses so that the import-time backend switch
(``SKETCHMATCH_PURE_PYTHON=1``) is honoured.

    python benchmarks/compare_backends.py [--rows 400] [--dims 20,200,5000]
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from sketchmatch.kernels import available_backends

RUN_SNIPPET = """
import time
from sketchmatch import kernels
from sketchmatch.data import gen_synthetic
from sketchmatch.greedy import greedy_run
from sketchmatch.fast import fast_greedy_run
inst = gen_synthetic({n}, {d}, {dl}, seed=0)
t = time.perf_counter(); g = greedy_run(inst).total_weight; tg = time.perf_counter() - t
t = time.perf_counter(); f = fast_greedy_run(inst, s=20).total_weight; tf = time.perf_counter() - t
print(kernels.BACKEND, tg, tf, repr(g), repr(f))
"""


def kernel_table(rows, dims, repeat):
    backends = available_backends()
    rng = np.random.default_rng(0)
    print(f"{'dim':>6} " + " ".join(f"{name + ' us':>12}" for name in sorted(backends)))
    for d in dims:
        pts = rng.normal(size=(rows, d))
        q = rng.normal(size=d)
        cand = np.arange(0, rows, dtype=np.int64)
        w = rng.random(rows)
        buf = np.empty(rows)
        cells = []
        for name in sorted(backends):
            mod = backends[name]

            def call():
                dists = mod.row_distances(pts, q, cand, buf)
                mod.argmax_increment(dists, w, cand)

            best = min(timeit.repeat(call, number=20, repeat=repeat)) / 20
            cells.append(f"{best * 1e6:12.1f}")
        print(f"{d:>6} " + " ".join(cells))


def run_table(n, d, dl):
    print(f"\nfull runs n={n} d={d} dl={dl}")
    print(f"{'backend':>8} {'greedy s':>10} {'fast s':>10}  weights")
    code = RUN_SNIPPET.format(n=n, d=d, dl=dl)
    for pure in ("", "1"):
        env = dict(os.environ)
        env.pop("SKETCHMATCH_PURE_PYTHON", None)
        if pure:
            env["SKETCHMATCH_PURE_PYTHON"] = pure
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        name, tg, tf, g, f = out.stdout.split()
        print(f"{name:>8} {float(tg):10.3f} {float(tf):10.3f}  {g} {f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=400)
    ap.add_argument("--dims", default="20,200,5000")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--n", type=int, default=500)
    ap.add_argument("--d", type=int, default=2000)
    ap.add_argument("--dl", type=int, default=100)
    args = ap.parse_args()
    kernel_table(args.rows, [int(x) for x in args.dims.split(",")], args.repeat)
    run_table(args.n, args.d, args.dl)


if __name__ == "__main__":
    main()
