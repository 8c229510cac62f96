"""Compiled kernels against the NumPy fallback.

Times single cost evaluations and full searches (exhaustive at L=8, one
annealing run at L=10) with each backend. The end-to-end searches run in a
subprocess so that ``QMIORDER_PURE_PYTHON`` selects the backend exactly as it
would for a user.

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys
import timeit

import numpy as np

from qmiorder import _kernels_py

try:
    from qmiorder import _kernels as _kernels_c
except ImportError:
    _kernels_c = None

SEARCH = r"""
import json, sys, time
import numpy as np
from qmiorder import kernels
from qmiorder.cost import CostInputs
from qmiorder.entropy import QmiMatrix
from qmiorder.optimize import AnnealConfig, Objective, anneal, exhaustive

def inputs(L):
    rng = np.random.default_rng(L)
    Q = np.triu(rng.random((L, L)) ** 3, 1)
    return CostInputs(rng.random(L), QmiMatrix(Q + Q.T))

out = {"backend": kernels.BACKEND}
for kind in ("idist", "i_mps"):
    t = time.perf_counter()
    exhaustive(inputs(8), Objective(kind))
    out[f"exhaustive L=8 {kind}"] = time.perf_counter() - t
    t = time.perf_counter()
    anneal(inputs(10), Objective(kind), AnnealConfig(seed=0, restarts=1))
    out[f"anneal L=10 {kind}"] = time.perf_counter() - t
print(json.dumps(out))
"""


def evaluation_times(impl, L, repeat):
    rng = np.random.default_rng(0)
    Q = np.triu(rng.random((L, L)), 1)
    Q = np.ascontiguousarray(Q + Q.T)
    S = np.ascontiguousarray(rng.random(L))
    perm = rng.permutation(L).astype(np.intp)
    calls = {
        "idist": lambda: impl.idist_perm(Q, perm, 2.0, 1),
        "i_mps": lambda: impl.i_mps_perm(Q, S, perm),
    }
    if L & (L - 1) == 0:
        calls["i_tree"] = lambda: impl.i_tree_perm(Q, S, perm)
    return {k: min(timeit.repeat(f, number=2000, repeat=repeat)) / 2000 for k, f in calls.items()}


def search_times(pure_python):
    env = dict(os.environ)
    env.pop("QMIORDER_PURE_PYTHON", None)
    if pure_python:
        env["QMIORDER_PURE_PYTHON"] = "1"
    out = subprocess.run([sys.executable, "-c", SEARCH], env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if _kernels_c is None:
        print("compiled kernels are not built; only the fallback can be timed")

    print("single evaluation (microseconds)")
    print(f"{'L':>3} {'cost':<7} {'python':>10} {'cython':>10} {'speedup':>8}")
    for L in (6, 8, 16, 32):
        py = evaluation_times(_kernels_py, L, args.repeat)
        cy = evaluation_times(_kernels_c, L, args.repeat) if _kernels_c else {}
        for k, t in py.items():
            c = cy.get(k)
            extra = f"{c * 1e6:>10.2f} {t / c:>7.1f}x" if c else f"{'-':>10} {'-':>8}"
            print(f"{L:>3} {k:<7} {t * 1e6:>10.2f} {extra}")

    print("\nfull searches (seconds)")
    py = search_times(True)
    cy = search_times(False) if _kernels_c else None
    for k in py:
        if k == "backend":
            continue
        if cy and cy["backend"] == "cython":
            print(f"{k:<24} python {py[k]:8.3f}  cython {cy[k]:8.3f}  {py[k] / cy[k]:6.1f}x")
        else:
            print(f"{k:<24} python {py[k]:8.3f}")


if __name__ == "__main__":
    main()
