"""Compare the compiled kernels with the pure-Python fallback.

Kernel timings call both backends directly on the same inputs.  End-to-end
timings run a small workload in a subprocess, once with the default backend
and once with ``GRS_KIT_PURE=1``.

    python benchmarks/bench_kernels.py [--repeat 3] [--no-end-to-end]
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import timeit

from grskit import _pykernels as py
from grskit import kernels
from grskit.catalog import build_classic

WORKLOAD = """
import time
from grskit import kernels
from grskit.catalog import build_classic
from grskit.quotient import quotient_scan
from grskit.rootset import check_grs_axioms, count_chambers
t = time.perf_counter()
g = build_classic("E8")
check_grs_axioms(g.roots, g.form)
count_chambers(build_classic("F4").roots)
quotient_scan("F4", 3)
print(kernels.BACKEND, time.perf_counter() - t)
"""


def _inputs(name: str):
    g = build_classic(name)
    # scale to integers so both backends see identical machine-sized data
    vecs = [tuple(int(2 * x) for x in v) for v in g.roots.ordered()]
    gram = [[int(4 * x) for x in row] for row in g.form.entries]
    return vecs, gram


def _time(fn, repeat: int) -> float:
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def bench_kernels(repeat: int) -> list[tuple]:
    cy = kernels.compiled_backend
    rows = []
    for name in ("F4", "E6", "E7", "E8"):
        vecs, gram = _inputs(name)
        n = len(vecs)
        cases = {
            "sum_diff_tables": lambda b: b.sum_diff_tables(vecs),
            "sign_table": lambda b: b.sign_table(vecs, gram),
        }
        sums, diffs = py.sum_diff_tables(vecs)
        signs = py.sign_table(vecs, gram)
        cases["axiom_violations"] = lambda b: b.axiom_violations(signs, sums, diffs, n)
        cases["forced_pairs"] = lambda b: b.forced_pairs(sums, diffs, n)
        for kname, call in cases.items():
            tp = _time(lambda: call(py), repeat)
            tc = _time(lambda: call(cy), repeat) if cy is not None else None
            rows.append((name, n, kname, tp, tc))
    return rows


def bench_end_to_end() -> list[tuple]:
    out = []
    for pure in (False, True):
        env = dict(os.environ)
        env.pop("GRS_KIT_PURE", None)
        if pure:
            env["GRS_KIT_PURE"] = "1"
        res = subprocess.run([sys.executable, "-c", WORKLOAD], env=env, capture_output=True, text=True,
                             check=True)
        backend, secs = res.stdout.split()
        out.append((backend, float(secs)))
    return out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--no-end-to-end", action="store_true")
    args = ap.parse_args(argv)
    if kernels.compiled_backend is None:
        print("compiled extension not available; only the Python backend is timed")
    print(f"{'system':6} {'roots':>5} {'kernel':18} {'python s':>9} {'cython s':>9} {'speedup':>8}")
    for name, n, kname, tp, tc in bench_kernels(args.repeat):
        c = f"{tc:9.4f}" if tc is not None else f"{'-':>9}"
        s = f"{tp / tc:7.1f}x" if tc else f"{'-':>8}"
        print(f"{name:6} {n:5d} {kname:18} {tp:9.4f} {c} {s}")
    if not args.no_end_to_end:
        print("\nend to end (E8 axioms, F4 chambers, F4 rank-3 scan):")
        for backend, secs in bench_end_to_end():
            print(f"  {backend:7} {secs:7.2f} s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
