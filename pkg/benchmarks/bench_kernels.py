"""Compare the compiled and pure-Python lattice kernels.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``. Each row
times one kernel on one lattice for every available backend and reports the
best of N runs, plus the speedup of the compiled backend.
"""
import argparse
import time

import numpy as np

from coverlaw import kernels, lattice as lat
from coverlaw.cli import DATA


def cases():
    yield "boolean 2^6 (64)", lat.boolean(6)
    yield "MO31 (64)", lat.mo(31)
    for k in (2, 4):
        yield f"pasting #{k}", lat.load_lattice(
            DATA / "lattices" / f"pasted_counterexample_{k}.json")


def kernel_calls(L):
    le = np.ascontiguousarray(L.leq, dtype=np.uint8)
    ortho = np.ascontiguousarray(L.ortho, dtype=np.int64)
    meet = np.ascontiguousarray(L.meet_table, dtype=np.int64)
    join = np.ascontiguousarray(L.join_table, dtype=np.int64)
    adj = le.copy()
    return {
        "closure": lambda k: k.closure(adj),
        "meet_join_tables": lambda k: k.meet_join_tables(le),
        "orthomodular": lambda k: k.orthomodular_violation(le, meet, join, ortho),
        "covering": lambda k: k.covering_violation(le, meet, join, L.bottom),
    }


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = kernels.backends()
    names = sorted(backends)
    print(f"backends: {', '.join(names)} (selected: {kernels.BACKEND})")
    header = f"{'lattice':<18} {'kernel':<18}" + "".join(f"{n:>12}" for n in names)
    if "cython" in backends:
        header += f"{'speedup':>10}"
    print(header)
    for label, L in cases():
        for kname, call in kernel_calls(L).items():
            times = {n: best_of(lambda: call(backends[n]), args.repeat) for n in names}
            row = f"{label:<18} {kname:<18}" + "".join(
                f"{times[n] * 1e3:>10.3f}ms" for n in names)
            if "cython" in times:
                row += f"{times['python'] / max(times['cython'], 1e-9):>9.0f}x"
            print(row)


if __name__ == "__main__":
    main()
