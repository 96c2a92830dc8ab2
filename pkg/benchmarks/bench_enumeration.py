"""Time the compiled and numpy enumeration kernels on full sweeps.

    python benchmarks/bench_enumeration.py [--n 7] [--repeat 3]
"""

import argparse
import time

from dkergm import _backend
from dkergm.enumeration import enumerate_graphs


def bench(n, key_kind, restricted, backend, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        table = enumerate_graphs(n, key_kind, restricted, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best, table


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=7)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = _backend.available()
    print(f"n={args.n}, {2 ** (args.n * (args.n - 1) // 2):,} graphs, backends: {', '.join(backends)}")
    for key_kind, restricted in [("reduced-degree-vector", False), ("scaled-bi-degree", True)]:
        times, tables = {}, {}
        for b in backends:
            times[b], tables[b] = bench(args.n, key_kind, restricted, b, args.repeat)
        same = len({tuple(sorted(t.entries.items())) for t in tables.values()}) == 1
        line = "  ".join(f"{b} {times[b]:.3f}s" for b in backends)
        speedup = f"  speedup x{times['python'] / times['cython']:.1f}" if "cython" in times else ""
        print(f"{key_kind:<22} {line}{speedup}  tables identical: {same}")


if __name__ == "__main__":
    main()
