#!/usr/bin/env python3
"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--rows 20000] [--repeat 5]

Also checks that both paths return bit-identical arrays.
"""

import argparse
import time

import numpy as np

from germen import kernels


def csr(rng, n_rows, dim, nnz):
    counts = rng.integers(1, nnz + 1, size=n_rows)
    indptr = np.concatenate(([0], np.cumsum(counts))).astype(np.int64)
    indices = np.concatenate([np.sort(rng.choice(dim, size=c, replace=False)) for c in counts]).astype(np.int64)
    data = rng.random(indptr[-1])
    return indptr, indices, data


def best_of(fn, repeat):
    fn()  # warm-up, includes JIT compile for numba
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--rows", type=int, default=20000)
    ap.add_argument("--dim", type=int, default=5000)
    ap.add_argument("--nnz", type=int, default=12)
    ap.add_argument("--objects", type=int, default=4000)
    ap.add_argument("--variables", type=int, default=300)
    ap.add_argument("--candidates", type=int, default=5000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)

    indptr, indices, data = csr(rng, args.rows, args.dim, args.nnz)
    dense = np.zeros(args.dim)
    hot = rng.choice(args.dim, size=args.nnz, replace=False)
    dense[hot] = rng.random(args.nnz)

    values = rng.random((args.objects, args.variables)) * (rng.random((args.objects, args.variables)) < 0.2)
    cands = np.array([np.sort(rng.choice(args.variables, size=3, replace=False)) for _ in range(args.candidates)],
                     dtype=np.int64)

    cases = [
        ("row_dots", kernels.row_dots_numba, kernels.row_dots_numpy, (indptr, indices, data, dense)),
        ("itemset_supports", kernels.itemset_supports_numba, kernels.itemset_supports_numpy, (values, cands)),
    ]
    print(f"{'kernel':<18}{'numba ms':>10}{'numpy ms':>10}{'speedup':>9}  identical")
    for name, fast, slow, argv in cases:
        t_fast, a = best_of(lambda: fast(*argv), args.repeat)
        t_slow, b = best_of(lambda: slow(*argv), args.repeat)
        same = a.tobytes() == b.tobytes()
        print(f"{name:<18}{t_fast * 1e3:>10.2f}{t_slow * 1e3:>10.2f}{t_slow / t_fast:>8.1f}x  {same}")


if __name__ == "__main__":
    main()
