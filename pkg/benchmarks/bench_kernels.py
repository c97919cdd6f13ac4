"""Time the numba and numpy Jacobi backends against each other.

Usage:  python benchmarks/bench_kernels.py [--sizes 20,40,80,120] [--repeats 3]

The eigensolver dominates the package's runtime (norms, spectral
projections, functional calculus, and every witness search sit on top of
it), so this is the one kernel worth a backend comparison.  Results from
the two backends agree to roundoff; the table reports wall time and the
max |eigenvalue difference| as a sanity column.
"""

import argparse
import time

import numpy as np

from coarseqm import linalg
from coarseqm._kernels import available_backends


def bench(n: int, repeats: int, rng) -> dict:
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    A = (g + g.conj().T) / 2.0
    times = {}
    eigs = {}
    for backend in ("numba", "numpy"):
        if backend not in available_backends():
            continue
        linalg.herm_eig(A, backend=backend)  # warm (numba: jit compile)
        best = np.inf
        for _ in range(repeats):
            t0 = time.perf_counter()
            eigs[backend] = linalg.herm_eig(A, backend=backend)
            best = min(best, time.perf_counter() - t0)
        times[backend] = best
    row = {"n": n}
    row.update({f"{b}_s": t for b, t in times.items()})
    if len(times) == 2:
        row["speedup"] = times["numpy"] / times["numba"]
        row["max_eig_diff"] = float(np.max(np.abs(
            eigs["numba"].eigenvalues - eigs["numpy"].eigenvalues)))
    return row


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="20,40,80,120")
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    sizes = [int(s) for s in args.sizes.split(",")]
    print(f"backends available: {', '.join(available_backends())}")
    header = f"{'n':>5} {'numba (s)':>12} {'numpy (s)':>12} {'speedup':>9} {'max eig diff':>14}"
    print(header)
    print("-" * len(header))
    for n in sizes:
        row = bench(n, args.repeats, rng)
        print(f"{row['n']:>5} {row.get('numba_s', float('nan')):>12.5f} "
              f"{row.get('numpy_s', float('nan')):>12.5f} "
              f"{row.get('speedup', float('nan')):>9.1f} "
              f"{row.get('max_eig_diff', float('nan')):>14.2e}")


if __name__ == "__main__":
    main()
