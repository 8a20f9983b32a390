"""Compare the compiled and numpy Jacobi kernels.

    python benchmarks/bench_jacobi.py --dims 32,64,128,256 --repeat 3

Two workloads per dimension: a random Hermitian matrix (eigenvalues only
and with eigenvectors) and the Gram matrix of a Weyl mismatch at s = t = 1,
whose clustered spectrum is the slow case the lab actually hits. Reports
the best of ``--repeat`` wall-clock runs and the sweep count.
"""

import argparse
import json
import time

import numpy as np

from phaselab import linalg, weyl
from phaselab.linalg import TruncatedOperator


def random_hermitian(rng, dim):
    x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return TruncatedOperator(0.5 * (x + x.conj().T), hermitian=True)


def weyl_gram(dim):
    e = weyl.phi_group(1.0, dim).entries
    m = weyl._conjugate_by_number_group(e, 1.0) - np.exp(-1j) * e
    g = m.conj().T @ m
    return TruncatedOperator(0.5 * (g + g.conj().T), hermitian=True)


def best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--dims", default="32,64,128,256")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--backends", default=",".join(linalg.available_backends()))
    ap.add_argument("--seed", type=int, default=0x5EED)
    ap.add_argument("--json", help="also write results here")
    args = ap.parse_args()

    dims = [int(d) for d in args.dims.split(",")]
    backends = [b for b in args.backends.split(",") if b]
    rng = np.random.default_rng(args.seed)
    cases = []
    for d in dims:
        cases.append(("random", d, random_hermitian(rng, d)))
        cases.append(("weyl-gram", d, weyl_gram(d)))

    rows = []
    print(f"{'case':<10} {'D':>5} {'vectors':>7} " + " ".join(f"{b + ' s':>12} {'sweeps':>6}" for b in backends)
          + (f" {'speedup':>8}" if len(backends) == 2 else ""))
    for name, d, m in cases:
        tol = linalg.NORM_EIG_TOL if name == "weyl-gram" else linalg.DEFAULT_EIG_TOL
        for vectors in (False, True):
            if name == "weyl-gram" and vectors:
                continue
            timing = {}
            for b in backends:
                previous = linalg.set_backend(b)
                try:
                    t, e = best_of(lambda: linalg.hermitian_eigen(m, tol=tol, vectors=vectors), args.repeat)
                finally:
                    linalg.set_backend(previous)
                timing[b] = (t, e.sweeps)
            row = {"case": name, "D": d, "vectors": vectors,
                   **{f"{b}_seconds": t for b, (t, _) in timing.items()},
                   **{f"{b}_sweeps": s for b, (_, s) in timing.items()}}
            line = f"{name:<10} {d:>5} {str(vectors):>7} " + " ".join(
                f"{t:>12.4f} {s:>6}" for t, s in timing.values())
            if len(backends) == 2:
                slow, fast = timing[backends[1]][0], timing[backends[0]][0]
                row["speedup"] = slow / fast
                line += f" {row['speedup']:>8.1f}x"
            print(line)
            rows.append(row)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
