"""Time each hot kernel under the numba and numpy backends.

    python3 benchmarks/bench_kernels.py [--n 10] [--repeat 5]

The first numba call per kernel pays JIT (or cache load) cost, so it is run
once as warm-up and reported separately. Outputs of both backends are
compared before timing.
"""

import argparse
import itertools
import time

import numpy as np

from degenset import kernels


def _inputs(n, profiles, seed):
    rng = np.random.default_rng(seed)
    upper = np.triu(rng.random((n, n)) < 0.5, 1)
    adjm = upper | upper.T
    adj = (adjm * (1 << np.arange(n))[None, :]).sum(axis=1).astype(np.int64)
    deg = adjm.sum(axis=1)
    kappa = np.stack([rng.integers(0, deg + 1) for _ in range(profiles)]).astype(np.int64)
    weights = rng.integers(1, 100, size=(profiles, n)).astype(np.int64)
    tau = deg[None, :] - kappa
    eu, ev = np.nonzero(np.triu(adjm, 1))
    return adj, kappa, weights, tau, eu.astype(np.int64), ev.astype(np.int64)


def cases(n, profiles, seed):
    adj, kappa, weights, tau, eu, ev = _inputs(n, profiles, seed)
    perm_n = min(n, 7)
    perms = np.array(list(itertools.permutations(range(perm_n))), dtype=np.int64)
    rd = kernels.backend_module("numpy").residual_degrees(adj)
    sample = np.random.default_rng(seed).permuted(np.tile(np.arange(n), (20000, 1)), axis=1)
    return {
        "graph_masks(n=6)": lambda m: m.graph_masks(6, 0, 1 << 15, True),
        "residual_degrees": lambda m: m.residual_degrees(adj),
        "degenerate_table": lambda m: m.degenerate_table(rd, kappa),
        "incentive_table": lambda m: m.incentive_table(rd, kappa, weights),
        "subset_sums": lambda m: m.subset_sums(weights),
        "activation_table": lambda m: m.activation_table(adj, tau[:2]),
        "back_degrees(20000)": lambda m: m.back_degrees(n, eu, ev, sample),
        f"backdeg_histogram_table(n={perm_n})": lambda m: m.backdeg_histogram_table(perms),
    }


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return np.array_equal(a, b)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=10)
    parser.add_argument("--profiles", type=int, default=16)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    backends = {name: kernels.backend_module(name) for name in ("numba", "numpy")}
    print(f"n={args.n} profiles={args.profiles} repeat={args.repeat} (best of, seconds)")
    print(f"{'kernel':34s} {'numba warm-up':>14s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s}")
    for name, fn in cases(args.n, args.profiles, args.seed).items():
        t0 = time.perf_counter()
        first = fn(backends["numba"])
        warm = time.perf_counter() - t0
        if not _same(first, fn(backends["numpy"])):
            raise SystemExit(f"{name}: backends disagree")
        best = {}
        for label, module in backends.items():
            times = []
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                fn(module)
                times.append(time.perf_counter() - t0)
            best[label] = min(times)
        print(f"{name:34s} {warm:14.4f} {best['numba']:10.5f} {best['numpy']:10.5f} "
              f"{best['numpy'] / best['numba']:7.1f}x")


if __name__ == "__main__":
    main()
