#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure NumPy fallback.

Times the four hot per-iteration kernels and a full clustering run on
experiment-sized data, then prints per-backend timings and speedups.

    python benchmarks/bench_kernels.py [--repeats 7] [--n 1200] [--clusters 10]
"""

import argparse
import time

import numpy as np

from pcmkit import kernels
from pcmkit.dataset import dataset1_spec, generate_gaussian_mixture
from pcmkit.fcm import FcmConfig, fcm_cluster, init_eta
from pcmkit.upcm import threshold_from, upcm_iterate


def best_of(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_kernels(backend, points, theta, memberships, eta, labels, repeats):
    m = theta.shape[0]
    dist = backend.distance_matrix(points, theta)
    gamma = eta * eta
    return {
        "distance_matrix": best_of(lambda: backend.distance_matrix(points, theta), repeats),
        "pcm_membership": best_of(lambda: backend.pcm_membership(dist, gamma), repeats),
        "marginal_membership": best_of(
            lambda: backend.marginal_membership_matrix(dist, eta, 0.8), repeats),
        "cut_weighted_means": best_of(
            lambda: backend.cut_weighted_means(points, memberships, theta, 0.1), repeats),
        "label_mean_abs_dev": best_of(
            lambda: backend.label_mean_abs_dev(points, labels, theta, m), repeats),
    }


def bench_full_run(name, data, theta0, eta0, repeats):
    previous = kernels.set_backend(name)
    try:
        return best_of(
            lambda: upcm_iterate(
                data, theta0, eta0, sigma_v=0.5,
                threshold=threshold_from(2.0, "exp_neg"),
            ),
            repeats,
        )
    finally:
        kernels.set_backend(previous)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=7)
    parser.add_argument("--n", type=int, default=1200)
    parser.add_argument("--clusters", type=int, default=10)
    args = parser.parse_args()

    if "cython" not in kernels.available_backends():
        raise SystemExit("compiled backend not built; nothing to compare")

    rng = np.random.default_rng(0)
    points = np.ascontiguousarray(rng.standard_normal((args.n, 2)) * 4.0)
    theta = np.ascontiguousarray(rng.standard_normal((args.clusters, 2)))
    memberships = np.ascontiguousarray(rng.random((args.n, args.clusters)))
    eta = np.ascontiguousarray(rng.uniform(0.5, 3.0, args.clusters))
    labels = np.ascontiguousarray(rng.integers(0, args.clusters, args.n), dtype=np.int64)

    pure = bench_kernels(kernels.get_backend("pure"), points, theta,
                         memberships, eta, labels, args.repeats)
    cython = bench_kernels(kernels.get_backend("cython"), points, theta,
                           memberships, eta, labels, args.repeats)

    print(f"kernel timings, N={args.n}, c={args.clusters} (best of {args.repeats})")
    print(f"{'kernel':<22}{'pure':>12}{'cython':>12}{'speedup':>9}")
    for key in pure:
        print(f"{key:<22}{pure[key] * 1e6:>10.1f}us{cython[key] * 1e6:>10.1f}us"
              f"{pure[key] / cython[key]:>8.1f}x")

    data = generate_gaussian_mixture(dataset1_spec(seed=7))
    fcm = fcm_cluster(data, FcmConfig(c=10, seed=11))
    eta0 = init_eta(data, fcm)
    t_pure = bench_full_run("pure", data, fcm.prototypes, eta0, max(3, args.repeats // 2))
    t_cy = bench_full_run("cython", data, fcm.prototypes, eta0, max(3, args.repeats // 2))
    print(f"\nfull run (dataset1, m_ini=10, alpha=2, sigma_v=0.5)")
    print(f"{'upcm_iterate':<22}{t_pure * 1e3:>10.2f}ms{t_cy * 1e3:>10.2f}ms"
          f"{t_pure / t_cy:>8.1f}x")


if __name__ == "__main__":
    main()
