#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Times each hot kernel on a realistic receiver-scale shape and one full
alternating-receiver run per backend. Run from the repo root:

    python benchmarks/bench_kernels.py [--repeats 50]
"""

import argparse
import time

import numpy as np

from irstensor import _kernels_numpy, backend
from irstensor.coding import build_dft_design
from irstensor.receivers import TalsOptions, tals
from irstensor.signals import add_noise, draw_symbols, paratuck_tensor


def crandn(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def time_call(fn, *args, repeats=50):
    fn(*args)  # warmup (JIT compile / einsum path search)
    start = time.perf_counter()
    for _ in range(repeats):
        fn(*args)
    return (time.perf_counter() - start) / repeats


def bench_kernels(repeats):
    from irstensor import _kernels_numba

    # dimensions of the large two-stage reference experiment
    m, l, n, t, k = 10, 2, 70, 5, 140
    rng = np.random.default_rng(0)
    h = crandn(rng, m, n)
    g = crandn(rng, n, l)
    x = crandn(rng, t, l)
    d = build_dft_design(l, n, k)
    s = np.ascontiguousarray(d.s)
    w = np.ascontiguousarray(d.w)
    y = np.ascontiguousarray(_kernels_numpy.paratuck_slices(h, g, x, s, w))

    cases = [
        ("paratuck_slices", (h, g, x, s, w)),
        ("parafac_slices", (h[:, :l], x, w)),
        ("irs_bs_regressor", (x, g, s, w)),
        ("symbol_regressor", (h, g, s, w)),
        ("fit_error", (y, h, g, x, s, w)),
    ]
    print(f"kernel timings, shape (M,L,N,T,K)=({m},{l},{n},{t},{k}), {repeats} repeats")
    print(f"{'kernel':<20} {'numpy (ms)':>12} {'numba (ms)':>12} {'speedup':>9}")
    for name, args in cases:
        t_np = time_call(getattr(_kernels_numpy, name), *args, repeats=repeats)
        t_nb = time_call(getattr(_kernels_numba, name), *args, repeats=repeats)
        print(f"{name:<20} {t_np * 1e3:>12.3f} {t_nb * 1e3:>12.3f} {t_np / t_nb:>8.1f}x")


def bench_full_receiver(repeats):
    m, l, n, t, k = 10, 2, 70, 5, 140
    rng = np.random.default_rng(1)
    h = crandn(rng, m, n)
    g = crandn(rng, n, l)
    x = draw_symbols(t, l, rng)
    d = build_dft_design(l, n, k)
    y, _ = add_noise(paratuck_tensor(h, g, x, d.s, d.w), 20.0, rng)
    opts = TalsOptions(max_iters=100)

    print("\nfull receiver run (20 dB, same shape)")
    print(f"{'backend':<20} {'time (ms)':>12} {'iters':>7}")
    previous = backend.ACTIVE
    try:
        for kind in ("numpy", "numba"):
            backend.set_backend(kind)
            tals(y, d.s, d.w, opts, rng=np.random.default_rng(2))  # warmup
            start = time.perf_counter()
            for _ in range(max(1, repeats // 10)):
                res = tals(y, d.s, d.w, opts, rng=np.random.default_rng(2))
            elapsed = (time.perf_counter() - start) / max(1, repeats // 10)
            print(f"{kind:<20} {elapsed * 1e3:>12.2f} {res.iterations:>7}")
    finally:
        backend.set_backend(previous)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=50)
    args = parser.parse_args()
    if not backend.NUMBA_AVAILABLE:
        raise SystemExit("numba is not importable; nothing to compare")
    bench_kernels(args.repeats)
    bench_full_receiver(args.repeats)


if __name__ == "__main__":
    main()
