"""Benchmark the numba and numpy kernel backends.

Run with ``python -m swipenet.bench``. Warms the JIT first, then times
conv/pool forward and backward on training-shaped inputs.
"""

import argparse
import time

import numpy as np

from . import kernels


def _time(fn, repeats):
    fn()  # warm-up (JIT compile, page-in)
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - t0) / repeats


def run(repeats=3, batch=8, size=64):
    rng = np.random.default_rng(0)
    x = rng.standard_normal((batch, 8, size, size)).astype(np.float32)
    w = rng.standard_normal((16, 8, 3, 3)).astype(np.float32)
    g = rng.standard_normal((batch, 16, size - 2, size - 2)).astype(np.float32)
    xp = rng.standard_normal((batch, 16, size, size)).astype(np.float32)
    gp = rng.standard_normal((batch, 16, -(-size // 2), -(-size // 2))).astype(np.float32)

    cases = {
        "conv3x3 forward": lambda: kernels.conv3x3_forward(x, w),
        "conv3x3 grad input": lambda: kernels.conv3x3_backward_input(g, w),
        "conv3x3 grad weights": lambda: kernels.conv3x3_backward_weights(x, g),
        "maxpool2x2 forward": lambda: kernels.maxpool2x2_forward(xp),
        "maxpool2x2 backward": lambda: kernels.maxpool2x2_backward(
            gp, kernels.maxpool2x2_forward(xp)[1], size, size),
    }

    results = {}
    available = ["numpy"] + (["numba"] if kernels.HAS_NUMBA else [])
    saved = kernels.backend()
    for backend in available:
        kernels.use_backend(backend)
        results[backend] = {name: _time(fn, repeats) for name, fn in cases.items()}
    kernels.use_backend(saved)

    width = max(len(n) for n in cases)
    header = f"{'kernel':<{width}}  " + "  ".join(f"{b:>12}" for b in available)
    print(header)
    print("-" * len(header))
    for name in cases:
        row = f"{name:<{width}}  "
        row += "  ".join(f"{results[b][name] * 1e3:>10.2f}ms" for b in available)
        if len(available) == 2:
            ratio = results["numpy"][name] / results["numba"][name]
            row += f"   numba x{ratio:.2f}"
        print(row)
    return results


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--batch", type=int, default=8)
    p.add_argument("--size", type=int, default=64)
    args = p.parse_args()
    run(args.repeats, args.batch, args.size)


if __name__ == "__main__":
    main()
