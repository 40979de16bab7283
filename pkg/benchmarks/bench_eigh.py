"""Timing comparison of the two Jacobi kernels (compiled vs pure Python).

Run: python benchmarks/bench_eigh.py [--sizes 4,8,16,32,64] [--repeats 5]

Also times a full operator-scaling search through the public API under each
backend, since that pipeline is where the eigensolver dominates.
"""

import argparse
import time

import numpy as np

from qmarginals import _jacobi_py

try:
    from qmarginals import _jacobi
except ImportError:
    _jacobi = None


def random_hermitian(rng, dim):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (g + g.conj().T) / 2.0


def time_kernel(kernel, mats, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        for h in mats:
            a = np.ascontiguousarray(h.copy())
            v = np.eye(h.shape[0], dtype=complex)
            sweeps = kernel.jacobi_cyclic(a, v, 100, 1e-12 * np.linalg.norm(h))
            assert sweeps >= 0
        best = min(best, time.perf_counter() - start)
    return best


def bench_kernels(sizes, repeats):
    rng = np.random.default_rng(0)
    print(f"{'dim':>5} {'python':>12} {'compiled':>12} {'speedup':>9}")
    for dim in sizes:
        mats = [random_hermitian(rng, dim) for _ in range(10)]
        t_py = time_kernel(_jacobi_py, mats, repeats)
        if _jacobi is None:
            print(f"{dim:>5} {t_py * 1e3:>10.2f}ms {'n/a':>12} {'n/a':>9}")
            continue
        t_cy = time_kernel(_jacobi, mats, repeats)
        print(f"{dim:>5} {t_py * 1e3:>10.2f}ms {t_cy * 1e3:>10.2f}ms {t_py / t_cy:>8.1f}x")


def bench_pipeline(repeats):
    import os
    import subprocess
    import sys

    code = (
        "import time, numpy as np\n"
        "from qmarginals import uniform_targets, find_extremal_candidate\n"
        "cfg = uniform_targets(2, 3)\n"
        "start = time.perf_counter()\n"
        "for seed in range(10):\n"
        "    find_extremal_candidate(2, 3, 2, cfg, seed)\n"
        "print(time.perf_counter() - start)\n"
    )
    print("\nfull search pipeline, 10 seeds at (2, 3, r=2):")
    for label, env_value in (("python", "1"), ("compiled", "")):
        if label == "compiled" and _jacobi is None:
            print("  compiled: n/a")
            continue
        env = dict(os.environ)
        if env_value:
            env["QMARGINALS_PURE_PYTHON"] = env_value
        else:
            env.pop("QMARGINALS_PURE_PYTHON", None)
        best = float("inf")
        for _ in range(repeats):
            out = subprocess.run(
                [sys.executable, "-c", code], env=env, capture_output=True, text=True
            )
            best = min(best, float(out.stdout.strip()))
        print(f"  {label:>8}: {best * 1e3:.1f}ms")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="4,8,16,32,64")
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    print(f"kernel timings (best of {args.repeats}, 10 matrices per size)")
    bench_kernels(sizes, args.repeats)
    bench_pipeline(args.repeats)


if __name__ == "__main__":
    main()
