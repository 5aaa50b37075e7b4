"""Compare the compiled kernels against the NumPy fallback.

Run as: python benchmarks/bench_kernels.py

Times the three hot kernels on the shapes the experiments actually use:
small matrices hammered many times (Monte Carlo covariance) and the
recovery-experiment geometry.  Reports per-call microseconds and the
speedup of the compiled path; exits cleanly when the extension is not
built.
"""

import time

import numpy as np

from segcs import _kernels_np

try:
    from segcs import _kernels_cy
except ImportError:
    _kernels_cy = None


def time_call(fn, *args, repeat=5, inner=20):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for _ in range(inner):
            fn(*args)
        best = min(best, (time.perf_counter() - t0) / inner)
    return best


def covariance_case(m_o, n, batch, rng):
    phi = rng.normal(0.0, 1.0, size=(batch, m_o, n))
    x = rng.normal(0.0, 1.0, size=(batch, n))
    src = np.array([np.roll(np.arange(m_o), r) for r in range(m_o)], dtype=np.int64)
    m = 2 * m_o

    def run(impl):
        sum_p = np.zeros((m, m))
        sum_p2 = np.zeros((m, m))
        impl.covariance_accumulate(phi, src, x, sum_p, sum_p2)

    return run


def assemble_case(m_o, n, rng):
    phi = rng.normal(0.0, 1.0, size=(m_o, n))
    src = np.array([np.roll(np.arange(m_o), r) for r in range(m_o)], dtype=np.int64)
    out = np.empty((m_o, n))
    return lambda impl: impl.assemble_rows(phi, src, out)


def segments_case(m_o, n, rng):
    phi = rng.normal(0.0, 1.0, size=(m_o, n))
    x = rng.normal(0.0, 1.0, size=n)
    src = np.array([np.roll(np.arange(m_o), r) for r in range(m_o)], dtype=np.int64)
    out = np.empty(2 * m_o)
    return lambda impl: impl.accumulate_segments(phi, src, x, out)


def main():
    rng = np.random.default_rng(0)
    cases = [
        ("covariance batch m_o=3 n=12 b=4096", covariance_case(3, 12, 4096, rng)),
        ("covariance batch m_o=8 n=64 b=1024", covariance_case(8, 64, 1024, rng)),
        ("assemble m_o=32 n=256", assemble_case(32, 256, rng)),
        ("assemble m_o=8 n=4096", assemble_case(8, 4096, rng)),
        ("segments m_o=32 n=256", segments_case(32, 256, rng)),
        ("segments m_o=8 n=4096", segments_case(8, 4096, rng)),
    ]
    print(f"{'case':40s} {'numpy':>12s} {'compiled':>12s} {'speedup':>8s}")
    for name, run in cases:
        t_np = time_call(run, _kernels_np)
        if _kernels_cy is None:
            print(f"{name:40s} {t_np * 1e6:10.1f}us {'n/a':>12s} {'n/a':>8s}")
            continue
        t_cy = time_call(run, _kernels_cy)
        print(f"{name:40s} {t_np * 1e6:10.1f}us {t_cy * 1e6:10.1f}us {t_np / t_cy:7.2f}x")
    if _kernels_cy is None:
        print("compiled extension not built; only the fallback was timed")


if __name__ == "__main__":
    main()
