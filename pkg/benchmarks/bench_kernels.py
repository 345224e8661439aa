"""Compare the compiled interpolation kernels against the numpy fallback.

Times ``multilinear_gather`` and ``shift_accumulate`` on workloads shaped
like the ones the rotation-averaging and directional-quadrature paths
produce: one gathered point per grid site, and a few hundred weighted
shifts folded into an accumulator.

Run as a script:

    python3 benchmarks/bench_kernels.py [--repeats N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from rieszlab import _kernels_np

try:
    from rieszlab import _kernels
except ImportError:
    _kernels = None


def _time_call(fn, *args, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def _gather_case(shape, seed):
    rng = np.random.default_rng(seed)
    field = rng.standard_normal(shape)
    npts = int(np.prod(shape))
    pts = rng.uniform(-1.0, max(shape), size=(npts, len(shape)))
    return field, pts


def _shift_case(shape, n_shifts, seed):
    rng = np.random.default_rng(seed)
    field = rng.standard_normal(shape)
    shifts = rng.uniform(-4.0, 4.0, size=(n_shifts, len(shape)))
    weights = rng.standard_normal(n_shifts)
    return field, shifts, weights


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args(argv)

    if _kernels is None:
        print("compiled extension unavailable; timing numpy backend only")

    cases = []
    for shape in [(256, 256), (64, 64, 64)]:
        field, pts = _gather_case(shape, 0)
        cases.append((f"gather {shape} x{len(pts)}", "multilinear_gather",
                      (field, pts)))
    for shape, n_shifts in [((256, 256), 400), ((64, 64, 64), 400)]:
        field, shifts, weights = _shift_case(shape, n_shifts, 1)
        cases.append((f"shift  {shape} x{n_shifts}", "shift_accumulate",
                      (field, shifts, weights)))

    header = f"{'case':<28} {'numpy (s)':>10} {'compiled (s)':>13} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for label, name, call_args in cases:
        t_np = _time_call(getattr(_kernels_np, name), *call_args,
                          repeats=args.repeats)
        if _kernels is None:
            print(f"{label:<28} {t_np:>10.4f} {'-':>13} {'-':>8}")
            continue
        t_c = _time_call(getattr(_kernels, name), *call_args,
                         repeats=args.repeats)
        out_np = getattr(_kernels_np, name)(*call_args)
        out_c = getattr(_kernels, name)(*call_args)
        if not np.allclose(out_np, out_c, rtol=1e-12, atol=1e-12):
            raise AssertionError(f"backend mismatch on {label}")
        print(f"{label:<28} {t_np:>10.4f} {t_c:>13.4f} {t_np / t_c:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
