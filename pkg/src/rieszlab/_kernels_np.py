"""Pure-numpy fallback for the compiled kernels.

Same contracts as _kernels.pyx: zero extension outside the index box,
corner-decomposed multilinear weights, 1 <= d <= 6.
"""

from __future__ import annotations

import itertools

import numpy as np

MAXD = 6


def multilinear_gather(field, points) -> np.ndarray:
    """Sample ``field`` at fractional index coordinates ``points`` (N, d).

    Returns an (N,) float64 array; points outside the index box read zero.
    """
    f = np.ascontiguousarray(field, dtype=np.float64)
    d = f.ndim
    if not 1 <= d <= MAXD:
        raise ValueError(f"field dimension must be 1..{MAXD}, got {d}")
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != d:
        raise ValueError("points must have shape (N, d)")
    base = np.floor(pts).astype(np.int64)
    fr = pts - base
    shape = np.asarray(f.shape, dtype=np.int64)
    out = np.zeros(pts.shape[0], dtype=np.float64)
    flat = f.ravel()
    for corner in itertools.product((0, 1), repeat=d):
        c = np.asarray(corner, dtype=np.int64)
        idx = base + c
        ok = np.all((idx >= 0) & (idx < shape), axis=1)
        w = np.prod(np.where(c == 1, fr, 1.0 - fr), axis=1)
        lin = np.ravel_multi_index(np.clip(idx, 0, shape - 1).T, f.shape)
        out += np.where(ok, w * flat[lin], 0.0)
    return out


def shift_accumulate(field, shifts, weights) -> np.ndarray:
    """Return sum_m weights[m] * field(. - shifts[m]) on the index lattice.

    ``shifts`` is (M, d) in fractional index units; the field is extended
    by zero, so mass leaving the box is dropped.
    """
    f = np.ascontiguousarray(field, dtype=np.float64)
    d = f.ndim
    if not 1 <= d <= MAXD:
        raise ValueError(f"field dimension must be 1..{MAXD}, got {d}")
    sf = np.asarray(shifts, dtype=np.float64)
    if sf.ndim != 2 or sf.shape[1] != d:
        raise ValueError("shifts must have shape (M, d)")
    wt = np.asarray(weights, dtype=np.float64)
    if wt.shape != (sf.shape[0],):
        raise ValueError("weights must have shape (M,)")
    out = np.zeros_like(f)
    base = np.floor(sf).astype(np.int64)
    fr = sf - base
    for m in range(sf.shape[0]):
        for corner in itertools.product((0, 1), repeat=d):
            cw = wt[m]
            dst, src = [], []
            skip = False
            for a in range(d):
                bit = corner[a]
                cw *= fr[m, a] if bit else 1.0 - fr[m, a]
                off = int(base[m, a]) + bit
                lo, hi = max(0, off), min(f.shape[a], f.shape[a] + off)
                if lo >= hi:
                    skip = True
                    break
                dst.append(slice(lo, hi))
                src.append(slice(lo - off, hi - off))
            if skip or cw == 0.0:
                continue
            out[tuple(dst)] += cw * f[tuple(src)]
    return out
