# cython: language_level=3
"""Compiled hot loops: multilinear interpolation and shifted accumulation.

Both routines treat the field as extended by zero outside its index box,
use corner weights (1-fr)/fr per axis, and support 1 <= d <= 6.
"""

import numpy as np

cimport cython
from libc.math cimport floor

DEF MAXD = 6


@cython.boundscheck(False)
@cython.wraparound(False)
cdef void _gather(const double* data, const Py_ssize_t* sh,
                  const Py_ssize_t* st, int d,
                  const double* pts, Py_ssize_t npts, double* out) noexcept nogil:
    cdef Py_ssize_t n, flat, ii
    cdef int a, c, bit, ok, ncorner = 1 << d
    cdef double v, w, acc
    cdef Py_ssize_t base[MAXD]
    cdef double fr[MAXD]
    for n in range(npts):
        for a in range(d):
            v = pts[n * d + a]
            base[a] = <Py_ssize_t>floor(v)
            fr[a] = v - floor(v)
        acc = 0.0
        for c in range(ncorner):
            w = 1.0
            flat = 0
            ok = 1
            for a in range(d):
                bit = (c >> a) & 1
                ii = base[a] + bit
                if ii < 0 or ii >= sh[a]:
                    ok = 0
                    break
                w *= fr[a] if bit else 1.0 - fr[a]
                flat += ii * st[a]
            if ok:
                acc += w * data[flat]
        out[n] = acc


@cython.boundscheck(False)
@cython.wraparound(False)
cdef void _shift_acc(const double* data, double* out, const Py_ssize_t* sh,
                     const Py_ssize_t* st, int d,
                     const double* shifts, const double* weights,
                     Py_ssize_t nshift) noexcept nogil:
    cdef Py_ssize_t m, i, length, dst_base, src_off, inner
    cdef int a, c, bit, empty, ncorner = 1 << d
    cdef double v, cw
    cdef Py_ssize_t off[MAXD]
    cdef Py_ssize_t lo[MAXD]
    cdef Py_ssize_t hi[MAXD]
    cdef Py_ssize_t idx[MAXD]
    cdef double fr[MAXD]
    cdef Py_ssize_t ibase[MAXD]
    for m in range(nshift):
        for a in range(d):
            v = shifts[m * d + a]
            ibase[a] = <Py_ssize_t>floor(v)
            fr[a] = v - floor(v)
        for c in range(ncorner):
            cw = weights[m]
            empty = 0
            for a in range(d):
                bit = (c >> a) & 1
                cw *= fr[a] if bit else 1.0 - fr[a]
                off[a] = ibase[a] + bit
                # dst range where src index dst-off stays in bounds
                lo[a] = off[a] if off[a] > 0 else 0
                hi[a] = sh[a] + off[a] if off[a] < 0 else sh[a]
                if lo[a] >= hi[a]:
                    empty = 1
            if empty or cw == 0.0:
                continue
            length = hi[d - 1] - lo[d - 1]
            src_off = 0
            for a in range(d):
                src_off -= off[a] * st[a]
            for a in range(d - 1):
                idx[a] = lo[a]
            while True:
                dst_base = lo[d - 1]
                for a in range(d - 1):
                    dst_base += idx[a] * st[a]
                for i in range(length):
                    inner = dst_base + i
                    out[inner] += cw * data[inner + src_off]
                a = d - 2
                while a >= 0:
                    idx[a] += 1
                    if idx[a] < hi[a]:
                        break
                    idx[a] = lo[a]
                    a -= 1
                else:
                    break


def multilinear_gather(field, points):
    """Sample ``field`` at fractional index coordinates ``points`` (N, d).

    Returns an (N,) float64 array; points outside the index box read zero.
    """
    f = np.ascontiguousarray(field, dtype=np.float64)
    cdef int d = f.ndim
    if not 1 <= d <= MAXD:
        raise ValueError(f"field dimension must be 1..{MAXD}, got {d}")
    pts = np.ascontiguousarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != d:
        raise ValueError("points must have shape (N, d)")
    cdef const double[::1] fv = np.ascontiguousarray(f).ravel()
    cdef const double[:, ::1] pv = pts
    out = np.empty(pts.shape[0], dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t sh[MAXD]
    cdef Py_ssize_t st[MAXD]
    cdef int a
    cdef Py_ssize_t npts = pv.shape[0]
    for a in range(d):
        sh[a] = f.shape[a]
        st[a] = f.strides[a] // f.itemsize
    if npts:
        with nogil:
            _gather(&fv[0], sh, st, d, &pv[0, 0], npts, &ov[0])
    return out


def shift_accumulate(field, shifts, weights):
    """Return sum_m weights[m] * field(. - shifts[m]) on the index lattice.

    ``shifts`` is (M, d) in fractional index units; the field is extended
    by zero, so mass leaving the box is dropped.
    """
    f = np.ascontiguousarray(field, dtype=np.float64)
    cdef int d = f.ndim
    if not 1 <= d <= MAXD:
        raise ValueError(f"field dimension must be 1..{MAXD}, got {d}")
    sf = np.ascontiguousarray(shifts, dtype=np.float64)
    if sf.ndim != 2 or sf.shape[1] != d:
        raise ValueError("shifts must have shape (M, d)")
    wt = np.ascontiguousarray(weights, dtype=np.float64)
    if wt.shape != (sf.shape[0],):
        raise ValueError("weights must have shape (M,)")
    out = np.zeros_like(f)
    cdef const double[::1] fv = np.ascontiguousarray(f).ravel()
    cdef double[::1] ov = out.ravel()
    cdef const double[:, ::1] sv = sf
    cdef const double[::1] wv = wt
    cdef Py_ssize_t sh[MAXD]
    cdef Py_ssize_t st[MAXD]
    cdef int a
    cdef Py_ssize_t nshift = sv.shape[0]
    for a in range(d):
        sh[a] = f.shape[a]
        st[a] = f.strides[a] // f.itemsize
    if nshift:
        with nogil:
            _shift_acc(&fv[0], &ov[0], sh, st, d, &sv[0, 0], &wv[0], nshift)
    return out
