"""Riesz-type operators on sampled fields.

R_P acts by the Fourier multiplier (-i)^k P(xi)/|xi|^k; the truncated
transform R_P^t integrates the kernel gamma_k P(y)/|y|^{k+d} over lattice
offsets |y| > t with zero extension of f; maximal variants take pointwise
suprema over a finite truncation grid. The directional truncated Hilbert
transform uses the 1/pi convention H_w^t f(x) = (1/pi) int_{|s|>t} f(x-sw) ds/s.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .grid import GridSpec, ScalarField
from .harmonics import SolidHarmonic, is_harmonic
from .kernels import shift_accumulate

__all__ = [
    "gamma_k", "KernelSpec", "make_kernel", "TruncationGrid",
    "default_truncation_grid", "riesz_multiplier", "multiplier_grid",
    "riesz_apply", "truncated_riesz_direct", "truncated_kernel_spectrum",
    "maximal_riesz", "directional_hilbert_truncated", "maximal_hilbert_1d",
    "EmptyTruncationWarning",
]


class EmptyTruncationWarning(UserWarning):
    """Truncation radius excludes every lattice offset; result is zero."""


def gamma_k(d: int, k: int) -> float:
    """Kernel constant Gamma((k+d)/2) / (pi^{d/2} Gamma(k/2)), log-gamma safe."""
    if d < 1 or k < 1:
        raise ValueError("need d >= 1 and k >= 1")
    return float(np.exp(gammaln((k + d) / 2.0) - (d / 2.0) * np.log(np.pi)
                        - gammaln(k / 2.0)))


@dataclass(frozen=True)
class KernelSpec:
    """A degree-k solid harmonic P with its kernel constant gamma_k."""

    P: SolidHarmonic
    gamma: float
    k: int
    d: int

    def __post_init__(self):
        if (self.P.d, self.P.k) != (self.d, self.k):
            raise ValueError("P degree/dimension disagree with spec fields")
        ok, res = is_harmonic(self.P)
        if not ok:
            raise ValueError(f"P is not harmonic; Laplacian residual {res.terms}")
        if not math.isclose(self.gamma, gamma_k(self.d, self.k), rel_tol=1e-12):
            raise ValueError("gamma does not match gamma_k(d, k)")


def make_kernel(P: SolidHarmonic) -> KernelSpec:
    return KernelSpec(P, gamma_k(P.d, P.k), P.k, P.d)


@dataclass(frozen=True)
class TruncationGrid:
    """Strictly increasing positive truncation radii t_1 < ... < t_N."""

    values: tuple

    def __post_init__(self):
        vals = tuple(float(t) for t in self.values)
        if not vals:
            raise ValueError("truncation grid must be nonempty")
        if any(t <= 0 for t in vals) or any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError("truncation radii must be positive and strictly increasing")
        object.__setattr__(self, "values", vals)

    def validate_for(self, spec: GridSpec) -> None:
        if self.values[0] < 2 * spec.h - 1e-12:
            raise ValueError(
                f"t_1 = {self.values[0]} below quadrature floor 2h = {2 * spec.h}")
        if self.values[-1] > spec.l / 2 + 1e-12:
            raise ValueError(
                f"t_N = {self.values[-1]} above in-box ceiling l/2 = {spec.l / 2}")


def default_truncation_grid(spec: GridSpec, count: int = 16) -> TruncationGrid:
    """count log-spaced radii spanning [2h, l/2]."""
    lo, hi = 2 * spec.h, spec.l / 2
    if hi < lo:
        raise ValueError("grid too coarse: l/2 < 2h")
    if math.isclose(lo, hi):
        return TruncationGrid((lo,))
    return TruncationGrid(tuple(np.geomspace(lo, hi, count)))


def riesz_multiplier(P: SolidHarmonic, xi) -> complex:
    """Pointwise multiplier (-i)^k P(xi)/|xi|^k, with value 0 at xi = 0."""
    xi = np.asarray(xi, dtype=np.float64)
    if xi.shape != (P.d,):
        raise ValueError(f"xi must have length d={P.d}")
    r = float(np.linalg.norm(xi))
    if r == 0.0:
        return 0j
    return complex((-1j) ** P.k * P.evaluate(xi) / r**P.k)


def _self_conjugate_mask(spec: GridSpec) -> np.ndarray:
    # frequency bins fixed by xi -> -xi on the lattice (index 0 or n/2 per axis)
    idx = np.arange(spec.n)
    line = (idx == 0) | (idx == spec.n // 2)
    mask = line
    for _ in range(spec.d - 1):
        mask = np.logical_and.outer(mask, line)
    return mask


def multiplier_grid(P: SolidHarmonic, spec: GridSpec) -> np.ndarray:
    """Multiplier sampled on the frequency lattice, FFT order.

    Bins fixed by xi -> -xi keep only their real part so that the
    multiplier maps real fields to real fields.
    """
    if P.d != spec.d:
        raise ValueError("polynomial dimension does not match grid")
    mesh = spec.frequency_mesh()
    r = np.sqrt(sum(m**2 for m in mesh))
    vals = P.evaluate_mesh(mesh)
    with np.errstate(divide="ignore", invalid="ignore"):
        mult = (-1j) ** P.k * vals / r**P.k
    mult = np.asarray(mult, dtype=np.complex128)
    mult[r == 0] = 0.0
    sc = _self_conjugate_mask(spec)
    mult[sc] = mult[sc].real
    return mult


def riesz_apply(P: SolidHarmonic, f: ScalarField) -> ScalarField:
    """Apply R_P spectrally; output is real up to roundoff."""
    out = np.fft.ifftn(multiplier_grid(P, f.spec) * np.fft.fftn(f.values))
    return ScalarField(f.spec, out.real)


def _doubled_offsets(spec: GridSpec):
    # offsets (m - n) h, m = 0..2n-1, per axis; centered on the doubled lattice
    o = (np.arange(2 * spec.n) - spec.n) * spec.h
    return np.meshgrid(*([o] * spec.d), indexing="ij", sparse=True)


def _truncated_kernel_doubled(kspec: KernelSpec, spec: GridSpec, t: float) -> np.ndarray:
    if kspec.d != spec.d:
        raise ValueError("kernel dimension does not match grid")
    if t < 2 * spec.h - 1e-12:
        raise ValueError(f"t = {t} below quadrature floor 2h = {2 * spec.h}")
    mesh = _doubled_offsets(spec)
    r = np.sqrt(sum(m**2 for m in mesh))
    vals = kspec.P.evaluate_mesh(mesh)
    with np.errstate(divide="ignore", invalid="ignore"):
        K = kspec.gamma * vals / r ** (kspec.k + spec.d)
    K = np.where(r > t, K, 0.0)
    # the m = 0 slab has no mirror partner on the even lattice; drop it to
    # keep the sampled kernel exactly odd
    for a in range(spec.d):
        sl = [slice(None)] * spec.d
        sl[a] = 0
        K[tuple(sl)] = 0.0
    if not np.any(K):
        warnings.warn(f"t = {t} excludes every lattice offset; result is zero",
                      EmptyTruncationWarning, stacklevel=3)
    return K


def truncated_kernel_spectrum(kspec: KernelSpec, spec: GridSpec, t: float) -> np.ndarray:
    """DFT of the truncated kernel on spec's frequency lattice.

    Computed on the doubled offset lattice (so every offset within the box
    appears exactly once) and subsampled back to the target frequencies.
    """
    K = _truncated_kernel_doubled(kspec, spec, t)
    hat = spec.h**spec.d * np.fft.fftn(np.fft.ifftshift(K))
    sub = (slice(None, None, 2),) * spec.d
    return np.ascontiguousarray(hat[sub])


def truncated_riesz_direct(kspec: KernelSpec, f: ScalarField, t: float) -> ScalarField:
    """Riemann-sum quadrature of the truncated kernel against f.

    Zero extension outside the box: the convolution is evaluated on the
    doubled lattice so no mass wraps around.
    """
    spec = f.spec
    K = _truncated_kernel_doubled(kspec, spec, t)
    pad = np.zeros((2 * spec.n,) * spec.d)
    pad[(slice(0, spec.n),) * spec.d] = f.values
    conv = np.fft.ifftn(np.fft.fftn(pad) * np.fft.fftn(np.fft.ifftshift(K))).real
    out = conv[(slice(0, spec.n),) * spec.d] * spec.h**spec.d
    return ScalarField(spec, out)


def maximal_riesz(kspec: KernelSpec, f: ScalarField, ts: TruncationGrid) -> ScalarField:
    """Pointwise max of |R_P^t f| over the truncation grid."""
    ts.validate_for(f.spec)
    out = None
    for t in ts.values:
        cur = np.abs(truncated_riesz_direct(kspec, f, t).values)
        out = cur if out is None else np.maximum(out, cur)
    return ScalarField(f.spec, out)


def directional_hilbert_truncated(f: ScalarField, omega, t: float) -> ScalarField:
    """Truncated Hilbert transform along the unit direction omega.

    Line values f(x - s omega) come from multilinear interpolation with
    zero extension; the s-integral uses the trapezoid rule with step h/2
    on [t, 2 l sqrt(d)].
    """
    spec = f.spec
    w = np.asarray(omega, dtype=np.float64)
    if w.shape != (spec.d,):
        raise ValueError(f"omega must have length d={spec.d}")
    if abs(np.linalg.norm(w) - 1.0) > 1e-12:
        raise ValueError("omega must be a unit vector (within 1e-12)")
    if t < 2 * spec.h - 1e-12:
        raise ValueError(f"t = {t} below quadrature floor 2h = {2 * spec.h}")
    ds = spec.h / 2.0
    smax = 2.0 * spec.l * math.sqrt(spec.d)
    count = int(math.floor((smax - t) / ds)) + 1
    if count < 2:
        warnings.warn(f"t = {t} leaves no quadrature interval; result is zero",
                      EmptyTruncationWarning, stacklevel=2)
        return ScalarField(spec, np.zeros(spec.shape))
    s = t + ds * np.arange(count)
    wts = np.full(count, ds)
    wts[0] *= 0.5
    wts[-1] *= 0.5
    wts = wts / (np.pi * s)
    # f(x - s w) - f(x + s w), both branches in one accumulation pass
    shifts = np.concatenate([np.outer(s, w), np.outer(-s, w)]) / spec.h
    weights = np.concatenate([wts, -wts])
    out = shift_accumulate(f.values, shifts, weights)
    return ScalarField(spec, out)


def maximal_hilbert_1d(f: ScalarField, ts: TruncationGrid) -> ScalarField:
    """Pointwise max of |H^t f| on the line."""
    if f.spec.d != 1:
        raise ValueError("maximal_hilbert_1d requires d = 1")
    ts.validate_for(f.spec)
    out = None
    for t in ts.values:
        cur = np.abs(directional_hilbert_truncated(f, (1.0,), t).values)
        out = cur if out is None else np.maximum(out, cur)
    return ScalarField(f.spec, out)
