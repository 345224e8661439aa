"""Averaging the composite operator R^t = sum_{j in I} R_j^t R_j over SO(d).

The distinct-index set I, the exact constants a-tilde and C(d,k) built from
sphere moments, Haar sampling of rotations, conjugation of operators by
rotations, and the Monte Carlo check that C(d,k) times the rotation average
of R^t reproduces the radial operator M_k^t.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .factorization import apply_Mkt, mt_profile
from .grid import ScalarField, SupportWarning, lp_norm
from .harmonics import MultiIndex, monomial_harmonic, sphere_moment
from .kernels import multilinear_gather
from .operators import (TruncationGrid, make_kernel, multiplier_grid,
                        riesz_apply, truncated_riesz_direct)

__all__ = [
    "RotationMatrix", "AveragingReport", "index_set_I", "a_tilde", "c_dk",
    "haar_rotation", "identity_rotation", "rotate_field", "conjugate_apply",
    "composite_Rt", "composite_Rstar", "averaging_residual",
]


@dataclass(frozen=True)
class RotationMatrix:
    """Element of SO(d): orthogonal within 1e-10, determinant +1 within 1e-8."""

    d: int
    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=np.float64)
        if m.shape != (self.d, self.d):
            raise ValueError(f"entries must be {self.d}x{self.d}")
        if np.max(np.abs(m.T @ m - np.eye(self.d))) > 1e-10:
            raise ValueError("matrix is not orthogonal within 1e-10")
        if abs(np.linalg.det(m) - 1.0) > 1e-8:
            raise ValueError("determinant must be +1 within 1e-8")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    def inverse(self) -> "RotationMatrix":
        return RotationMatrix(self.d, self.entries.T)


@dataclass(frozen=True)
class AveragingReport:
    d: int
    k: int
    t: float
    rotations_used: int
    residual: float
    stderr: float

    def __post_init__(self):
        if self.residual < 0 or self.rotations_used < 1:
            raise ValueError("residual must be >= 0 over at least one rotation")


def index_set_I(d: int, k: int) -> list:
    """All k-tuples of distinct axes in 1..d; |I| = d!/(d-k)!."""
    if not 1 <= k <= d:
        raise ValueError(f"need 1 <= k <= d, got k={k}, d={d}")
    return [MultiIndex(p, d) for p in itertools.permutations(range(1, d + 1), k)]


def a_tilde(d: int, k: int) -> Fraction:
    """Exact constant -|I| * sphere_moment(d, k); lies in [-1, 0)."""
    size = 1
    for i in range(k):
        size *= d - i
    return -size * sphere_moment(d, k)


def c_dk(d: int, k: int) -> Fraction:
    """Normalizing constant 1 / a_tilde(d, k)."""
    a = a_tilde(d, k)
    if a == 0:
        raise ValueError("degenerate a_tilde")
    return 1 / a


def identity_rotation(d: int) -> RotationMatrix:
    return RotationMatrix(d, np.eye(d))


def haar_rotation(d: int, seed=None) -> RotationMatrix:
    """Haar-distributed element of SO(d), d >= 2.

    QR of a Gaussian matrix with the R-diagonal sign fixed gives Haar on
    O(d); a determinant of -1 is corrected by flipping the last column.
    """
    if d < 2:
        raise ValueError("haar_rotation needs d >= 2; SO(1) is trivial")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    g = rng.standard_normal((d, d))
    q, r = np.linalg.qr(g)
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, -1] = -q[:, -1]
    return RotationMatrix(d, q)


def _out_of_box_fraction(f: ScalarField) -> float:
    spec = f.spec
    mesh = spec.coordinate_mesh()
    r2 = sum(m**2 for m in mesh)
    outside = np.where(r2 > (spec.l / 2) ** 2, f.values, 0.0)
    total = float(np.sqrt(np.sum(f.values**2)))
    if total == 0.0:
        return 0.0
    return float(np.sqrt(np.sum(outside**2)) / total)


def rotate_field(f: ScalarField, U: RotationMatrix) -> ScalarField:
    """Samples of f(U^{-1} x) by multilinear interpolation, zero outside."""
    spec = f.spec
    if U.d != spec.d:
        raise ValueError("rotation dimension does not match grid")
    mesh = np.meshgrid(*([spec.axis()] * spec.d), indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    # U^{-1} x = U^T x; row-vector form x U
    idx = (pts @ U.entries + spec.l) / spec.h
    vals = multilinear_gather(f.values, idx)
    return ScalarField(spec, vals.reshape(spec.shape))


def conjugate_apply(op: Callable[[ScalarField], ScalarField], U: RotationMatrix,
                    f: ScalarField, strict: bool = False) -> ScalarField:
    """The conjugated operator rotate(U) o op o rotate(U^{-1}) applied to f."""
    frac = _out_of_box_fraction(f)
    if frac > 1e-2:
        msg = (f"{frac:.2%} of the field's L2 mass lies outside radius l/2; "
               "rotation will clip it")
        if strict:
            raise ValueError(msg)
        warnings.warn(msg, SupportWarning, stacklevel=2)
    return rotate_field(op(rotate_field(f, U.inverse())), U)


def composite_Rt(f: ScalarField, t: float, d: int, k: int,
                 route: str = "direct") -> ScalarField:
    """Sum over j in I of R_j^t R_j f.

    route="direct" evaluates each truncated transform by kernel quadrature;
    route="spectral" uses the radial factorization R_j^t = M_k^t R_j, so the
    whole sum becomes one radial multiplier against sum_j R_j^2 f.
    """
    spec = f.spec
    if spec.d != d:
        raise ValueError(f"field lives in d={spec.d}, asked for d={d}")
    if route == "direct":
        out = np.zeros(spec.shape)
        for j in index_set_I(d, k):
            P = monomial_harmonic(j)
            out += truncated_riesz_direct(make_kernel(P), riesz_apply(P, f), t).values
        return ScalarField(spec, out)
    if route == "spectral":
        msum = np.zeros(spec.shape, dtype=np.complex128)
        for j in index_set_I(d, k):
            mj = multiplier_grid(monomial_harmonic(j), spec)
            msum += mj * mj
        g = np.fft.ifftn(msum * np.fft.fftn(f.values)).real
        profile = mt_profile(d, k, t, spec)
        return apply_Mkt(profile, ScalarField(spec, g))
    raise ValueError(f"unknown route {route!r}")


def composite_Rstar(f: ScalarField, ts: TruncationGrid, d: int, k: int) -> ScalarField:
    """Pointwise max of |composite_Rt| over the truncation grid."""
    ts.validate_for(f.spec)
    out = None
    for t in ts.values:
        cur = np.abs(composite_Rt(f, t, d, k).values)
        out = cur if out is None else np.maximum(out, cur)
    return ScalarField(f.spec, out)


def averaging_residual(f: ScalarField, t: float, d: int, k: int,
                       n_rotations: int, seed: int = 0) -> AveragingReport:
    """Monte Carlo residual of M_k^t f = C(d,k) . mean_U (R^t)_U f.

    Rotations are i.i.d. Haar samples; the report carries the relative L2
    residual against the radial route and its jackknife standard error.
    """
    spec = f.spec
    if spec.d != d:
        raise ValueError(f"field lives in d={spec.d}, asked for d={d}")
    if n_rotations < 8:
        raise ValueError("use at least 8 rotations")
    fnorm = lp_norm(f, 2)
    if fnorm == 0.0:
        return AveragingReport(d, k, float(t), n_rotations, 0.0, 0.0)

    target = apply_Mkt(mt_profile(d, k, t, spec), f).values
    C = float(c_dk(d, k))
    hd = spec.h**spec.d

    def rel_residual(mean_field: np.ndarray) -> float:
        return float(np.sqrt(np.sum((target - C * mean_field) ** 2) * hd) / fnorm)

    if d == 1:
        # SO(1) = {1}: every sample equals the unconjugated composite
        sample = composite_Rt(f, t, d, k).values
        return AveragingReport(d, k, float(t), n_rotations,
                               rel_residual(sample), 0.0)

    rng = np.random.default_rng(seed)
    op = lambda g: composite_Rt(g, t, d, k)
    samples = np.empty((n_rotations,) + spec.shape)
    for i in range(n_rotations):
        U = haar_rotation(d, rng)
        samples[i] = conjugate_apply(op, U, f).values

    mean = samples.mean(axis=0)
    residual = rel_residual(mean)

    n = n_rotations
    total = samples.sum(axis=0)
    loo = np.array([rel_residual((total - samples[i]) / (n - 1)) for i in range(n)])
    stderr = float(np.sqrt((n - 1) / n * np.sum((loo - loo.mean()) ** 2)))
    return AveragingReport(d, k, float(t), n, residual, stderr)
