"""Uniform periodic-box discretization of functions on R^d.

Fields live on the lattice x_i = -l + m h (h = 2l/n) in [-l, l)^d; spectra
live on the frequency lattice xi_i = m/(2l), m = -n/2 .. n/2 - 1, stored in
FFT order. Forward/inverse transforms carry the volume element h^d so that
coefficients approximate the continuous integral transform
F(xi) = integral of f(x) exp(-2 pi i x.xi) dx.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

MAX_DIM = 6
DEFAULT_POINT_BUDGET = 2**24

TEST_FUNCTION_KINDS = (
    "gaussian",
    "shifted_gaussian",
    "gaussian_times_poly",
    "random_band_limited",
)


class SupportWarning(UserWarning):
    """Effective support of a test function exceeds the in-box guard radius."""


@dataclass(frozen=True)
class GridSpec:
    """Geometry of the box [-l, l)^d sampled with n points per axis."""

    d: int
    n: int
    l: float

    def __post_init__(self):
        if not isinstance(self.d, int) or not 1 <= self.d <= MAX_DIM:
            raise ValueError(f"d must be an integer in 1..{MAX_DIM}, got {self.d!r}")
        if not isinstance(self.n, int) or self.n < 8 or self.n % 2:
            raise ValueError(f"n must be an even integer >= 8, got {self.n!r}")
        if not (np.isfinite(self.l) and self.l > 0):
            raise ValueError(f"l must be a positive finite real, got {self.l!r}")
        object.__setattr__(self, "l", float(self.l))

    @property
    def h(self) -> float:
        return 2.0 * self.l / self.n

    @property
    def shape(self) -> tuple:
        return (self.n,) * self.d

    @property
    def npoints(self) -> int:
        return self.n**self.d

    def axis(self) -> np.ndarray:
        """Spatial coordinates along one axis."""
        return -self.l + self.h * np.arange(self.n)

    def frequency_axis(self) -> np.ndarray:
        """Frequencies m/(2l) in FFT order."""
        return np.fft.fftfreq(self.n, d=self.h)

    def coordinate_mesh(self) -> tuple:
        return np.meshgrid(*([self.axis()] * self.d), indexing="ij", sparse=True)

    def frequency_mesh(self) -> tuple:
        return np.meshgrid(*([self.frequency_axis()] * self.d), indexing="ij",
                           sparse=True)

    def frequency_radius(self) -> np.ndarray:
        mesh = self.frequency_mesh()
        return np.sqrt(sum(m**2 for m in mesh))


def make_grid(d: int, n: int, l: float, max_points: int = DEFAULT_POINT_BUDGET) -> GridSpec:
    """Validated GridSpec; rejects odd n, out-of-range d, oversize grids."""
    spec = GridSpec(int(d), int(n), float(l))
    if spec.npoints > max_points:
        raise ValueError(
            f"grid has {spec.npoints} points, exceeding the budget {max_points}")
    return spec


def _as_read_only(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class ScalarField:
    """Real samples on the spatial lattice, row-major over axes."""

    spec: GridSpec
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.size != self.spec.npoints:
            raise ValueError(
                f"values has {v.size} entries, grid wants {self.spec.npoints}")
        v = v.reshape(self.spec.shape)
        if not np.all(np.isfinite(v)):
            raise ValueError("field values must be finite")
        object.__setattr__(self, "values", _as_read_only(v))

    def with_values(self, values: np.ndarray) -> "ScalarField":
        return ScalarField(self.spec, values)


@dataclass(frozen=True)
class SpectralField:
    """Complex coefficients on the frequency lattice, FFT order."""

    spec: GridSpec
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.complex128)
        if c.size != self.spec.npoints:
            raise ValueError(
                f"coeffs has {c.size} entries, grid wants {self.spec.npoints}")
        object.__setattr__(self, "coeffs", _as_read_only(c.reshape(self.spec.shape)))


def _center_phase(spec: GridSpec) -> np.ndarray:
    # (-1)^m per axis accounts for the box starting at -l rather than 0
    s = 1.0 - 2.0 * (np.arange(spec.n) % 2)
    out = s
    for _ in range(spec.d - 1):
        out = np.multiply.outer(out, s)
    return out


def forward_transform(f: ScalarField) -> SpectralField:
    """Discrete approximation of the continuous Fourier transform of f."""
    spec = f.spec
    coeffs = spec.h**spec.d * _center_phase(spec) * np.fft.fftn(f.values)
    return SpectralField(spec, coeffs)


def inverse_transform(F: SpectralField) -> ScalarField:
    """Left inverse of forward_transform; discards the O(eps) imaginary residue."""
    spec = F.spec
    values = np.fft.ifftn(_center_phase(spec) * F.coeffs) / spec.h**spec.d
    return ScalarField(spec, values.real)


def lp_norm(f: ScalarField, p: float) -> float:
    """Riemann-sum L^p norm (sum |f|^p h^d)^(1/p), 1 <= p < inf."""
    p = float(p)
    if not np.isfinite(p) or p < 1:
        raise ValueError(f"p must satisfy 1 <= p < inf, got {p}")
    hd = f.spec.h**f.spec.d
    return float((np.sum(np.abs(f.values) ** p) * hd) ** (1.0 / p))


def spectral_l2_norm(F: SpectralField) -> float:
    """l2 norm of the coefficients with the frequency cell volume (1/2l)^d."""
    dxi = 1.0 / (2.0 * F.spec.l)
    return float(np.sqrt(np.sum(np.abs(F.coeffs) ** 2) * dxi**F.spec.d))


def _support_guard(spec: GridSpec, radius: float, strict: bool) -> None:
    if radius <= spec.l / 2:
        return
    msg = (f"effective support radius {radius:.3g} exceeds l/2 = {spec.l / 2:.3g}; "
           "truncation shells and rotations may clip mass")
    if strict:
        raise ValueError(msg)
    warnings.warn(msg, SupportWarning, stacklevel=3)


def test_function(spec: GridSpec, kind: str, *, center: Iterable | None = None,
                  sigma: float = 1.0, axis: int = 1, cutoff: float | None = None,
                  seed: int = 0, strict: bool = False) -> ScalarField:
    """Smooth rapidly-decaying sample field of the requested kind.

    Kinds: ``gaussian`` exp(-|x-c|^2/(2 sigma^2)); ``shifted_gaussian`` the
    same with default center (1, 0, ...); ``gaussian_times_poly`` multiplies
    the centered gaussian by the coordinate x_axis (axis is 1-based);
    ``random_band_limited`` draws a seeded random spectrum supported in
    |xi| <= cutoff (default 0.5), localized by a gaussian envelope of width
    l/8 and normalized to unit sup norm. Deterministic for fixed seed.
    """
    if kind not in TEST_FUNCTION_KINDS:
        raise ValueError(f"unknown kind {kind!r}; choose from {TEST_FUNCTION_KINDS}")
    mesh = spec.coordinate_mesh()

    if kind == "random_band_limited":
        if cutoff is None:
            cutoff = 0.5
        env_sigma = spec.l / 8.0
        _support_guard(spec, 4.0 * env_sigma, strict)
        rng = np.random.default_rng(seed)
        shape = spec.shape
        spectrum = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        spectrum = np.where(spec.frequency_radius() <= cutoff, spectrum, 0.0)
        rough = np.fft.ifftn(spectrum).real
        r2 = sum(m**2 for m in mesh)
        values = rough * np.exp(-r2 / (2.0 * env_sigma**2))
        peak = np.max(np.abs(values))
        if peak == 0:
            raise ValueError("band limit too tight: no frequencies survive")
        return ScalarField(spec, values / peak)

    if center is None:
        center = np.zeros(spec.d)
        if kind == "shifted_gaussian":
            center[0] = 1.0
    center = np.asarray(center, dtype=np.float64)
    if center.shape != (spec.d,):
        raise ValueError(f"center must have length d={spec.d}")
    if not (np.isfinite(sigma) and sigma > 0):
        raise ValueError("sigma must be positive")
    _support_guard(spec, float(np.linalg.norm(center)) + 4.0 * sigma, strict)

    r2 = sum((m - c)**2 for m, c in zip(mesh, center))
    values = np.exp(-r2 / (2.0 * sigma**2))
    if kind == "gaussian_times_poly":
        if not 1 <= axis <= spec.d:
            raise ValueError(f"axis must be in 1..{spec.d}")
        values = values * np.broadcast_to(mesh[axis - 1], spec.shape)
    return ScalarField(spec, values)


def save_field(f: ScalarField, path) -> None:
    """Write a field as JSON: {"grid": {"d","n","l"}, "values": [...]}."""
    payload = {
        "grid": {"d": f.spec.d, "n": f.spec.n, "l": f.spec.l},
        "values": [float(v) for v in f.values.ravel()],
    }
    Path(path).write_text(json.dumps(payload))


def load_field(path) -> ScalarField:
    """Read a field written by save_field."""
    payload = json.loads(Path(path).read_text())
    g = payload["grid"]
    spec = make_grid(int(g["d"]), int(g["n"]), float(g["l"]))
    return ScalarField(spec, np.asarray(payload["values"], dtype=np.float64))
