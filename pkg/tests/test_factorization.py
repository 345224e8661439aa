"""Radial profile extraction and the multiplier factorization it feeds.

The 1d profile has a sine-integral closed form, which anchors everything
else: higher-dimensional profiles are then checked through operator
residuals, scaling covariance and exported artifacts.
"""

import numpy as np
import pytest
from scipy.special import sici

from rieszlab import factorization as fz, grid, operators as ops
from rieszlab.harmonics import parse_harmonic

from helpers import rel_l2


@pytest.fixture(scope="module")
def profile_1d():
    spec = grid.make_grid(1, 1024, 20.0)
    return fz.mt_profile(1, 1, 1.0, spec), spec


@pytest.fixture(scope="module")
def profile_3d(grid_3d):
    return fz.mt_profile(3, 3, 1.0, grid_3d)


def test_profile_matches_sine_integral_closed_form(profile_1d):
    profile, spec = profile_1d
    r = profile.radii
    want = 1 - (2 / np.pi) * sici(2 * np.pi * profile.t * r)[0]
    delta = 1 / (2 * spec.l)
    # the lowest bins carry the residue of cutting the kernel at the box
    # edge, so compare above a few resolution widths
    band = profile.present & (r >= 16 * delta) & (r <= 2.0)
    assert band.sum() > 50
    assert np.max(np.abs(profile.values.real[band] - want[band])) < 3e-2


def test_profile_metadata_and_bounds(profile_1d, profile_3d):
    profile, spec = profile_1d
    assert profile.d == 1 and profile.k == 1 and profile.t == 1.0
    assert profile.radii.shape == profile.values.shape
    assert np.all(np.diff(profile.radii) > 0)
    for p in (profile, profile_3d):
        resolved = np.abs(p.values[p.resolved])
        assert resolved.max() <= fz.profile_bound(p)
        assert p.max_imag_ratio < 5e-2


def test_profile_radial_scatter_is_small(profile_3d):
    assert fz.max_resolved_cv(profile_3d) < 5e-2
    counted = profile_3d.present & (profile_3d.bin_counts > 1)
    # degenerate radius classes (near-vanishing mean ratio) report inf;
    # most classes must still carry a finite scatter estimate
    finite = np.isfinite(profile_3d.bin_cv[counted])
    assert finite.mean() > 0.8


def test_factorization_residual_is_small_for_each_harmonic(grid_3d, gaussian_3d):
    for text in ("x1 x2 x3", "x1 x2^2 - x1 x3^2"):
        res = fz.factorization_residual(parse_harmonic(text, 3), gaussian_3d, 2.0)
        assert res < 5e-2


def test_factorization_residual_self_consistency_1d():
    # mean-zero input: a nonzero mean leaves a slowly decaying 1/x tail
    # that wraps around the box and dominates the comparison
    spec = grid.make_grid(1, 1024, 20.0)
    x = spec.axis()
    f = grid.ScalarField(spec, (x * x - 1) * np.exp(-x * x / 2))
    res = fz.factorization_residual(parse_harmonic("x1", 1), f, 1.0)
    assert res < 5e-2


def test_factorization_residual_trivial_inputs(grid_3d):
    zero = grid.ScalarField(grid_3d, np.zeros(grid_3d.shape))
    assert fz.factorization_residual(parse_harmonic("x1 x2 x3", 3), zero, 1.0) == 0.0
    with pytest.raises(ValueError):
        fz.factorization_residual(parse_harmonic("x1^2", 3), zero, 1.0)


def test_profile_dilation_covariance_1d():
    # doubling the cutoff halves the frequency where each feature sits
    spec = grid.make_grid(1, 1024, 40.0)
    pa = fz.mt_profile(1, 1, 1.0, spec)
    pb = fz.mt_profile(1, 1, 2.0, spec)
    delta = 1 / (2 * spec.l)
    idx = np.arange(16, 129)
    va = np.interp(idx * delta * 2, pa.radii, pa.values.real)
    vb = np.interp(idx * delta, pb.radii, pb.values.real)
    assert np.max(np.abs(va - vb)) < 5e-2


def test_profile_dilation_covariance_3d():
    spec = grid.make_grid(3, 64, 8.0)
    pa = fz.mt_profile(3, 3, 1.0, spec)
    pb = fz.mt_profile(3, 3, 2.0, spec)
    delta = 1 / (2 * spec.l)
    # both interpolation arguments (r and 2r) must stay at or below the
    # resolved ceiling 1/(4h) = 1 of this grid
    rs = delta * np.arange(4, 9)
    va = np.interp(rs * 2, pa.radii, pa.values.real)
    vb = np.interp(rs, pb.radii, pb.values.real)
    assert np.max(np.abs(va - vb)) < 5e-2


def test_first_order_identity_residual_across_dimensions(grid_2d, grid_3d):
    spec1 = grid.make_grid(1, 1024, 40.0)
    x = spec1.axis()
    mean_zero = grid.ScalarField(spec1, (x * x - 1) * np.exp(-x * x / 2))
    assert fz.m1t_identity_residual(mean_zero, 1.0) < 5e-2
    f2 = grid.test_function(grid_2d, "gaussian", sigma=0.6)
    assert fz.m1t_identity_residual(f2, 1.0) < 5e-2
    f3 = grid.test_function(grid_3d, "gaussian", sigma=0.6)
    assert fz.m1t_identity_residual(f3, 1.0) < 8e-2


def _constant_profile(profile, value):
    values = np.full_like(profile.values, value)
    return fz.RadialProfile(
        t=profile.t,
        k=profile.k,
        d=profile.d,
        spec=profile.spec,
        radii=profile.radii,
        values=values,
        bin_counts=profile.bin_counts,
        bin_cv=np.zeros_like(profile.bin_cv),
        present=np.ones_like(profile.present),
    )


def test_apply_profile_identity_and_zero(profile_1d):
    profile, spec = profile_1d
    f = grid.test_function(spec, "gaussian_times_poly", sigma=1.0)
    same = fz.apply_Mkt(_constant_profile(profile, 1.0), f)
    assert rel_l2(same.values, f.values) < 1e-12
    nothing = fz.apply_Mkt(_constant_profile(profile, 0.0), f)
    assert np.max(np.abs(nothing.values)) < 1e-14


def test_apply_profile_is_linear(profile_1d):
    profile, spec = profile_1d
    f = grid.test_function(spec, "gaussian", sigma=1.0)
    g = grid.test_function(spec, "gaussian_times_poly", sigma=1.0)
    combo = grid.ScalarField(spec, 1.5 * f.values - 0.5 * g.values)
    lhs = fz.apply_Mkt(profile, combo)
    rhs = 1.5 * fz.apply_Mkt(profile, f).values - 0.5 * fz.apply_Mkt(profile, g).values
    assert rel_l2(lhs.values, rhs) < 1e-12


def test_apply_profile_rejects_mismatched_geometry(profile_1d):
    profile, _ = profile_1d
    other = grid.make_grid(1, 512, 20.0)
    f = grid.test_function(other, "gaussian", sigma=1.0)
    with pytest.raises(ValueError):
        fz.apply_Mkt(profile, f)


def test_overly_strict_conditioning_threshold_raises(grid_3d):
    # discarding almost every bin must be reported, not papered over
    with pytest.raises(ValueError):
        fz.mt_profile(3, 3, 1.0, grid_3d, threshold=0.99)


def test_profile_csv_export(tmp_path, profile_3d):
    path = tmp_path / "profile.csv"
    fz.export_profile_csv(profile_3d, path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "radius,re,im,bin_count,bin_cv"
    assert len(lines) == 1 + len(profile_3d.radii)
    first = lines[1].split(",")
    assert float(first[0]) == profile_3d.radii[0]
    assert float(first[1]) == profile_3d.values[0].real
