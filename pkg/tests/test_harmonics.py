"""Solid harmonics, dimension counts and sphere moments.

Counts are checked against a symbolic Laplacian-kernel computation and
moments against an independent Gaussian-integral route, both in exact
arithmetic.
"""

from fractions import Fraction
from itertools import product

import numpy as np
import pytest
import sympy

from rieszlab import harmonics
from rieszlab.harmonics import (
    MultiIndex,
    SolidHarmonic,
    dim_Hk,
    harmonic_to_text,
    is_harmonic,
    monomial_harmonic,
    parse_harmonic,
    sphere_moment,
    sphere_moment_mc,
    yj_normalization,
)


def _symbolic_harmonic_dimension(d, k):
    """Nullity of the Laplacian on degree-k forms, via sympy polynomials."""
    xs = sympy.symbols(f"x1:{d + 1}")
    monos = [m for m in product(range(k + 1), repeat=d) if sum(m) == k]
    rows = []
    for mono in monos:
        expr = sympy.prod([x**e for x, e in zip(xs, mono)])
        lap = sum(sympy.diff(expr, x, 2) for x in xs)
        rows.append(sympy.Poly(lap, *xs).as_dict() if lap != 0 else {})
    lower = sorted({key for row in rows for key in row})
    if not lower:
        return len(monos)
    matrix = sympy.Matrix(
        [[row.get(key, 0) for row in rows] for key in lower]
    )
    return len(monos) - matrix.rank()


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_dimension_formula_matches_symbolic_nullity(d, k):
    assert dim_Hk(d, k) == _symbolic_harmonic_dimension(d, k)


def test_dimension_small_cases():
    assert dim_Hk(4, 1) == 4
    assert all(dim_Hk(2, k) == 2 for k in range(1, 6))
    assert all(dim_Hk(3, k) == 2 * k + 1 for k in range(1, 6))


@pytest.mark.parametrize("d,k", [(1, 1), (2, 1), (3, 1), (3, 3), (5, 3), (8, 3), (6, 5)])
def test_sphere_moment_matches_gaussian_integral_route(d, k):
    # E[prod g_i^2] = 1 for distinct standard normals and the radial
    # moment E[|g|^(2k)] = 2^k Gamma(d/2+k)/Gamma(d/2) factor out, so the
    # sphere average of the squared monomial is their ratio
    half = sympy.Rational(d, 2)
    radial = sympy.simplify(2**k * sympy.gamma(half + k) / sympy.gamma(half))
    want = sympy.Rational(1) / radial
    got = sphere_moment(d, k)
    assert sympy.Rational(got.numerator, got.denominator) == want


def test_sphere_moment_examples():
    assert sphere_moment(3, 3) == Fraction(1, 105)
    assert sphere_moment(3, 1) == Fraction(1, 3)
    assert sphere_moment(2, 1) == Fraction(1, 2)


def test_first_moments_sum_to_one():
    # the squared coordinates sum to 1 on the sphere
    for d in range(1, 9):
        assert d * sphere_moment(d, 1) == 1


def test_monte_carlo_moment_agrees_within_four_se():
    for d, k in [(3, 3), (5, 3)]:
        est, se = sphere_moment_mc(d, k, 200_000, seed=11)
        assert se > 0
        assert abs(est - float(sphere_moment(d, k))) <= 4 * se


def test_monte_carlo_moment_is_seed_deterministic():
    a = sphere_moment_mc(3, 3, 50_000, seed=2)
    b = sphere_moment_mc(3, 3, 50_000, seed=2)
    assert a == b


def test_monte_carlo_moment_rejects_tiny_sample():
    with pytest.raises(ValueError):
        sphere_moment_mc(3, 3, 10)


def test_multi_index_properties():
    j = MultiIndex((2, 1, 3), 3)
    assert j.k == 3
    assert j.distinct
    assert not MultiIndex((1, 1), 2).distinct
    with pytest.raises(ValueError):
        MultiIndex((0, 1), 2)  # axes are 1-based
    with pytest.raises(ValueError):
        MultiIndex((1, 4), 3)


def test_monomial_harmonic_requires_distinct_axes():
    P = monomial_harmonic(MultiIndex((1, 2, 3), 3))
    assert P.k == 3
    assert P.evaluate((1.0, 2.0, 3.0)) == 6.0
    with pytest.raises(ValueError):
        monomial_harmonic(MultiIndex((1, 1), 2))


def test_harmonic_evaluation_examples():
    P = parse_harmonic("x1 x2^2 - x1 x3^2", 3)
    assert P.evaluate((2.0, 1.0, 1.0)) == 0.0
    assert P.evaluate((1.0, 2.0, 1.0)) == 3.0
    ok, residual = is_harmonic(P)
    assert ok and residual.is_zero


def test_homogeneity_degree():
    P = parse_harmonic("x1 x2 x3", 3)
    x = (0.3, -1.2, 0.7)
    assert np.isclose(P.evaluate(tuple(2 * v for v in x)), 8 * P.evaluate(x))


def test_laplacian_detects_non_harmonic():
    Q = parse_harmonic("x1^2", 2)
    ok, residual = is_harmonic(Q)
    assert not ok
    assert not residual.is_zero


def test_harmonic_linear_algebra():
    A = parse_harmonic("x1^3 - 3 x1 x2^2", 2)
    B = parse_harmonic("x2^3 - 3 x2 x1^2", 2)
    combo = A + B.scaled(Fraction(-2))
    assert is_harmonic(combo)[0]
    x = (0.4, -0.9)
    assert np.isclose(
        combo.evaluate(x), A.evaluate(x) - 2 * B.evaluate(x), rtol=1e-14
    )


def test_evaluate_mesh_matches_pointwise():
    P = parse_harmonic("x1 x2", 2)
    xs = np.linspace(-1, 1, 5)
    mesh = np.meshgrid(xs, xs, indexing="ij")
    grid_vals = P.evaluate_mesh(mesh)
    for i in range(5):
        for j in range(5):
            assert np.isclose(grid_vals[i, j], xs[i] * xs[j])


def test_normalization_example_and_defining_relation():
    assert np.isclose(yj_normalization(3, 3), np.sqrt(15.0), rtol=1e-12)
    for d, k in [(2, 1), (3, 1), (3, 3), (5, 3)]:
        c = yj_normalization(d, k)
        assert np.isclose(
            c * c * float(sphere_moment(d, k)) * dim_Hk(d, k), 1.0, rtol=1e-12
        )


def test_parse_and_format_roundtrip():
    for text, d in [
        ("x1 x2 x3", 3),
        ("x1 x2^2 - x1 x3^2", 3),
        ("2/3 x1^3 - 2 x1 x2^2", 2),
    ]:
        P = parse_harmonic(text, d)
        again = parse_harmonic(harmonic_to_text(P), d)
        assert again == P


def test_parse_rejects_malformed_input():
    with pytest.raises(ValueError):
        parse_harmonic("x1 + x2^2", 2)  # mixed degrees
    with pytest.raises(ValueError):
        parse_harmonic("x7", 3)  # axis out of range
    with pytest.raises(ValueError):
        parse_harmonic("3 * bananas", 2)
    with pytest.raises(ValueError):
        parse_harmonic("", 2)


def test_solid_harmonic_rejects_inhomogeneous_terms():
    with pytest.raises(ValueError):
        SolidHarmonic(2, 2, {(2, 0): Fraction(1), (1, 0): Fraction(1)})
