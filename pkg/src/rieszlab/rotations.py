"""Method of rotations: reconstruct truncated Riesz transforms from
directional Hilbert transforms averaged over the sphere.

R_j^t f = G(d,k) * integral over S^{d-1} of omega_j H_omega^t f d omega,
with G(d,k) = pi Gamma((k+d)/2) / (Gamma(k/2) Gamma(d/2)) and omega_j the
product omega_{j_1} ... omega_{j_k}. The sphere integral is Monte Carlo
with antithetic pairs (omega, -omega), whose shared integrand value is
computed once since odd k makes it even under the pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .grid import ScalarField
from .harmonics import MultiIndex
from .operators import directional_hilbert_truncated

__all__ = [
    "DirectionBatch", "rotations_constant", "sphere_surface_area",
    "uniform_directions", "mor_estimate", "constant_asymptotic_ratio",
]

_BLOCK = 64  # pairs per accumulation block, fixed for reproducible reduction


@dataclass(frozen=True)
class DirectionBatch:
    """Unit vectors on S^{d-1} with the seed that produced them."""

    d: int
    directions: np.ndarray
    seed: int | None

    def __post_init__(self):
        w = np.asarray(self.directions, dtype=np.float64)
        if w.ndim != 2 or w.shape[1] != self.d or w.shape[0] == 0:
            raise ValueError(f"directions must be a nonempty (N, {self.d}) array")
        norms = np.linalg.norm(w, axis=1)
        if np.max(np.abs(norms - 1.0)) > 1e-12:
            raise ValueError("all directions must be unit vectors within 1e-12")
        w = w.copy()
        w.setflags(write=False)
        object.__setattr__(self, "directions", w)

    def __len__(self) -> int:
        return self.directions.shape[0]


def rotations_constant(d: int, k: int) -> float:
    """pi Gamma((k+d)/2) / (Gamma(k/2) Gamma(d/2)), log-gamma safe."""
    if d < 1 or k < 1:
        raise ValueError("need d >= 1 and k >= 1")
    return float(np.exp(np.log(np.pi) + gammaln((k + d) / 2.0)
                        - gammaln(k / 2.0) - gammaln(d / 2.0)))


def sphere_surface_area(d: int) -> float:
    """Surface area of S^{d-1}: 2 pi^{d/2} / Gamma(d/2)."""
    if d < 1:
        raise ValueError("need d >= 1")
    return float(np.exp(math.log(2.0) + (d / 2.0) * np.log(np.pi) - gammaln(d / 2.0)))


def uniform_directions(d: int, count: int, seed: int | None = 0) -> DirectionBatch:
    """count i.i.d. uniform directions via normalized Gaussian vectors."""
    if count < 1:
        raise ValueError("count must be positive")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((count, d))
    w = g / np.linalg.norm(g, axis=1, keepdims=True)
    return DirectionBatch(d, w, seed if isinstance(seed, int) else None)


def mor_estimate(j: MultiIndex, f: ScalarField, t: float, n_directions: int = 64,
                 seed: int = 0, batch: DirectionBatch | None = None):
    """(estimate, stderr) fields for the rotation reconstruction of R_j^t f.

    Each antithetic pair contributes G(d,k) * prod(omega_j) * H_omega^t f,
    evaluated once per pair. ``batch`` overrides the seeded directions; its
    entries are the pair representatives.
    """
    spec = f.spec
    if j.d != spec.d:
        raise ValueError("multi-index dimension does not match grid")
    if not j.distinct:
        raise ValueError("j must have distinct entries (membership in I)")
    if batch is None:
        if n_directions < 32 or n_directions % 2:
            raise ValueError("n_directions must be an even integer >= 32")
        batch = uniform_directions(spec.d, n_directions // 2, seed)
    elif batch.d != spec.d:
        raise ValueError("direction batch dimension does not match grid")

    const = rotations_constant(spec.d, j.k)
    axes = [e - 1 for e in j.entries]
    npairs = len(batch)
    total = np.zeros(spec.shape)
    total_sq = np.zeros(spec.shape)
    block: list = []
    for i in range(npairs):
        w = batch.directions[i]
        val = const * float(np.prod(w[axes])) * directional_hilbert_truncated(
            f, w, t).values
        block.append(val)
        if len(block) == _BLOCK or i == npairs - 1:
            stacked = np.stack(block)
            total += stacked.sum(axis=0)
            total_sq += (stacked**2).sum(axis=0)
            block = []
    mean = total / npairs
    if npairs > 1:
        var = np.maximum(total_sq - npairs * mean**2, 0.0) / (npairs - 1)
        stderr = np.sqrt(var / npairs)
    else:
        stderr = np.zeros(spec.shape)
    return ScalarField(spec, mean), ScalarField(spec, stderr)


def constant_asymptotic_ratio(d_values, k: int):
    """rotations_constant(d, k) / d^{k/2} for each d; Cauchy in d."""
    out = []
    for d in d_values:
        if d < k:
            raise ValueError(f"need d >= k, got d={d}, k={k}")
        out.append(rotations_constant(int(d), k) / float(d) ** (k / 2.0))
    return out
