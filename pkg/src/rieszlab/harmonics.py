"""Solid harmonics of degree k: exact polynomial arithmetic, space
dimensions, sphere moments, and the normalization constants built from them.

Coefficients are kept as exact rationals so harmonicity is an exact test;
floats appear only at evaluation boundaries.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "MultiIndex", "SolidHarmonic", "monomial_harmonic", "is_harmonic",
    "evaluate", "dim_Hk", "sphere_moment", "sphere_moment_mc",
    "yj_normalization", "parse_harmonic", "harmonic_to_text",
]


@dataclass(frozen=True)
class MultiIndex:
    """k-tuple of axis labels in 1..d."""

    entries: tuple
    d: int

    def __post_init__(self):
        entries = tuple(int(e) for e in self.entries)
        if not entries:
            raise ValueError("multi-index must have at least one entry")
        if any(not 1 <= e <= self.d for e in entries):
            raise ValueError(f"entries must lie in 1..{self.d}, got {entries}")
        object.__setattr__(self, "entries", entries)

    @property
    def k(self) -> int:
        return len(self.entries)

    @property
    def distinct(self) -> bool:
        return len(set(self.entries)) == self.k


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, float):
        return Fraction(c).limit_denominator(10**12)
    return Fraction(c)


@dataclass(frozen=True)
class SolidHarmonic:
    """Homogeneous degree-k polynomial on R^d with exact coefficients.

    ``terms`` maps exponent vectors (length-d tuples summing to k) to
    rational coefficients. The name is aspirational: harmonicity is a
    property checked by is_harmonic, not enforced at construction.
    """

    d: int
    k: int
    terms: Mapping = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for exps, coef in dict(self.terms).items():
            exps = tuple(int(e) for e in exps)
            coef = _as_fraction(coef)
            if len(exps) != self.d or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps} for d={self.d}")
            if sum(exps) != self.k:
                raise ValueError(
                    f"term {exps} has degree {sum(exps)}, polynomial wants k={self.k}")
            if coef:
                clean[exps] = clean.get(exps, Fraction(0)) + coef
        object.__setattr__(self, "terms", {e: c for e, c in clean.items() if c})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "SolidHarmonic") -> "SolidHarmonic":
        if (self.d, self.k) != (other.d, other.k):
            raise ValueError("can only add polynomials of matching (d, k)")
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return SolidHarmonic(self.d, self.k, terms)

    def scaled(self, c) -> "SolidHarmonic":
        c = _as_fraction(c)
        return SolidHarmonic(self.d, self.k,
                             {e: c * v for e, v in self.terms.items()})

    def __sub__(self, other: "SolidHarmonic") -> "SolidHarmonic":
        return self + other.scaled(-1)

    def laplacian(self) -> "SolidHarmonic":
        """Exact Laplacian; a degree k-2 polynomial (zero when k < 2)."""
        out: dict = {}
        kk = max(self.k - 2, 0)
        for exps, coef in self.terms.items():
            for a, e in enumerate(exps):
                if e >= 2:
                    new = list(exps)
                    new[a] = e - 2
                    key = tuple(new)
                    out[key] = out.get(key, Fraction(0)) + coef * e * (e - 1)
        return SolidHarmonic(self.d, kk, out)

    def evaluate(self, x: Sequence[float]) -> float:
        """Float value at a point of length d."""
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.d,):
            raise ValueError(f"point must have length d={self.d}")
        total = 0.0
        for exps, coef in self.terms.items():
            term = float(coef)
            for xa, e in zip(x, exps):
                if e:
                    term *= xa**e
            total += term
        return total

    def evaluate_mesh(self, meshes: Sequence[np.ndarray]) -> np.ndarray:
        """Vectorized value on broadcastable coordinate meshes."""
        if len(meshes) != self.d:
            raise ValueError(f"need {self.d} coordinate meshes")
        total = 0.0
        for exps, coef in self.terms.items():
            term = float(coef)
            for m, e in zip(meshes, exps):
                if e:
                    term = term * m**e
            if np.isscalar(term):
                term = term * np.ones(np.broadcast_shapes(*(np.shape(m) for m in meshes)))
            total = total + term
        if np.isscalar(total):
            total = total * np.ones(np.broadcast_shapes(*(np.shape(m) for m in meshes)))
        return total

    def sup_coefficient(self) -> float:
        """Crude sup bound of |P| on the unit sphere: sum of |coefficients|."""
        return float(sum(abs(c) for c in self.terms.values()))


def monomial_harmonic(j: MultiIndex, strict_odd: bool = False) -> SolidHarmonic:
    """The monomial x_{j_1} ... x_{j_k} for a distinct multi-index.

    Distinctness makes the monomial multilinear in each variable, hence
    harmonic. Even orders are legal polynomials; pass strict_odd=True to
    enforce the odd-order convention used by the transform pipelines.
    """
    if not j.distinct:
        raise ValueError(
            f"multi-index {j.entries} repeats an axis; only distinct-index "
            "monomials are guaranteed harmonic, so membership in the "
            "distinct-index family I is required")
    if strict_odd and j.k % 2 == 0:
        raise ValueError(f"order k={j.k} is even; pipelines require odd k")
    exps = [0] * j.d
    for e in j.entries:
        exps[e - 1] += 1
    return SolidHarmonic(j.d, j.k, {tuple(exps): Fraction(1)})


def is_harmonic(P: SolidHarmonic):
    """(flag, residual): flag is True iff the exact Laplacian vanishes."""
    res = P.laplacian()
    return res.is_zero, res


def evaluate(P: SolidHarmonic, x: Sequence[float]) -> float:
    return P.evaluate(x)


def dim_Hk(d: int, k: int) -> int:
    """Dimension of the degree-k harmonic space on R^d."""
    if d < 1 or k < 1:
        raise ValueError("need d >= 1 and k >= 1")
    total = math.comb(d + k - 1, k)
    lower = math.comb(d + k - 3, k - 2) if k >= 2 and d + k - 3 >= 0 else 0
    return total - lower


def sphere_moment(d: int, k: int) -> Fraction:
    """Exact normalized moment of omega_1^2 ... omega_k^2 over the sphere.

    Equals Gamma(d/2) / (2^k Gamma(k + d/2)) = 1 / (d (d+2) ... (d+2k-2)).
    """
    if not 1 <= k <= d:
        raise ValueError(f"need 1 <= k <= d, got k={k}, d={d}")
    denom = 1
    for i in range(k):
        denom *= d + 2 * i
    return Fraction(1, denom)


def sphere_moment_mc(d: int, k: int, samples: int, seed: int = 0,
                     chunk: int = 1 << 18):
    """Monte Carlo estimate (mean, standard error) of sphere_moment(d, k).

    Directions are normalized standard Gaussian vectors; sampling is
    chunked with a single generator so results are seed-deterministic.
    """
    if not 1 <= k <= d:
        raise ValueError(f"need 1 <= k <= d, got k={k}, d={d}")
    samples = int(samples)
    if samples < 1000:
        raise ValueError("use at least 10^3 samples")
    rng = np.random.default_rng(seed)
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        g = rng.standard_normal((m, d))
        w = g / np.linalg.norm(g, axis=1, keepdims=True)
        vals = np.prod(w[:, :k] ** 2, axis=1)
        total += float(np.sum(vals))
        total_sq += float(np.sum(vals**2))
        done += m
    mean = total / samples
    var = max(total_sq / samples - mean**2, 0.0)
    se = math.sqrt(var / samples)
    return mean, se


def yj_normalization(d: int, k: int) -> float:
    """Constant c with Y_j = c x_j of unit mass spread over dim_Hk directions.

    c = (dim_Hk(d,k) * sphere_moment(d,k))^(-1/2).
    """
    return float(1.0 / math.sqrt(dim_Hk(d, k) * sphere_moment(d, k)))


_TERM_RE = re.compile(r"^x(\d+)(?:\^(\d+))?$")


def parse_harmonic(text: str, d: int) -> SolidHarmonic:
    """Parse a polynomial like ``2 x1^2 x3 - x2^3`` into a SolidHarmonic.

    Grammar: terms joined by + or -, each term an optional rational or
    decimal coefficient followed by factors ``x<axis>`` or ``x<axis>^<power>``
    separated by spaces or '*'. All terms must share one total degree.
    """
    cleaned = text.replace("*", " ").replace("+", " + ").replace("-", " - ")
    tokens = cleaned.split()
    if not tokens:
        raise ValueError("empty polynomial")
    groups: list = []
    sign = 1
    expect_term = True
    for tok in tokens:
        if tok in "+-":
            if expect_term and tok == "-":
                sign = -sign
                continue
            if expect_term:
                continue
            sign = 1 if tok == "+" else -1
            expect_term = True
            groups.append(None)
            continue
        if expect_term:
            groups.append([sign, []])
            sign = 1
            expect_term = False
        groups[-1][1].append(tok)
    terms: dict = {}
    for grp in groups:
        if grp is None:
            continue
        sgn, toks = grp
        coef = Fraction(sgn)
        exps = [0] * d
        saw_factor = False
        for i, tok in enumerate(toks):
            m = _TERM_RE.match(tok)
            if m:
                axis = int(m.group(1))
                if not 1 <= axis <= d:
                    raise ValueError(f"axis x{axis} out of range for d={d}")
                exps[axis - 1] += int(m.group(2) or 1)
                saw_factor = True
            elif i == 0:
                try:
                    coef *= Fraction(tok)
                except ValueError as exc:
                    raise ValueError(f"bad coefficient {tok!r}") from exc
            else:
                raise ValueError(f"unexpected token {tok!r}")
        if not saw_factor and len(toks) == 1 and not _TERM_RE.match(toks[0]):
            raise ValueError("constant terms are not homogeneous of positive degree")
        key = tuple(exps)
        terms[key] = terms.get(key, Fraction(0)) + coef
    degrees = {sum(e) for e in terms}
    if len(degrees) != 1:
        raise ValueError(f"terms mix degrees {sorted(degrees)}; polynomial must be homogeneous")
    k = degrees.pop()
    if k < 1:
        raise ValueError("degree must be at least 1")
    return SolidHarmonic(d, k, terms)


def harmonic_to_text(P: SolidHarmonic) -> str:
    """Render in the parse_harmonic grammar, deterministic term order."""
    if P.is_zero:
        return "0"
    pieces = []
    for exps in sorted(P.terms, reverse=True):
        coef = P.terms[exps]
        factors = []
        for a, e in enumerate(exps):
            if e == 1:
                factors.append(f"x{a + 1}")
            elif e > 1:
                factors.append(f"x{a + 1}^{e}")
        mag = abs(coef)
        body = " ".join(factors)
        if mag != 1:
            body = f"{mag} {body}"
        pieces.append(("- " if coef < 0 else "+ ") + body)
    out = " ".join(pieces)
    return out[2:] if out.startswith("+ ") else "-" + out[2:]
