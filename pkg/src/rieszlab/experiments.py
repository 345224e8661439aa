"""Dimension-trend studies: maximal-to-full ratio statistics over a corpus.

The empirical quotient ||R_P^* f||_p / ||R_P f||_p lower-bounds the maximal
operator's comparison constant; the sweep records it across d, p, and a
fixed corpus together with the exact constants of the averaging machinery,
as evidence for dimension-free behavior (evidence, not proof).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .averaging import a_tilde, c_dk
from .grid import GridSpec, ScalarField, lp_norm, make_grid, test_function
from .harmonics import MultiIndex, SolidHarmonic, monomial_harmonic
from .operators import (TruncationGrid, default_truncation_grid, make_kernel,
                        maximal_riesz, riesz_apply)
from .rotations import rotations_constant

__all__ = [
    "ExperimentConfig", "ReportRow", "EstimateReport", "default_config",
    "build_corpus", "single_ratio", "vector_ratio", "dimension_sweep",
    "write_report_csv",
]

DENOMINATOR_FLOOR = 1e-8

CORPUS_NAMES = ("gaussian", "shifted_gaussian", "gaussian_times_poly",
                "band_limited_1", "band_limited_2")


@dataclass(frozen=True)
class ExperimentConfig:
    """Sweep plan: odd order k, dimensions, exponents, per-d grids, corpus."""

    k: int
    d_range: tuple
    p_list: tuple
    grids: dict
    t_count: int = 16
    corpus: tuple = CORPUS_NAMES
    seed: int = 0

    def __post_init__(self):
        if self.k < 1 or self.k % 2 == 0:
            raise ValueError(f"k must be odd and >= 1, got {self.k}")
        d_range = tuple(int(d) for d in self.d_range)
        if not d_range or any(d < self.k for d in d_range):
            raise ValueError("every dimension in d_range must be >= k")
        p_list = tuple(float(p) for p in self.p_list)
        if not p_list or any(p <= 1.0 for p in p_list):
            raise ValueError("every exponent must satisfy p > 1")
        grids = {int(d): (int(n), float(l)) for d, (n, l) in dict(self.grids).items()}
        for d in d_range:
            if d not in grids:
                raise ValueError(f"no grid parameters for d={d}")
        corpus = tuple(self.corpus)
        unknown = set(corpus) - set(CORPUS_NAMES)
        if unknown:
            raise ValueError(f"unknown corpus entries {sorted(unknown)}")
        if self.t_count < 1:
            raise ValueError("t_count must be positive")
        object.__setattr__(self, "d_range", d_range)
        object.__setattr__(self, "p_list", p_list)
        object.__setattr__(self, "grids", grids)
        object.__setattr__(self, "corpus", corpus)

    def grid_for(self, d: int) -> GridSpec:
        n, l = self.grids[d]
        return make_grid(d, n, l)

    def to_json(self, path) -> None:
        payload = {
            "k": self.k,
            "d_range": list(self.d_range),
            "p_list": list(self.p_list),
            "grids": {str(d): {"n": n, "l": l} for d, (n, l) in sorted(self.grids.items())},
            "t_count": self.t_count,
            "corpus": list(self.corpus),
            "seed": self.seed,
        }
        Path(path).write_text(json.dumps(payload, indent=2))

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        raw = json.loads(Path(path).read_text())
        grids = {int(d): (g["n"], g["l"]) for d, g in raw["grids"].items()}
        return cls(k=raw["k"], d_range=tuple(raw["d_range"]),
                   p_list=tuple(raw["p_list"]), grids=grids,
                   t_count=raw.get("t_count", 16),
                   corpus=tuple(raw.get("corpus", CORPUS_NAMES)),
                   seed=raw.get("seed", 0))


def default_config(k: int = 1) -> ExperimentConfig:
    d_range = tuple(range(k, k + 3))
    return ExperimentConfig(
        k=k,
        d_range=d_range,
        p_list=(1.5, 2.0, 3.0),
        grids={d: (48, 8.0) for d in d_range},
        t_count=16,
        seed=20240817,
    )


def build_corpus(spec: GridSpec, names: Sequence[str], seed: int):
    """(name, field) pairs; geometry-scaled parameters, deterministic."""
    out = []
    for name in names:
        if name == "gaussian":
            f = test_function(spec, "gaussian", sigma=0.8)
        elif name == "shifted_gaussian":
            center = [0.8] + [0.0] * (spec.d - 1)
            f = test_function(spec, "shifted_gaussian", center=center, sigma=0.8)
        elif name == "gaussian_times_poly":
            f = test_function(spec, "gaussian_times_poly", sigma=0.8)
        elif name.startswith("band_limited_"):
            offset = int(name.rsplit("_", 1)[1])
            f = test_function(spec, "random_band_limited", seed=seed + offset)
        else:
            raise ValueError(f"unknown corpus entry {name!r}")
        out.append((name, f))
    return out


def single_ratio(P: SolidHarmonic, f: ScalarField, p: float,
                 ts: TruncationGrid) -> float:
    """lp ratio of the maximal truncated transform to the full transform."""
    den = lp_norm(riesz_apply(P, f), p)
    if den < DENOMINATOR_FLOOR:
        raise ValueError(f"||R_P f||_p = {den:.3g} below floor; ratio undefined")
    num = lp_norm(maximal_riesz(make_kernel(P), f, ts), p)
    return num / den


def vector_ratio(Ps: Sequence[SolidHarmonic], fs: Sequence[ScalarField],
                 p: float, ts: TruncationGrid) -> float:
    """lp ratio of the square functions over a family of (P, f) pairs."""
    if len(Ps) != len(fs) or not Ps:
        raise ValueError("need equally many polynomials and fields, at least one")
    spec = fs[0].spec
    if any(g.spec != spec for g in fs):
        raise ValueError("all fields must share one grid")
    num_sq = np.zeros(spec.shape)
    den_sq = np.zeros(spec.shape)
    for P, f in zip(Ps, fs):
        num_sq += maximal_riesz(make_kernel(P), f, ts).values ** 2
        den_sq += riesz_apply(P, f).values ** 2
    den = lp_norm(ScalarField(spec, np.sqrt(den_sq)), p)
    if den < DENOMINATOR_FLOOR:
        raise ValueError(f"denominator square function norm {den:.3g} below floor")
    return lp_norm(ScalarField(spec, np.sqrt(num_sq)), p) / den


@dataclass(frozen=True)
class ReportRow:
    d: int
    k: int
    p: float
    quantity: str
    value: float
    stderr: float
    grid: str
    seed: int


@dataclass(frozen=True)
class EstimateReport:
    rows: tuple

    def max_ratio(self, d: int) -> float:
        vals = [r.value for r in self.rows
                if r.d == d and r.quantity.startswith("single_ratio")
                and math.isfinite(r.value)]
        return max(vals) if vals else math.nan


def dimension_sweep(config: ExperimentConfig) -> EstimateReport:
    """Run the full sweep; per-cell failures become NaN rows, not aborts."""
    rows = []
    for d in config.d_range:
        spec = config.grid_for(d)
        gdesc = f"n={spec.n};l={spec.l:g}"
        ts = default_truncation_grid(spec, config.t_count)
        P = monomial_harmonic(MultiIndex(tuple(range(1, config.k + 1)), d))
        corpus = build_corpus(spec, config.corpus, config.seed)
        for name, f in corpus:
            for p in config.p_list:
                try:
                    val = single_ratio(P, f, p, ts)
                except (ValueError, FloatingPointError):
                    val = math.nan
                rows.append(ReportRow(d, config.k, p, f"single_ratio[{name}]",
                                      val, math.nan, gdesc, config.seed))
        rows.append(ReportRow(d, config.k, math.nan, "a_tilde_abs",
                              abs(float(a_tilde(d, config.k))), math.nan, gdesc,
                              config.seed))
        rows.append(ReportRow(d, config.k, math.nan, "c_dk_abs",
                              abs(float(c_dk(d, config.k))), math.nan, gdesc,
                              config.seed))
        rows.append(ReportRow(d, config.k, math.nan, "rotations_constant_ratio",
                              rotations_constant(d, config.k) / d ** (config.k / 2),
                              math.nan, gdesc, config.seed))
    report_rows = list(rows)
    report = EstimateReport(tuple(rows))
    for d in config.d_range:
        spec = config.grid_for(d)
        report_rows.append(ReportRow(d, config.k, math.nan, "max_ratio",
                                     report.max_ratio(d), math.nan,
                                     f"n={spec.n};l={spec.l:g}", config.seed))
    return EstimateReport(tuple(report_rows))


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_report_csv(report: EstimateReport, path) -> None:
    """Fixed schema, 17 significant digits, deterministic bytes."""
    lines = ["d,k,p,quantity,value,stderr,grid,seed"]
    for r in report.rows:
        lines.append(",".join([str(r.d), str(r.k), _fmt(r.p), r.quantity,
                               _fmt(r.value), _fmt(r.stderr), r.grid, str(r.seed)]))
    Path(path).write_text("\n".join(lines) + "\n")
