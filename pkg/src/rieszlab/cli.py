"""Command-line interface.

Subcommands: moments, constants, transform, check, sweep. Exit codes:
0 success, 1 tolerance failure in a check, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

import numpy as np

from . import averaging, experiments, factorization, grid, harmonics, operators
from . import rotations as rot
from .harmonics import MultiIndex, monomial_harmonic, parse_harmonic

CHECK_DEFAULT_TOL = {
    "factorization": 5e-2,
    "m1t": 5e-2,
    "averaging": 0.1,
    "rotations": 8e-2,
}


def _cmd_moments(args) -> int:
    exact = harmonics.sphere_moment(args.d, args.k)
    print(f"sphere_moment({args.d},{args.k}) = {exact} = {float(exact):.12g}")
    print(f"dim_Hk({args.d},{args.k}) = {harmonics.dim_Hk(args.d, args.k)}")
    print(f"yj_normalization({args.d},{args.k}) = "
          f"{harmonics.yj_normalization(args.d, args.k):.12g}")
    if args.mc_samples:
        est, se = harmonics.sphere_moment_mc(args.d, args.k, args.mc_samples,
                                             seed=args.seed)
        z = abs(est - float(exact)) / se if se > 0 else 0.0
        print(f"monte_carlo = {est:.12g} +- {se:.3g}  (z = {z:.2f})")
    return 0


def _cmd_constants(args) -> int:
    k = args.k
    print("d,a_tilde,c_dk,rotations_constant,constant_over_sqrt_d_k")
    for d in range(k, args.d_max + 1):
        at = averaging.a_tilde(d, k)
        c = averaging.c_dk(d, k)
        g = rot.rotations_constant(d, k)
        print(f"{d},{float(at):.12g},{float(c):.12g},{g:.12g},"
              f"{g / d ** (k / 2):.12g}")
    return 0


def _cmd_transform(args) -> int:
    f = grid.load_field(args.input)
    P = parse_harmonic(args.poly, f.spec.d)
    if P.k % 2 == 0:
        print(f"error: polynomial order k={P.k} is even; transforms require odd k",
              file=sys.stderr)
        return 2
    ok, res = harmonics.is_harmonic(P)
    if not ok:
        print(f"error: polynomial is not harmonic (Laplacian residual {res.terms})",
              file=sys.stderr)
        return 2
    if args.maximal:
        ts = operators.default_truncation_grid(f.spec, args.t_grid)
        out = operators.maximal_riesz(operators.make_kernel(P), f, ts)
    elif args.t is not None:
        out = operators.truncated_riesz_direct(operators.make_kernel(P), f, args.t)
    else:
        out = operators.riesz_apply(P, f)
    grid.save_field(out, args.output)
    print(f"wrote {args.output}")
    return 0


def _check_field(spec, mean_zero: bool):
    if mean_zero:
        return grid.test_function(spec, "gaussian_times_poly", sigma=0.8)
    return grid.test_function(spec, "gaussian", sigma=0.8)


def _cmd_check(args) -> int:
    spec = grid.make_grid(args.d, args.n, args.l)
    t = args.t if args.t is not None else max(spec.l / 8.0, 2 * spec.h)
    tol = args.tol if args.tol is not None else CHECK_DEFAULT_TOL[args.which]
    k = args.k

    if args.which == "factorization":
        f = _check_field(spec, mean_zero=False)
        P = monomial_harmonic(MultiIndex(tuple(range(1, k + 1)), args.d))
        value = factorization.factorization_residual(P, f, t, spec)
        prof = factorization.mt_profile(args.d, k, t, spec)
        cv = factorization.max_resolved_cv(prof)
        print(f"factorization residual = {value:.6g}  (radiality cv = {cv:.6g})")
    elif args.which == "m1t":
        if k != 1:
            print("error: the m1t check is a k=1 identity", file=sys.stderr)
            return 2
        f = _check_field(spec, mean_zero=True)
        value = factorization.m1t_identity_residual(f, t)
        print(f"m1t identity residual = {value:.6g}")
    elif args.which == "averaging":
        f = _check_field(spec, mean_zero=True)
        rep = averaging.averaging_residual(f, t, args.d, k,
                                           n_rotations=args.samples, seed=args.seed)
        value = rep.residual
        print(f"averaging residual = {value:.6g} +- {rep.stderr:.3g} "
              f"({rep.rotations_used} rotations)")
    else:  # rotations
        f = _check_field(spec, mean_zero=False)
        j = MultiIndex(tuple(range(1, k + 1)), args.d)
        est, se = rot.mor_estimate(j, f, t, n_directions=args.samples,
                                   seed=args.seed)
        direct = operators.truncated_riesz_direct(
            operators.make_kernel(monomial_harmonic(j)), f, t)
        dnorm = np.linalg.norm(direct.values)
        value = float(np.linalg.norm(est.values - direct.values) / dnorm)
        se_rel = 3.0 * float(np.linalg.norm(se.values) / dnorm)
        print(f"rotations deviation = {value:.6g}  (3 x stderr = {se_rel:.6g})")
        tol = max(tol, se_rel)

    if value <= tol:
        print(f"PASS (tolerance {tol:.6g})")
        return 0
    print(f"FAIL: {value:.6g} > tolerance {tol:.6g}")
    return 1


def _cmd_sweep(args) -> int:
    config = experiments.ExperimentConfig.from_json(args.config)
    report = experiments.dimension_sweep(config)
    experiments.write_report_csv(report, args.out)
    for d in config.d_range:
        print(f"d={d}: max_ratio = {report.max_ratio(d):.6g}")
    print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="riesz-lab",
                                 description="Numerics for higher-order Riesz transforms")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("moments", help="exact and Monte Carlo sphere moments")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mc-samples", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_moments)

    p = sub.add_parser("constants", help="a_tilde, C(d,k), rotations constant table")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--d-max", type=int, required=True)
    p.set_defaults(func=_cmd_constants)

    p = sub.add_parser("transform", help="apply a Riesz-type transform to a JSON field")
    p.add_argument("--input", required=True)
    p.add_argument("--poly", required=True,
                   help='harmonic polynomial, e.g. "x1 x2 x3" or "2 x1^2 x3 - x2^3"')
    p.add_argument("--t", type=float, default=None, help="truncation radius")
    p.add_argument("--maximal", action="store_true",
                   help="maximal transform over a truncation grid")
    p.add_argument("--t-grid", type=int, default=16,
                   help="number of log-spaced truncation radii")
    p.add_argument("--output", required=True)
    p.set_defaults(func=_cmd_transform)

    p = sub.add_parser("check", help="run a named identity check against a tolerance")
    p.add_argument("which", choices=("factorization", "m1t", "averaging", "rotations"))
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--l", type=float, required=True)
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=64)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("sweep", help="dimension sweep to CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_sweep)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
