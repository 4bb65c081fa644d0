"""``conebeam-svd`` command line.

Exit codes: 0 success, 1 a verification check failed, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings

import numpy as np

from .ball_basis import BallCoefficients, synthesize
from .errors import DomainError
from .funk_radon import MIN_ORDER, eigenvalue_table
from .quadrature import sphere_rule_s2
from .serialization import (
    EIGENVALUE_COLUMNS,
    SINGULAR_VALUE_COLUMNS,
    SINOGRAM_COLUMNS,
    rows_to_csv,
    rows_to_json,
)
from .svd_cone import (
    constant_upper_bound,
    d3_upper_bound,
    forward_odd_on_grid,
    lambda_,
    lower_bound_certificate,
    reconstruct,
    upper_bound,
)
from .verify import SUITES, run_suite
from .xray import cone_beam_batch

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(columns, rows, fmt: str, out) -> None:
    rows = list(rows)
    out.write(rows_to_csv(columns, rows) if fmt == "csv" else rows_to_json(columns, rows) + "\n")


def cmd_eigenvalues(args, out) -> int:
    if args.d < 3:
        raise UsageError(f"dimension -d must be >= 3 (got {args.d})")
    if args.j < MIN_ORDER:
        raise UsageError(f"order -j must be >= {MIN_ORDER} (got {args.j})")
    if args.n < 0:
        raise UsageError(f"max degree -n must be >= 0 (got {args.n})")
    table = eigenvalue_table(args.j, args.d, range(args.n + 1))
    _emit(EIGENVALUE_COLUMNS, table.rows(), args.format, out)
    return EXIT_OK


def cmd_singular_values(args, out) -> int:
    d = args.d
    if d < 3 or d % 2 == 0:
        raise UsageError(f"singular values need d odd and >= 3 (got d={d})")
    if args.m < 0:
        raise UsageError(f"max degree -m must be >= 0 (got {args.m})")
    rows = []
    for m in range(args.m + 1):
        for l in range(m % 2, m + 1, 2):
            if args.l is not None and l != args.l:
                continue
            rows.append((
                m, l, d,
                lambda_(m, l, d),
                lower_bound_certificate(m, l, d),
                upper_bound(m, l, d),
                constant_upper_bound(d),
                d3_upper_bound(m) if d == 3 else None,
            ))
    _emit(SINGULAR_VALUE_COLUMNS, rows, args.format, out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    results = run_suite(args.suite, seed=args.seed, profile_name=args.profile)
    passed = all(r.passed for r in results)
    report = {
        "suite": args.suite,
        "seed": args.seed,
        "profile": args.profile,
        "passed": passed,
        "checks": [r.as_dict() for r in results],
    }
    out.write(json.dumps(report, indent=2) + "\n")
    return EXIT_OK if passed else EXIT_FAIL


def _load_coefficients(path: str) -> BallCoefficients:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return BallCoefficients.from_json(text)
    except (ValueError, DomainError) as exc:
        raise UsageError(f"{path}: {exc}") from exc


def cmd_roundtrip(args, out) -> int:
    coeffs = _load_coefficients(args.file)
    M = args.M if args.M is not None else max((i.m for i in coeffs.values), default=0)
    if any(i.m > M for i in coeffs.values):
        warnings.warn(f"input has degrees above M={M}; those terms cannot be recovered", RuntimeWarning, stacklevel=1)
    g = forward_odd_on_grid(coeffs, args.grid)
    recovered = reconstruct(g, M, args.grid)
    report = {
        "M": M,
        "grid": args.grid,
        "max_abs_error": recovered.max_abs_difference(coeffs),
        "recovered": recovered.to_dict(),
    }
    out.write(json.dumps(report, indent=2) + "\n")
    return EXIT_OK


def cmd_sinogram(args, out) -> int:
    coeffs = _load_coefficients(args.file)
    rule = sphere_rule_s2(args.grid)
    t, phi = rule.meta["t"], rule.meta["phi"]
    # node order is t-major, so node p has t[p // nphi], phi[p % nphi]
    t_of = np.repeat(t, len(phi))
    phi_of = np.tile(phi, len(t))
    n = len(rule)
    a = np.repeat(rule.nodes, n, axis=0)
    omega = np.tile(rule.nodes, (n, 1))
    npoints = max((i.m for i in coeffs.values), default=0) // 2 + 1
    if coeffs.values:
        values = cone_beam_batch(lambda x: synthesize(coeffs, x), a, omega, npoints)
    else:
        values = np.zeros(n * n, dtype=complex)
    ia, iw = np.repeat(np.arange(n), n), np.tile(np.arange(n), n)
    rows = (
        (phi_of[p], t_of[p], phi_of[q], t_of[q], complex(v).real, complex(v).imag)
        for p, q, v in zip(ia, iw, values)
    )
    _emit(SINOGRAM_COLUMNS, rows, "csv", out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="conebeam-svd", description="Funk-Radon spectra and the cone-beam SVD on the unit ball.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eigenvalues", help="tabulate S^(j)_d eigenvalues")
    p.add_argument("-j", type=int, required=True, help="order j >= -2")
    p.add_argument("-d", type=int, required=True, help="dimension d >= 3")
    p.add_argument("-n", type=int, required=True, help="largest degree")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_eigenvalues)

    p = sub.add_parser("singular-values", help="tabulate lambda_{m,l,d} with bounds")
    p.add_argument("-m", type=int, default=0, help="largest m")
    p.add_argument("-l", type=int, default=None, help="only this l")
    p.add_argument("-d", type=int, default=3, help="odd dimension")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_singular_values)

    p = sub.add_parser("verify", help="run an invariant suite")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--profile", choices=("strict", "default", "loose"), default="default")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("roundtrip", help="forward project ball coefficients and recover them")
    p.add_argument("file", help="BallCoefficients JSON")
    p.add_argument("-M", type=int, default=None, help="largest degree to recover")
    p.add_argument("--grid", type=int, default=16, help="sphere band limit of the data grid")
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("sinogram", help="cone-beam samples of ball coefficients as CSV")
    p.add_argument("file", help="BallCoefficients JSON")
    p.add_argument("--grid", type=int, default=4, help="sphere band limit for sources and directions")
    p.set_defaults(func=cmd_sinogram)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except (UsageError, DomainError) as exc:
        print(f"conebeam-svd: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
