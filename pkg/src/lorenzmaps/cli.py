"""Command-line front end.

Exit codes: 0 success, 1 runtime failure, 2 bad arguments. Results go to
stdout or the ``--out`` file; diagnostics go to stderr.
"""
from __future__ import annotations

import argparse
import sys
from typing import Sequence

from lorenzmaps import io, maps
from lorenzmaps.density import empirical_density, voltage_time_series
from lorenzmaps.leo import LeoConfig, leo_test
from lorenzmaps.maps import NlCnvParams, ParameterError, PlCnvParams
from lorenzmaps.sweep import beta_triangle_sweep, cnv_sweep, diff_map
from lorenzmaps.transitivity import ConfigError, TransitivityConfig, num_trans_test


class UsageError(Exception):
    pass


def _add_family(p: argparse.ArgumentParser, families=("beta", "plcnv", "nlcnv")) -> None:
    g = p.add_argument_group("map parameters")
    g.add_argument("--family", choices=families, required=True)
    g.add_argument("--beta", type=float, help="beta-transformation slope")
    g.add_argument("--alpha", type=float, help="beta-transformation offset")
    g.add_argument("--m0", type=float, default=0.864)
    g.add_argument("--m1", type=float, default=0.65)
    g.add_argument("--mu", type=float, default=1.0)
    g.add_argument("--a", type=float, default=None, help="CNV shape parameter (default 0.2)")
    g.add_argument("--d", type=float, default=None, help="CNV discontinuity (default 0.4)")


def _add_bc(p: argparse.ArgumentParser, required: bool = False) -> None:
    p.add_argument("--b", type=float, required=required, help="invariant interval start")
    p.add_argument("--c", type=float, required=required, help="invariant interval end")


def _add_trans_knobs(p: argparse.ArgumentParser) -> None:
    p.add_argument("--iters", type=int, default=50_000)
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--transient", type=int, default=200)
    p.add_argument("--bins", type=int, default=1000)


def _add_leo_knobs(p: argparse.ArgumentParser) -> None:
    p.add_argument("--subdivisions", type=int, default=100)
    p.add_argument("--max-iters", type=int, default=500)


def _cnv_template(args) -> maps.CnvParams:
    a = 0.2 if args.a is None else args.a
    d = 0.4 if args.d is None else args.d
    if args.family == "plcnv":
        return PlCnvParams(args.m0, args.m1, a, d)
    return NlCnvParams(args.mu, a, d)


def _map_from_args(args) -> maps.MapSpec:
    if args.family == "beta":
        if args.beta is None or args.alpha is None:
            raise UsageError("--family beta needs --beta and --alpha")
        return maps.beta_map(args.beta, args.alpha)
    if getattr(args, "b", None) is None or getattr(args, "c", None) is None:
        raise UsageError(f"--family {args.family} needs --b and --c")
    template = _cnv_template(args)
    if not maps.check_invariant_conditions(template, args.b, args.c):
        raise UsageError(f"[{args.b}, {args.c}) is not an invariant interval for this model")
    return maps.cnv_map_from_bc(template, args.b, args.c)


def _trans_cfg(args) -> TransitivityConfig:
    return TransitivityConfig(args.iters, args.trials, args.transient, args.bins, args.seed)


def _leo_cfg(args) -> LeoConfig:
    return LeoConfig(subdivisions=args.subdivisions, max_image_iterations=args.max_iters)


def _write_sweep(result, args) -> None:
    if args.format == "ppm":
        io.write_sweep_ppm(result, args.out)
    else:
        io.write_sweep_csv(result, args.out)


def cmd_test_trans(args) -> int:
    print("true" if num_trans_test(_map_from_args(args), cfg=_trans_cfg(args)) else "false")
    return 0


def cmd_test_leo(args) -> int:
    print("true" if leo_test(_map_from_args(args), cfg=_leo_cfg(args)) else "false")
    return 0


def cmd_sweep(args) -> int:
    kwargs = dict(
        test_kind=args.test, trans_cfg=_trans_cfg(args), leo_cfg=_leo_cfg(args),
        master_seed=args.seed, workers=args.workers,
    )
    if args.plane == "triangle":
        if args.family != "beta":
            raise UsageError("--plane triangle needs --family beta")
        result = beta_triangle_sweep(args.mesh, **kwargs)
    else:
        if args.family == "beta":
            raise UsageError("--plane bc needs --family plcnv or nlcnv")
        result = cnv_sweep(_cnv_template(args), args.mesh, **kwargs)
    _write_sweep(result, args)
    print(f"swept {args.mesh}x{args.mesh} cells in {result.total_seconds:.2f} s", file=sys.stderr)
    return 0


def cmd_density(args) -> int:
    est = empirical_density(
        _map_from_args(args), n_iterations=args.iters, transient=args.transient,
        bins=args.bins, seed=args.seed,
    )
    io.write_density_csv(est, args.out)
    return 0


def cmd_timeseries(args) -> int:
    spec = _map_from_args(args)
    x0 = spec.domain_lo + 0.5 * (spec.domain_hi - spec.domain_lo) if args.x0 is None else args.x0
    io.write_series_csv(voltage_time_series(spec, x0, args.n, args.transient), args.out)
    return 0


def cmd_diff(args) -> int:
    result = diff_map(io.read_sweep_csv(args.in1), io.read_sweep_csv(args.in2))
    _write_sweep(result, args)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lorenzmaps", description="Numerical transitivity and LEO tests for Lorenz maps."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("test-trans", help="run the numerical transitivity test")
    _add_family(p)
    _add_bc(p)
    _add_trans_knobs(p)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_test_trans)

    p = sub.add_parser("test-leo", help="run the numerical LEO test")
    _add_family(p)
    _add_bc(p)
    _add_leo_knobs(p)
    p.add_argument("--seed", type=int, default=0, help="accepted for symmetry; the test is deterministic")
    p.set_defaults(func=cmd_test_leo)

    p = sub.add_parser("sweep", help="classify a parameter plane")
    _add_family(p)
    p.add_argument("--plane", choices=("triangle", "bc"), required=True)
    p.add_argument("--mesh", type=int, required=True)
    p.add_argument("--test", choices=("trans", "leo", "both"), default="trans")
    _add_trans_knobs(p)
    _add_leo_knobs(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "ppm"), default="csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("density", help="histogram of a long orbit")
    _add_family(p)
    _add_bc(p)
    p.add_argument("--iters", type=int, default=1_000_000)
    p.add_argument("--transient", type=int, default=1000)
    p.add_argument("--bins", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("timeseries", help="voltage time series of a CNV map")
    _add_family(p, families=("plcnv", "nlcnv"))
    _add_bc(p, required=True)
    p.add_argument("--x0", type=float, default=None, help="start point (default: interval midpoint)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--transient", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_timeseries)

    p = sub.add_parser("diff", help="difference map of two sweep CSVs")
    p.add_argument("--in1", required=True, help="sweep with transitivity outcomes")
    p.add_argument("--in2", required=True, help="sweep with LEO outcomes")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "ppm"), default="csv")
    p.set_defaults(func=cmd_diff)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, ParameterError, ConfigError) as exc:
        print(f"lorenzmaps {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - every other failure is a runtime error
        print(f"lorenzmaps {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
