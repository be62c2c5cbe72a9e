"""Command-line front end.

Subcommands: rdp, compose, convert, calibrate, sweep. Exit codes: 0 success,
2 invalid arguments (or an unreachable calibration target), 3 numerical
non-convergence.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Optional, Sequence

from .accountant import RdpCurve, SgmParams, rdp_curve
from .budget import DEFAULT_ORDERS, DpTarget, calibrate_sigma, compose, to_dp
from .errors import NonConvergence, ToleranceNotMet
from .sweep import SweepSpec, format_number, run_sweep, write_csv

log = logging.getLogger("sgm_rdp")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3


def parse_floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def parse_orders(text: str) -> list[float]:
    if text.strip().lower() == "default":
        return list(DEFAULT_ORDERS)
    orders = parse_floats(text)
    if not orders:
        raise argparse.ArgumentTypeError("no orders given")
    return orders


def parse_curve(text: str) -> list[tuple[float, float]]:
    """``"2:0.375,4:0.5"`` -> [(2.0, 0.375), (4.0, 0.5)]."""
    pairs = []
    for item in text.split(","):
        if not item.strip():
            continue
        try:
            a, e = item.split(":")
            pairs.append((float(a), float(e)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad curve point {item!r}; use ORDER:EPS")
    if not pairs:
        raise argparse.ArgumentTypeError("empty curve")
    return pairs


def positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def _curve_from_args(args) -> RdpCurve:
    if args.curve is not None:
        return RdpCurve.from_pairs(args.curve)
    if args.q is None or args.sigma is None:
        raise ValueError("give either --curve or both --q and --sigma")
    return rdp_curve(SgmParams(args.q, args.sigma), args.orders)


def _curve_payload(curve: RdpCurve, **extra) -> dict:
    return dict(extra, steps=curve.steps,
                points=[{"alpha": a, "eps": e} for a, e in curve.points])


def _emit_curve(curve: RdpCurve, args, out, **extra) -> None:
    if args.json:
        json.dump(_curve_payload(curve, **extra), out)
        out.write("\n")
        return
    out.write("alpha,eps\n")
    for a, e in curve.points:
        out.write(f"{format_number(a)},{format_number(e)}\n")


def cmd_rdp(args, out) -> int:
    curve = rdp_curve(SgmParams(args.q, args.sigma), args.orders)
    if args.steps > 1:
        curve = compose(curve, args.steps)
    _emit_curve(curve, args, out, q=args.q, sigma=args.sigma)
    return EXIT_OK


def cmd_compose(args, out) -> int:
    _emit_curve(compose(_curve_from_args(args), args.steps), args, out)
    return EXIT_OK


def _emit_guarantee(g, args, out, **extra) -> None:
    fields = dict(extra, eps=g.eps, delta=g.delta, best_order=g.best_order)
    if args.json:
        json.dump(fields, out)
        out.write("\n")
    else:
        for k, v in fields.items():
            out.write(f"{k}={format_number(v)}\n")


def cmd_convert(args, out) -> int:
    curve = _curve_from_args(args)
    if args.steps > 1:
        curve = compose(curve, args.steps)
    _emit_guarantee(to_dp(curve, args.delta), args, out)
    return EXIT_OK


def cmd_calibrate(args, out) -> int:
    target = DpTarget(args.eps, args.delta)
    sigma = calibrate_sigma(args.q, args.steps, target, args.orders)
    achieved = to_dp(compose(rdp_curve(SgmParams(args.q, sigma), args.orders), args.steps),
                     args.delta)
    log.info("calibrated sigma=%s for q=%s over %d steps", sigma, args.q, args.steps)
    _emit_guarantee(achieved, args, out, sigma=sigma)
    return EXIT_OK


def cmd_sweep(args, out) -> int:
    spec = SweepSpec(args.q, args.sigma, args.orders)
    rows = list(run_sweep(spec))
    if args.output:
        with open(args.output, "w", newline="") as fh:
            write_csv(rows, fh)
        log.info("wrote %d rows to %s", len(rows), args.output)
    elif args.json:
        json.dump([r.__dict__ for r in rows], out)
        out.write("\n")
    else:
        write_csv(rows, out)
    if args.plot:
        from .plotting import plot_sweep

        plot_sweep(rows, args.plot)
        log.info("wrote figure to %s", args.plot)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable JSON output")
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS,
                        help="suppress informational messages")

    parser = argparse.ArgumentParser(
        prog="sgm-rdp", parents=[common],
        description="Renyi DP accounting for the Sampled Gaussian Mechanism.")
    sub = parser.add_subparsers(dest="command", required=True)

    def orders_arg(p):
        p.add_argument("--orders", type=parse_orders, default=list(DEFAULT_ORDERS),
                       help="comma-separated orders, or 'default'")

    p = sub.add_parser("rdp", parents=[common], help="RDP curve of one SGM step")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--sigma", type=float, required=True)
    orders_arg(p)
    p.add_argument("--steps", type=positive_int, default=1)
    p.set_defaults(func=cmd_rdp)

    for name, func, help_ in (("compose", cmd_compose, "compose a curve over steps"),
                              ("convert", cmd_convert, "convert a curve to (eps, delta)-DP")):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--curve", type=parse_curve, help="ORDER:EPS pairs, comma-separated")
        p.add_argument("--q", type=float)
        p.add_argument("--sigma", type=float)
        orders_arg(p)
        if name == "compose":
            p.add_argument("--steps", type=positive_int, required=True)
        else:
            p.add_argument("--steps", type=positive_int, default=1)
            p.add_argument("--delta", type=float, required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("calibrate", parents=[common], help="smallest sigma meeting a target")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--steps", type=positive_int, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    orders_arg(p)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("sweep", parents=[common], help="exact vs closed-form bound over a grid")
    p.add_argument("--q", type=parse_floats, required=True)
    p.add_argument("--sigma", type=parse_floats, required=True)
    orders_arg(p)
    p.add_argument("--output", help="CSV path (default: standard output)")
    p.add_argument("--plot", help="also render a PNG/PDF figure to this path")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    args.json = getattr(args, "json", False)
    args.quiet = getattr(args, "quiet", False)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args, out)
    except (NonConvergence, ToleranceNotMet) as exc:
        print(f"sgm-rdp: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OverflowError) as exc:
        print(f"sgm-rdp: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run() -> None:
    sys.exit(main())
