"""Command-line entry point.

Each subcommand prints ``key: value`` lines to stdout.  Exit status is 0 on
success, 1 for bad arguments and 2 when a computation fails.
"""

from __future__ import annotations

import argparse
import math
import random
import sys
from pathlib import Path

from .character_variety import alexander_roots_unit_circle, deformation_seeds
from .core_algebra import PARABOLIC_BAND, translation_number_oracle
from .locus import emit_diagram, trace_arcs
from .orderability import load_exceptional, parse_slope
from .presentation import TwistedTorusKnot, alexander
from .reports import (
    OptionError,
    PipelineOptions,
    check_knot_range,
    observations_report,
    run_pipeline,
)
from .representation import RELATOR_TOL, peripheral_images

ORACLE_TOL = 1e-3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _emit(lines):
    for line in lines:
        print(line)


def _knot(args) -> TwistedTorusKnot:
    try:
        check_knot_range(args.k, args.allow_large)
        return TwistedTorusKnot(args.k, args.m)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _locus_knot(args) -> TwistedTorusKnot:
    knot = _knot(args)
    if knot.m != 1:
        raise UsageError("locus commands need --m 1")
    return knot


def _options(args, knot) -> PipelineOptions:
    try:
        exceptional = load_exceptional(args.exceptional, knot) if args.exceptional else None
        slopes = [parse_slope(s) for s in args.slope]
    except (ValueError, OSError) as exc:
        raise UsageError(str(exc)) from exc
    if args.seed_root is not None and args.seed_root < 0:
        raise UsageError("--seed-root must be non-negative")
    return PipelineOptions(
        samples=args.samples,
        parabolic_band=args.parabolic_band,
        relator_tol=args.relator_tol,
        seed_root=args.seed_root,
        slopes=slopes,
        exceptional=exceptional,
        allow_large=args.allow_large,
    )


def cmd_alexander(args):
    knot = _knot(args)
    delta = alexander(knot)
    _emit([
        f"knot: {knot}",
        f"alexander: {delta}",
        f"lowest degree: {delta.low}",
        f"coefficients: {' '.join(map(str, delta.as_list()))}",
    ])


def cmd_roots(args):
    knot = _knot(args)
    roots = alexander_roots_unit_circle(knot)
    _emit([f"knot: {knot}", f"roots in (0, pi): {len(roots)}"])
    for i, root in enumerate(roots):
        print(f"root {i}: theta={root.theta:.15g} x={root.theta / (2 * math.pi):.15g} multiplicity={root.multiplicity}")


def cmd_seeds(args):
    knot = _locus_knot(args)
    seeds = deformation_seeds(knot)
    print(f"knot: {knot}")
    for i, s in enumerate(seeds):
        t, sv, r = s.seed_traces
        print(
            f"seed {i}: theta={s.root.theta:.15g} {s.param_name}={s.param:.15g} "
            f"traces=({t:.12g}, {sv:.12g}, {r:.12g}) side={s.side} direction={s.direction:+d} gauge={s.gauge}"
        )


def _write_artifacts(result, args) -> list[str]:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    formats = ("csv", "svg") if args.emit == "both" else (args.emit,)
    written = []
    for fmt in formats:
        path = out / f"locus_k{result.knot.k}_m{result.knot.m}.{fmt}"
        path.write_bytes(emit_diagram(result.diagram, fmt))
        written.append(str(path))
    return written


def _summary(result) -> list[str]:
    d = result.diagram
    lines = [
        f"knot: {result.knot}",
        f"unit-circle roots: {len(result.roots)}",
        f"arcs: {len(d.arcs)}",
        f"parabolic endpoints: {' '.join(f'({x:.6g}, {y:.9g})' for x, y in d.parabolic_endpoints())}",
        f"max relator residual: {result.max_relator_residual:.3g}",
        f"max peripheral commutator: {result.max_commutator:.3g}",
        f"orderable slopes: {result.interval}",
    ]
    for v in result.verdicts:
        tail = f" witness=({v.witness.point[0]:.9g}, {v.witness.point[1]:.9g})" if v.witness else ""
        extra = f" assumptions={'; '.join(v.assumptions)}" if v.assumptions else ""
        lines.append(f"slope {v.slope}: {v.outcome}{tail}{extra}")
    lines += [f"warning: {w}" for w in d.warnings]
    return lines


def cmd_locus(args):
    knot = _locus_knot(args)
    result = run_pipeline(knot, _options(args, knot))
    written = _write_artifacts(result, args)
    _emit(_summary(result) + [f"wrote: {p}" for p in written])


def cmd_orderable(args):
    knot = _locus_knot(args)
    result = run_pipeline(knot, _options(args, knot))
    _emit(_summary(result))


def cmd_report(args):
    knot = _locus_knot(args)
    result = run_pipeline(knot, _options(args, knot))
    _emit(observations_report(result.diagram).lines())


def cmd_oracle_check(args):
    """Compare phi/pi with an iterated boundary-action estimate at random arc samples."""
    knot = _locus_knot(args)
    arcs = trace_arcs(deformation_seeds(knot), samples=args.samples, parabolic_band=args.parabolic_band)
    pool = [(arc, i) for arc in arcs for i in range(1, len(arc.samples) - 1)]
    rng = random.Random(args.rng_seed)
    worst = 0.0
    for arc, i in rng.sample(pool, min(args.points, len(pool))):
        mu, _ = peripheral_images(arc.reps[i], knot)
        x = arc.samples[i].x
        est = translation_number_oracle(mu, lift_hint=x)
        worst = max(worst, abs(est - x))
    _emit([f"knot: {knot}", f"points: {min(args.points, len(pool))}", f"max deviation: {worst:.3g}"])
    if worst > ORACLE_TOL:
        raise ArithmeticError(f"oracle deviation {worst:.3g} exceeds {ORACLE_TOL}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--k", type=int, required=True, help="twist parameter, T^m_(3,3k+2)")
    common.add_argument("--m", type=int, default=1, help="number of full twists (default 1)")
    common.add_argument("--allow-large", action="store_true", help="permit k above 8")
    common.add_argument("--samples", type=int, default=200, help="target samples per arc")
    common.add_argument("--parabolic-band", type=float, default=PARABOLIC_BAND)
    common.add_argument("--relator-tol", type=float, default=RELATOR_TOL)

    locus = _Parser(add_help=False)
    locus.add_argument("--seed-root", type=int, default=None, metavar="INDEX", help="trace one root only")
    locus.add_argument("--exceptional", default=None, metavar="FILE", help="JSON exceptional-slope list")
    locus.add_argument("--slope", action="append", default=[], help="surgery slope p/q to judge (repeatable)")

    parser = _Parser(prog="translocus", description="Translation extension loci of twisted torus knots")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("alexander", parents=[common], help="Alexander polynomial").set_defaults(func=cmd_alexander)
    sub.add_parser("roots", parents=[common], help="unit-circle roots").set_defaults(func=cmd_roots)
    sub.add_parser("seeds", parents=[common], help="deformation seeds").set_defaults(func=cmd_seeds)
    p = sub.add_parser("locus", parents=[common, locus], help="trace the locus and write artifacts")
    p.add_argument("--out", default=".", metavar="DIR")
    p.add_argument("--emit", choices=("csv", "svg", "both"), default="both")
    p.set_defaults(func=cmd_locus)
    sub.add_parser("orderable", parents=[common, locus], help="orderable slope range").set_defaults(func=cmd_orderable)
    sub.add_parser("report", parents=[common, locus], help="empirical observations").set_defaults(func=cmd_report)
    p = sub.add_parser("oracle-check", parents=[common], help="translation-number cross-check")
    p.add_argument("--points", type=int, default=20)
    p.add_argument("--rng-seed", type=int, default=0)
    p.set_defaults(func=cmd_oracle_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.samples < 3:
            raise UsageError("--samples must be at least 3")
        if not 0 < args.parabolic_band < 1:
            raise UsageError("--parabolic-band must lie in (0, 1)")
        args.func(args)
    except (UsageError, OptionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # any failure past argument validation is computational
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
