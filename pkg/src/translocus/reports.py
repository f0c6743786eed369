"""Pipeline orchestration and the empirical-observation report."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .character_variety import UnitCircleRoot, alexander_roots_unit_circle, deformation_seeds
from .core_algebra import PARABOLIC_BAND
from .locus import LocusArc, LocusDiagram, dihedral_expand, trace_arcs
from .orderability import OrderableInterval, SurgeryVerdict, orderable_range, verdict
from .presentation import TwistedTorusKnot, alexander
from .representation import RELATOR_TOL, commutator_norm, verify_relation

MAX_K = 8


class OptionError(ValueError):
    """An option is outside what the pipeline accepts."""


class PipelineError(RuntimeError):
    """A computation stage failed; ``stage`` names it."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class PipelineOptions:
    samples: int = 200
    parabolic_band: float = PARABOLIC_BAND
    relator_tol: float = RELATOR_TOL
    seed_root: int | None = None
    slopes: list = field(default_factory=list)
    exceptional: list | None = None
    allow_large: bool = False


@dataclass
class PipelineResult:
    knot: TwistedTorusKnot
    roots: list[UnitCircleRoot]
    diagram: LocusDiagram
    interval: OrderableInterval | None
    verdicts: list[SurgeryVerdict]
    max_relator_residual: float
    max_commutator: float


def check_knot_range(k: int, allow_large: bool = False) -> None:
    if k < 1 or (k > MAX_K and not allow_large):
        raise OptionError(f"k must lie in [1, {MAX_K}] (got {k}); pass --allow-large to exceed")


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except Exception as exc:  # surfaced with the stage name
        raise PipelineError(name, exc) from exc


def arc_residuals(arcs: list[LocusArc]) -> tuple[float, float]:
    """Largest relator residual and peripheral commutator norm over all realized samples."""
    rel = comm = 0.0
    for arc in arcs:
        for rep in arc.reps:
            if rep is None:
                continue
            rel = max(rel, verify_relation(rep, arc.knot))
            comm = max(comm, commutator_norm(rep, arc.knot))
    return rel, comm


def run_pipeline(knot: TwistedTorusKnot, options: PipelineOptions | None = None) -> PipelineResult:
    """alexander, roots, seeds, arcs, diagram and orderable range, in that order."""
    opts = options or PipelineOptions()
    check_knot_range(knot.k, opts.allow_large)
    if knot.m != 1:
        raise OptionError("the locus is only available for m = 1")
    _stage("alexander", alexander, knot)
    roots = _stage("roots", alexander_roots_unit_circle, knot)
    seeds = _stage("seeds", deformation_seeds, knot)
    if opts.seed_root is not None:
        if not 0 <= opts.seed_root < len(seeds):
            raise OptionError(f"--seed-root must be in [0, {len(seeds) - 1}]")
        seeds = [seeds[opts.seed_root]]
    arcs = _stage("arcs", trace_arcs, seeds, samples=opts.samples, parabolic_band=opts.parabolic_band)
    if not arcs:
        raise PipelineError("arcs", RuntimeError("no seed has an SU(1,1) side"))
    rel, comm = arc_residuals(arcs)
    if rel > opts.relator_tol:
        raise PipelineError("verify", ArithmeticError(f"relator residual {rel:.3g} exceeds {opts.relator_tol}"))
    diagram = _stage("diagram", dihedral_expand, arcs)
    skipped = len(seeds) - len(arcs)
    if skipped:
        diagram.warnings.append(f"{skipped} root(s) gave no SU(1,1) arc")
    interval = _stage("orderable", orderable_range, diagram)
    verdicts = [_stage("verdict", verdict, knot, r, diagram, opts.exceptional) for r in opts.slopes]
    return PipelineResult(knot, roots, diagram, interval, verdicts, rel, comm)


# --- observations ---------------------------------------------------------------


@dataclass
class ObservationReport:
    k: int
    slope_target: int
    line_slopes: list[tuple[float, float]]  # (root argument, mean slope) per traced arc
    slope_sign: str
    slopes_within_one: bool
    height_deviations: list[float]  # |end height - c * start x| per traced arc
    deviation_ok: bool
    separation_ok: bool
    longest_arc_root_theta: float
    max_height_point: tuple[float, float]
    monotonicity_ok: bool
    warnings: list[str] = field(default_factory=list)

    def lines(self) -> list[str]:
        out = [f"k: {self.k}", f"slope target: {self.slope_target}"]
        for theta, slope in self.line_slopes:
            out.append(f"arc slope at theta {theta:.6f}: {slope:.6f}")
        out += [
            f"slope sign: {self.slope_sign}",
            f"slopes within one of target: {self.slopes_within_one}",
            f"max height deviation: {max(self.height_deviations):.6f}",
            f"height deviations below one: {self.deviation_ok}",
            f"arcs above axis: {self.separation_ok}",
            f"longest arc root theta: {self.longest_arc_root_theta:.6f}",
            f"longest arc root theta / (2pi/3): {self.longest_arc_root_theta / (2 * math.pi / 3):.6f}",
            f"max height point: ({self.max_height_point[0]:.6g}, {self.max_height_point[1]:.9g})",
            f"peripheral traces monotone: {self.monotonicity_ok}",
        ]
        out += [f"warning: {w}" for w in self.warnings]
        return out


def _strictly_monotone(values: np.ndarray) -> bool:
    d = np.diff(values)
    return bool(np.all(d > 0) or np.all(d < 0))


def observations_report(diagram: LocusDiagram) -> ObservationReport:
    """Observations on the traced arcs of ``diagram``: slopes, separation, longest arc, height."""
    knot = diagram.knot
    traced = [a for a in diagram.arcs if not a.image]
    target = knot.c
    slopes, deviations = [], []
    separated = monotone = True
    for arc in traced:
        start, end = arc.samples[0], arc.samples[-1]
        slopes.append((arc.root_theta, arc.mean_slope()))
        deviations.append(abs(end.y - target * start.x))
        # every sample after the seed strictly above the axis
        separated &= all(s.y > 0 for s in arc.samples[1:])
        interior = arc.samples[:-1]
        monotone &= _strictly_monotone(np.cos([s.phi for s in interior]))
        monotone &= _strictly_monotone(np.cos([s.psi for s in interior]))
    signs = {math.copysign(1, s) for _, s in slopes}
    sign = "negative" if signs == {-1} else "positive" if signs == {1} else "mixed"
    longest = max(traced, key=lambda a: a.x_extent)
    ends = [a.terminal.point for a in traced if a.terminal.kind == "ParabolicEndpoint"]
    top = max(ends, key=lambda p: p[1]) if ends else (math.nan, math.nan)
    warnings = list(diagram.warnings)
    return ObservationReport(
        k=knot.k,
        slope_target=target,
        line_slopes=slopes,
        slope_sign=sign,
        slopes_within_one=all(abs(abs(s) - target) <= 1 for _, s in slopes),
        height_deviations=deviations,
        deviation_ok=all(d < 1 for d in deviations),
        separation_ok=separated,
        longest_arc_root_theta=longest.root_theta,
        max_height_point=top,
        monotonicity_ok=monotone,
        warnings=warnings,
    )
