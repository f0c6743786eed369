"""Continuation of representation paths into the translation extension locus.

Along an arc the peripheral images are elliptic, conjugate to
``diag(e^{i phi}, e^{-i phi})`` and ``diag(e^{i psi}, e^{-i psi})``, and the
locus point is ``(phi/pi, (-c phi + psi)/pi)``.  Only ``cos(phi)`` and
``cos(psi)`` are known from the traces, so the real-valued lifts are carried
along by continuity: each step picks the branch of ``+-arccos + 2 pi n``
closest to a linear extrapolation of the previous two values.
"""

from __future__ import annotations

import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from .character_variety import (
    DeformationSeed,
    curve_point,
    meridian_trace,
    sigma_trace,
)
from .core_algebra import PARABOLIC_BAND, ElementClass, classify, rotation_angle
from .presentation import TwistedTorusKnot
from .representation import (
    RealizationError,
    RepPoint,
    peripheral_images,
    preferred_gauge,
    realize,
)

MAX_DX = 0.01
MAX_DY = 0.2
STEP_FLOOR = 1e-14
INITIAL_STEP = 1e-6
MAX_PARAM_STEP = 1e-2
ENDPOINT_FIT = 6
ENDPOINT_FIT_DEGREE = 3


class TracingError(RuntimeError):
    pass


class ArcSample(NamedTuple):
    param: float
    phi: float
    psi: float
    x: float
    y: float
    side: ElementClass


@dataclass(frozen=True)
class Terminal:
    kind: str  # "ParabolicEndpoint", "WallHit" or "MaxSteps"
    point: tuple[float, float] | None = None

    def __str__(self) -> str:
        return self.kind


@dataclass
class LocusArc:
    knot: TwistedTorusKnot
    seed: DeformationSeed
    samples: list[ArcSample]
    terminal: Terminal
    root_theta: float
    image: bool = False
    # realized representation per sample (None at a snapped endpoint); empty on images
    reps: list[RepPoint | None] = field(default_factory=list, repr=False)

    @property
    def xs(self) -> np.ndarray:
        return np.array([s.x for s in self.samples])

    @property
    def ys(self) -> np.ndarray:
        return np.array([s.y for s in self.samples])

    @property
    def x_extent(self) -> float:
        xs = self.xs
        return float(xs.max() - xs.min())

    def mean_slope(self) -> float:
        a, b = self.samples[0], self.samples[-1]
        return (b.y - a.y) / (b.x - a.x)


@dataclass
class LocusDiagram:
    knot: TwistedTorusKnot
    arcs: list[LocusArc]
    axis: tuple[float, float] = (0.0, 1.0)
    domain: tuple[float, float] = (0.0, 1.0)
    warnings: list[str] = field(default_factory=list)

    def parabolic_endpoints(self) -> list[tuple[float, float]]:
        return [a.terminal.point for a in self.arcs if a.terminal.kind == "ParabolicEndpoint"]


def _nearest_lift(cos_value: float, predicted: float) -> float:
    """Branch of ``+-arccos(cos_value) + 2 pi n`` closest to ``predicted``."""
    base = math.acos(max(-1.0, min(1.0, cos_value)))
    best = None
    for cand in (base, -base):
        lifted = cand + 2 * math.pi * round((predicted - cand) / (2 * math.pi))
        if best is None or abs(lifted - predicted) < abs(best - predicted):
            best = lifted
    return best


class _State(NamedTuple):
    param: float
    phi: float
    psi: float
    dphi: float  # per unit parameter, for extrapolation
    dpsi: float
    rep: RepPoint


def _realize_continuing(tt, knot, prev: RepPoint) -> RepPoint:
    """Realize ``tt`` keeping the orientation class of ``prev``.

    When the better-conditioned gauge changes, the new orientation is the one
    whose meridian image rotates the same way as in the old gauge.
    """
    want = preferred_gauge(tt)
    if want == prev.gauge:
        return realize(tt, knot, orientation=prev.orientation, gauge=want)
    try:
        old = realize(tt, knot, orientation=prev.orientation, gauge=prev.gauge)
    except RealizationError:
        raise TracingError("gauge switch left too late; old gauge no longer elliptic")
    ref = rotation_angle(peripheral_images(old, knot)[0])
    best, best_gap = None, math.inf
    for orientation in (1, -1):
        cand = realize(tt, knot, orientation=orientation, gauge=want)
        ang = rotation_angle(peripheral_images(cand, knot)[0])
        gap = abs(math.remainder(ang - ref, 2 * math.pi))
        if gap < best_gap:
            best, best_gap = cand, gap
    return best


def _peripheral_traces(knot, param, branch):
    tt = curve_point(knot, param, branch)
    return tt, meridian_trace(tt, knot.k), sigma_trace(tt, knot.k)


def trace_arc(
    seed: DeformationSeed,
    samples: int = 200,
    max_steps: int = 1_000_000,
    parabolic_band: float = PARABOLIC_BAND,
    step_scale: float = 1.0,
) -> LocusArc:
    """Follow the SU(1,1) deformation of ``seed`` until a peripheral trace reaches 2.

    ``samples`` sets the target density: accepted steps move ``x`` by at most
    ``min(0.01, d / samples)`` where ``d`` is the distance from the seed to
    the nearest integer ``x``.  ``step_scale`` shrinks every step bound
    proportionally; it exists to check that the lifts do not depend on the
    step size.
    """
    if seed.side != "SU11" or seed.direction == 0:
        raise TracingError("seed has no SU(1,1) side")
    knot, k, c = seed.knot, seed.knot.k, seed.knot.c
    d = seed.direction
    theta = seed.root.theta
    span = min(theta / (2 * math.pi), 1 - theta / (2 * math.pi))
    max_dx = step_scale * min(MAX_DX, span / max(samples, 1))
    max_dy = step_scale * MAX_DY
    max_h = step_scale * MAX_PARAM_STEP

    phi0 = theta / 2
    psi0 = c * phi0
    rep0 = realize(seed.seed_traces, knot, orientation=seed.orientation, gauge=seed.gauge, check=False)
    state = _State(seed.param, phi0, psi0, 0.0, 0.0, rep0)
    out = [ArcSample(seed.param, phi0, psi0, phi0 / math.pi, 0.0, _side(rep0, knot))]
    reps: list[RepPoint | None] = [rep0]

    h = INITIAL_STEP
    terminal = Terminal("MaxSteps")
    for _ in range(max_steps):
        p = state.param + d * h
        try:
            tt, tm, ts = _peripheral_traces(knot, p, seed.branch)
        except ValueError:
            h = _shrink(h)
            continue
        if max(abs(tm), abs(ts)) >= 2 - parabolic_band:
            out.append(_snap_endpoint(seed, state, p, out))
            reps.append(None)
            terminal = Terminal("ParabolicEndpoint", (out[-1].x, out[-1].y))
            break
        try:
            rep = _realize_continuing(tt, knot, state.rep)
        except RealizationError:
            h = _shrink(h)
            continue
        if rep.side != "SU11":
            # crossed into SU(2); the previous sample was the last SU(1,1) one
            if h > 1e-10:
                h = _shrink(h)
                continue
            terminal = Terminal("WallHit", (out[-1].x, out[-1].y))
            break
        dp = p - state.param
        phi = _nearest_lift(tm / 2, state.phi + state.dphi * dp)
        psi = _nearest_lift(ts / 2, state.psi + state.dpsi * dp)
        x, y = phi / math.pi, (-c * phi + psi) / math.pi
        if (
            abs(phi - state.phi) >= math.pi / 2
            or abs(psi - state.psi) >= math.pi / 2
            or abs(x - out[-1].x) > max_dx
            or abs(y - out[-1].y) > max_dy
        ):
            h = _shrink(h)
            continue
        state = _State(p, phi, psi, (phi - state.phi) / dp, (psi - state.psi) / dp, rep)
        out.append(ArcSample(p, phi, psi, x, y, _side(rep, knot)))
        reps.append(rep)
        h = min(h * 1.5, max_h)
    return LocusArc(knot, seed, out, terminal, theta, reps=reps)


def _shrink(h: float) -> float:
    h /= 2
    if h < STEP_FLOOR:
        raise TracingError("step size underflow; continuation is ambiguous")
    return h


def _side(rep: RepPoint, knot) -> ElementClass:
    mu, _ = peripheral_images(rep, knot)
    return classify(mu)


def _snap_endpoint(seed: DeformationSeed, state: _State, p_hit: float, tail: list[ArcSample]) -> ArcSample:
    """Locate the parameter where the peripheral images become parabolic.

    Both peripheral traces reach +-2 together, so the meridian root is
    bracketed first; the longitude root is the fallback when the meridian
    stays elliptic a short way past the hit point.
    """
    knot, d = seed.knot, seed.direction
    p_star, on_meridian = None, True
    for which in (0, 1):
        def gap(p, which=which):
            traces = _peripheral_traces(knot, p, seed.branch)
            return 2 - abs(traces[1 + which])

        bracket = _bracket_crossing(gap, state.param, abs(p_hit - state.param), d)
        if bracket is not None:
            p_star = brentq(gap, *bracket, xtol=1e-15, rtol=4 * np.finfo(float).eps)
            on_meridian = which == 0
            break
    if p_star is None:
        raise TracingError("no parabolic crossing beyond the termination band")
    _, tm, ts = _peripheral_traces(knot, p_star, seed.branch)
    dp = p_star - state.param
    predicted = state.phi + state.dphi * dp
    if on_meridian:
        # p_star is a root of 2 - |tr mu|, so phi is a multiple of pi there
        phi = math.pi * round(predicted / math.pi)
        if abs(phi - _nearest_lift(tm / 2, predicted)) > 1e-6:
            raise TracingError("meridian angle at the endpoint is not a multiple of pi")
    else:
        phi = _nearest_lift(tm / 2, predicted)
    c = knot.c
    x = phi / math.pi
    # At |tr| = 2 arccos loses half the digits (delta phi ~ sqrt(delta tr)),
    # but y is an analytic function of x up to the endpoint, so the height is
    # extrapolated from the well-conditioned samples instead.
    y = _extrapolate_height(tail, x)
    psi = math.pi * y + c * phi
    return ArcSample(p_star, phi, psi, x, y, ElementClass.PARABOLIC)


def _bracket_crossing(gap, p0: float, step: float, d: int, doublings: int = 12):
    """Ordered ``(lo, hi)`` around the first sign change of ``gap`` past ``p0``."""
    for _ in range(doublings):
        p_out = p0 + d * step
        try:
            g = gap(p_out)
        except ValueError:
            g = math.nan
        if g <= 0:
            return tuple(sorted((p0, p_out)))
        step *= 2
    return None


def _extrapolate_height(tail: list[ArcSample], x: float) -> float:
    pts = tail[-ENDPOINT_FIT:]
    deg = min(ENDPOINT_FIT_DEGREE, len(pts) - 1)
    if deg < 1:
        raise TracingError("too few samples to locate the endpoint")
    xs = np.array([s.x for s in pts])
    ys = np.array([s.y for s in pts])
    coef = np.polynomial.polynomial.polyfit(xs - x, ys, deg)
    return float(coef[0])


def _worker_count(n_jobs: int) -> int:
    env = os.environ.get("LOCUS_THREADS")
    limit = int(env) if env and env.isdigit() and int(env) > 0 else (os.cpu_count() or 1)
    return max(1, min(limit, n_jobs))


def trace_arcs(seeds: list[DeformationSeed], samples: int = 200, **kwargs) -> list[LocusArc]:
    """Trace every SU(1,1) seed; one worker per seed, bounded by ``LOCUS_THREADS``."""
    usable = [s for s in seeds if s.side == "SU11"]
    if not usable:
        return []
    with ThreadPoolExecutor(max_workers=_worker_count(len(usable))) as pool:
        return list(pool.map(lambda s: trace_arc(s, samples=samples, **kwargs), usable))


def arc_slope_profile(arc: LocusArc) -> list[tuple[float, float]]:
    """Centered-difference ``dy/dx`` at interior samples, keyed by curve parameter."""
    pts = arc.samples
    if len(pts) < 3:
        raise ValueError("need at least three samples")
    out = []
    for prev, cur, nxt in zip(pts, pts[1:], pts[2:]):
        dx = nxt.x - prev.x
        if dx == 0:
            raise ValueError(f"degenerate x step at parameter {cur.param}")
        out.append((cur.param, (nxt.y - prev.y) / dx))
    return out


def _image(arc: LocusArc) -> LocusArc:
    # (x, y) -> (-x, -y) followed by (x, y) -> (x + 1, y)
    c = arc.knot.c
    pts = [
        ArcSample(s.param, math.pi - s.phi, c * math.pi - s.psi, 1 - s.x, -s.y, s.side)
        for s in arc.samples
    ]
    term = arc.terminal
    if term.point is not None:
        term = replace(term, point=(1 - term.point[0], -term.point[1]))
    return LocusArc(arc.knot, arc.seed, pts, term, 2 * math.pi - arc.root_theta, image=True)


def dihedral_expand(arcs: list[LocusArc]) -> LocusDiagram:
    """Add the symmetry image of each arc, placed in the strip ``0 <= x <= 1``."""
    if not arcs:
        raise ValueError("no arcs to expand")
    knot = arcs[0].knot
    traced = [a for a in arcs if not a.image]
    return LocusDiagram(knot, traced + [_image(a) for a in traced])


# --- output -------------------------------------------------------------------

CSV_COLUMNS = ("k", "m", "root_theta", "param", "phi", "psi", "x", "y", "side", "terminal")


def _g(v: float) -> str:
    return f"{v:.17g}"


def diagram_csv(d: LocusDiagram) -> str:
    buf = io.StringIO()
    buf.write(",".join(CSV_COLUMNS) + "\n")
    for arc in d.arcs:
        for s in arc.samples:
            row = (
                str(d.knot.k),
                str(d.knot.m),
                _g(arc.root_theta),
                _g(s.param),
                _g(s.phi),
                _g(s.psi),
                _g(s.x),
                _g(s.y),
                s.side.value,
                arc.terminal.kind,
            )
            buf.write(",".join(row) + "\n")
    return buf.getvalue()


def read_diagram_csv(text: str) -> list[dict]:
    """Parse :func:`diagram_csv` output into one dict per arc, in file order."""
    lines = text.strip().splitlines()
    if tuple(lines[0].split(",")) != CSV_COLUMNS:
        raise ValueError("unexpected CSV header")
    arcs: list[dict] = []
    for line in lines[1:]:
        f = line.split(",")
        theta = float(f[2])
        if not arcs or arcs[-1]["root_theta"] != theta:
            arcs.append({"k": int(f[0]), "m": int(f[1]), "root_theta": theta, "terminal": f[9], "samples": []})
        arcs[-1]["samples"].append(
            ArcSample(float(f[3]), float(f[4]), float(f[5]), float(f[6]), float(f[7]), ElementClass(f[8]))
        )
    return arcs


SVG_WIDTH, SVG_HEIGHT = 800, 600
_PLOT = (60, 20, 720, 540)  # x, y, width, height of the plotting area


def diagram_svg(d: LocusDiagram) -> str:
    """Arcs as polylines, parabolic endpoints as dots, horizontal axis drawn."""
    H = 3 * d.knot.k + 5
    px, py, pw, ph = _PLOT

    def to_px(x, y):
        return px + x * pw, py + (H - y) / (2 * H) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" '
        f'viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">',
        f'<rect x="{px}" y="{py}" width="{pw}" height="{ph}" fill="none" stroke="#888"/>',
        f'<text x="{px + pw / 2}" y="{SVG_HEIGHT - 4}" text-anchor="middle" font-size="12">'
        f"mu* ({d.knot})</text>",
        f'<text x="14" y="{py + ph / 2}" font-size="12" transform="rotate(-90 14 {py + ph / 2})" '
        f'text-anchor="middle">lambda*</text>',
    ]
    for yt in range(-H, H + 1, max(1, H // 5)):
        _, ty = to_px(0, yt)
        out.append(f'<text x="{px - 6}" y="{ty + 4:.2f}" text-anchor="end" font-size="10">{yt}</text>')
    for xt in (0, 0.25, 0.5, 0.75, 1):
        tx, _ = to_px(xt, -H)
        out.append(f'<text x="{tx:.2f}" y="{py + ph + 14}" text-anchor="middle" font-size="10">{xt:g}</text>')
    # data drawn in locus coordinates; y is negated because SVG y grows downward
    out.append(
        f'<svg x="{px}" y="{py}" width="{pw}" height="{ph}" viewBox="0 {-H} 1 {2 * H}" '
        f'preserveAspectRatio="none" overflow="visible">'
    )
    out.append(
        '<line class="axis" x1="0" y1="0" x2="1" y2="0" stroke="black" '
        'stroke-width="1" vector-effect="non-scaling-stroke"/>'
    )
    for arc in d.arcs:
        pts = " ".join(f"{s.x:.6f},{-s.y:.6f}" for s in arc.samples)
        colour = "#c0392b" if arc.image else "#1f4e9c"
        out.append(
            f'<polyline points="{pts}" fill="none" stroke="{colour}" stroke-width="1.5" '
            f'vector-effect="non-scaling-stroke" data-root-theta="{arc.root_theta:.6f}"/>'
        )
    out.append("</svg>")
    for x, y in d.parabolic_endpoints():
        cx, cy = to_px(x, y)
        out.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="3" fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_diagram(d: LocusDiagram, fmt: str) -> bytes:
    fmt = fmt.lower()
    if fmt == "csv":
        return diagram_csv(d).encode()
    if fmt == "svg":
        return diagram_svg(d).encode()
    raise ValueError(f"unknown format {fmt!r}")
