"""Acceptance criteria, one test per criterion; each prints a pass/fail line in the summary.

Run on its own with ``python3 tests/test_acceptance.py`` or ``pytest tests/test_acceptance.py``.
"""

import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from conftest import diagram, main_arc, record_criterion, traced_arcs
from translocus.character_variety import (
    alexander_roots_unit_circle,
    ell_k1,
    irreducible_constraints_general,
    irreducible_constraints_k1,
    m_k1,
    meridian_trace,
    parabolic_parameter_k1,
    reducible_traces,
    sigma_trace,
)
from translocus.cli import main
from translocus.core_algebra import translation_number_oracle
from translocus.locus import arc_slope_profile
from translocus.orderability import line_locus_intersection
from translocus.presentation import TwistedTorusKnot
from translocus.representation import commutator_norm, peripheral_images, verify_relation
from translocus.reports import observations_report

KS = [1, 2, 3, 4]
K1 = TwistedTorusKnot(1)


def check(n: int, ok: bool, detail: str) -> None:
    record_criterion(f"[{'PASS' if ok else 'FAIL'}] {n}: {detail}")
    assert ok, detail


def test_criterion_01_alexander_k1(capsys):
    start = time.perf_counter()
    code = main(["alexander", "--k", "1"])
    elapsed = time.perf_counter() - start
    out = capsys.readouterr().out
    expected = "x^-5 - x^-4 + x^-2 - x^-1 + 1 - x + x^2 - x^4 + x^5"
    ok = code == 0 and f"alexander: {expected}" in out.splitlines() and elapsed < 1
    check(1, ok, f"alexander k=1 exact polynomial in {elapsed:.3f}s")


def test_criterion_02_root_location():
    theta0 = alexander_roots_unit_circle(K1)[-1].theta
    t0 = reducible_traces(K1, theta0).t
    ok = abs(theta0 - 2.0453) < 1e-3 and abs(t0 - 0.78) < 0.01
    check(2, ok, f"theta0 = {theta0:.10f}, t0 = {t0:.6f}")


def test_criterion_03_relation_residuals():
    count, rel, comm = 0, 0.0, 0.0
    for k in KS:
        knot = TwistedTorusKnot(k)
        for arc in traced_arcs(k):
            for rep in filter(None, arc.reps):  # the parabolic endpoint carries no representation
                rel = max(rel, verify_relation(rep, knot))
                comm = max(comm, commutator_norm(rep, knot))
                count += 1
    ok = count >= 1000 and rel < 1e-8 and comm < 1e-8
    check(3, ok, f"{count} arc points, relator {rel:.2e}, commutator {comm:.2e}")


def test_criterion_04_trace_cross_validation():
    worst = 0.0
    for k in KS:
        knot = TwistedTorusKnot(k)
        for arc in traced_arcs(k):
            for rep in filter(None, arc.reps):
                mu, sig = peripheral_images(rep, knot)
                worst = max(
                    worst,
                    abs(np.trace(mu).real - meridian_trace(rep.traces, k)),
                    abs(np.trace(sig).real - sigma_trace(rep.traces, k)),
                )
    rng = random.Random(4)
    general = 0.0
    n = 0
    while n < 50:
        s = rng.uniform(-1.9, 1.9)
        if abs(s) < 1e-2:
            continue
        for tt in irreducible_constraints_general(1, s):
            if min(abs(tt.t), abs(abs(tt.t) - 1)) < 1e-2:
                continue
            ref = irreducible_constraints_k1(tt.t)
            general = max(
                general,
                max(abs(a - b) for a, b in zip(tt, ref)),
                abs(meridian_trace(tt, 1) - m_k1(tt.t)),
                abs(sigma_trace(tt, 1) - ell_k1(tt.t)),
            )
            n += 1
    ok = worst < 1e-8 and general < 1e-8
    check(4, ok, f"word vs closed form {worst:.2e}, general vs k=1 forms {general:.2e} on {n} triples")


def test_criterion_05_k1_endpoints(k1_diagram):
    arc = main_arc(1)
    start = (arc.samples[0].x, arc.samples[0].y)
    end = arc.terminal.point
    img = next(a for a in k1_diagram.arcs if a.image and a.seed is arc.seed)
    img_end = img.terminal.point
    theta0 = arc.root_theta
    ok = (
        math.dist(start, (theta0 / (2 * math.pi), 0)) < 1e-6
        and abs(start[0] - 0.3255) < 1e-4
        and math.dist(end, (0, 6)) < 1e-6
        and math.dist(img_end, (1, -6)) < 1e-6
    )
    check(5, ok, f"start {start[0]:.6f},{start[1]:.1e}  end {end[0]:.1e},{end[1]:.9f}  image end {img_end[0]:.9f},{img_end[1]:.9f}")


def test_criterion_06_slope_band():
    slopes = np.array([s for _, s in arc_slope_profile(main_arc(1))])
    ok = len(slopes) >= 100 and np.all((slopes >= -18.5) & (slopes <= -18.4))
    check(6, ok, f"{len(slopes)} slopes in [{slopes.min():.4f}, {slopes.max():.4f}]")


def test_criterion_07_orderability_interval(capsys, k1_diagram):
    code = main(["orderable", "--k", "1"])
    out = capsys.readouterr().out
    printed = code == 0 and "orderable slopes: (-inf, 6)" in out
    rng = random.Random(7)
    below = [Fraction(rng.uniform(-10, 6 - 1e-3)).limit_denominator(10**6) for _ in range(100)]
    above = [Fraction(rng.uniform(6 + 1e-3, 9)).limit_denominator(10**6) for _ in range(100)]
    hit = sum(bool(line_locus_intersection(k1_diagram, r)) for r in below)
    miss = sum(not line_locus_intersection(k1_diagram, r) for r in above)
    ok = printed and hit == 100 and miss == 100
    check(7, ok, f"printed (-inf, 6): {printed}; witnesses below {hit}/100; none above {miss}/100")


def test_criterion_08_monotonicity():
    theta0 = alexander_roots_unit_circle(K1)[-1].theta
    t0 = reducible_traces(K1, theta0).t
    t1 = parabolic_parameter_k1(t0)
    ts = np.linspace(t0, t1, 1000)
    increasing = np.all(np.diff([m_k1(t) for t in ts]) > 0) and np.all(np.diff([ell_k1(t) for t in ts]) > 0)
    vals = []
    for t in np.linspace(0.7654, 1.0779, 1002)[1:-1]:
        if abs(t - 1) < 1e-9:
            continue
        _, s, r = irreducible_constraints_k1(t)
        vals.append(t / 2 - r / s)
    vals = np.array(vals)
    quantity = np.all(vals > 0) and np.all(np.diff(vals) > 0)
    ok = bool(increasing and quantity)
    check(8, ok, f"m, l increasing on (t0, t1): {increasing}; t/2 - r/s positive increasing: {quantity}")


def test_criterion_09_translation_oracle():
    arc = main_arc(1)
    rng = np.random.default_rng(9)
    idx = rng.choice(np.arange(1, len(arc.samples) - 1), 20, replace=False)
    worst = 0.0
    for i in idx:
        mu, _ = peripheral_images(arc.reps[i], K1)
        x = arc.samples[i].x
        worst = max(worst, abs(translation_number_oracle(mu, lift_hint=x) - x))
    check(9, worst < 1e-3, f"max oracle deviation {worst:.2e} at 20 samples")


@pytest.mark.parametrize("k", [2, 3, 4])
def test_criterion_10_observations(k):
    rep = observations_report(diagram(k))
    target = 3 * (3 * k + 2) + 4
    height_ok = math.dist(rep.max_height_point, (0, 3 * k + 3)) < 1e-6
    off = [f"{abs(s):.2f}@{th:.4f}" for th, s in rep.line_slopes if abs(abs(s) - target) > 1]
    ok = height_ok and not off
    detail = f"k={k} max height {rep.max_height_point[1]:.9f} (target {3 * k + 3}); slope target {target}"
    if off:
        detail += f"; arcs outside +-1: {', '.join(off)}"
    check(10, ok, detail)


def test_criterion_11_endpoint_integrality():
    worst, count = 0.0, 0
    for k in KS:
        for arc in diagram(k).arcs:
            if arc.terminal.kind == "ParabolicEndpoint":
                y = arc.terminal.point[1]
                worst = max(worst, abs(y - round(y)))
                count += 1
    ok = count == sum(len(diagram(k).arcs) for k in KS) and worst < 1e-6
    check(11, ok, f"{count} parabolic endpoints, max distance to integer {worst:.2e}")


def test_criterion_12_determinism(tmp_path):
    outs = []
    for i in range(2):
        d = tmp_path / str(i)
        assert main(["locus", "--k", "1", "--out", str(d), "--emit", "csv"]) == 0
        outs.append((d / "locus_k1_m1.csv").read_bytes())
    check(12, outs[0] == outs[1], f"two runs, {len(outs[0])} bytes each, identical: {outs[0] == outs[1]}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
