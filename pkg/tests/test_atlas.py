"""Zero-curve tracing, intersection refinement, triangles, and mode scans.

Everything here runs at small orders/grids; the order-60 reproduction lives
in the acceptance suite.
"""
import math

import numpy as np
import pytest

from hansenatlas.atlas import (
    AtlasReport,
    eval_grid,
    find_double,
    find_triple,
    grid_axis,
    scan_modes,
    trace_curves,
    triangle_metrics,
)
from hansenatlas.fourier import Mode
from hansenatlas.report import atlas_json, curves_csv
from hansenatlas.svgplot import render_svg


# -- grid evaluation --------------------------------------------------------


def test_eval_grid_single_monomial_normalizes_to_minus_one():
    V = eval_grid(Mode(2, 2), (2, 0), grid_n=16)
    assert np.max(np.abs(V + 1.0)) < 1e-12


def test_eval_grid_rejects_tiny_grid():
    with pytest.raises(ValueError):
        eval_grid(Mode(2, 2), (2, 0), grid_n=8)


def test_grid_signs_deterministic_across_paths():
    # the same point gives the same sign through the grid and the paired-point
    # evaluators, and repeated grid evaluation is bitwise identical
    from hansenatlas.atlas import ModeSurface

    surf = ModeSurface(Mode(2, 5), (20, 20))
    ax = grid_axis(16)
    V = surf.normalized_grid(ax, ax)
    A, E = np.meshgrid(ax, ax, indexing="ij")
    W = surf.normalized_at(A.ravel(), E.ravel()).reshape(16, 16)
    assert np.array_equal(np.sign(V), np.sign(W))
    assert np.array_equal(eval_grid(Mode(2, 5), (20, 20), 64), eval_grid(Mode(2, 5), (20, 20), 64))


def test_eval_grid_sign_change_present_for_2_5_at_60():
    V = eval_grid(Mode(2, 5), (60, 60), grid_n=64)
    assert (V > 0).any() and (V < 0).any()


# -- tracing ------------------------------------------------------------------


def test_trace_single_monomial_empty():
    assert trace_curves(Mode(1, 1), (3, 0), 64) == []


def test_trace_below_visibility_empty():
    assert trace_curves(Mode(1, 1), (2, 8), 64) == []


def test_trace_2_5_nonempty_at_60():
    curves = trace_curves(Mode(2, 5), (60, 60), 128)
    assert curves
    ax_lo, ax_hi = 1.0 / 128, 1.0 - 1.0 / 128
    for c in curves:
        for (a, e) in c.points:
            assert ax_lo - 1e-12 <= a <= ax_hi + 1e-12
            assert ax_lo - 1e-12 <= e <= ax_hi + 1e-12


def test_trace_points_satisfy_residual_bound():
    from hansenatlas.atlas import EPS_CURVE, ModeSurface

    surf = ModeSurface(Mode(2, 5), (30, 30))
    curves = trace_curves(Mode(2, 5), (30, 30), 128)
    assert curves
    for c in curves:
        pts = np.array(c.points)
        vals = surf.normalized_at(pts[:, 0], pts[:, 1])
        assert np.max(np.abs(vals)) <= EPS_CURVE


def test_trace_deterministic():
    a = trace_curves(Mode(2, 5), (30, 30), 128)
    b = trace_curves(Mode(2, 5), (30, 30), 128)
    assert a == b


def test_marching_squares_on_synthetic_circle():
    # tracer core on a known implicit curve:
    # (4(a-1/2))^2 + (4(e-1/2))^2 - 1 = 16a^2 - 16a + 16e^2 - 16e + 7
    from hansenatlas.atlas import PolyEval, trace_surface
    from hansenatlas.series import SeriesAE

    circle = SeriesAE(
        {(0, 0): 7, (1, 0): -16, (2, 0): 16, (0, 1): -16, (0, 2): 16}, 2, 2
    )

    class Surface:
        mode = Mode(9, 9)
        order = (2, 2)
        series = circle
        poly = PolyEval(circle)

        def visible(self):
            return True

        def normalized_grid(self, av, ev):
            return self.poly.on_grid(av, ev)

        def normalized_at(self, a, e):
            return self.poly.at(a, e)

    curves = trace_surface(Surface(), 128, 1e-9)
    assert len(curves) == 1
    (curve,) = curves
    assert curve.closed
    assert len(curve.points) > 50
    for (a, e) in curve.points:
        radius = math.hypot(a - 0.5, e - 0.5)
        assert radius == pytest.approx(0.25, abs=1e-9)


def test_triangle_metrics_degenerate_and_regular():
    area, incenter, inradius = triangle_metrics([(0, 0), (0.5, 0.5), (1, 1)])
    assert area == 0.0 and inradius == 0.0
    area, incenter, inradius = triangle_metrics([(0, 0), (1, 0), (0.5, math.sqrt(3) / 2)])
    assert area == pytest.approx(math.sqrt(3) / 4, abs=1e-12)
    assert incenter[0] == pytest.approx(0.5, abs=1e-12)
    assert inradius == pytest.approx(math.sqrt(3) / 6, abs=1e-12)


# -- intersections -------------------------------------------------------------------


def test_find_double_2_5_at_30():
    reports = find_double(Mode(2, 5), (30, 30), 128)
    assert len(reports) == 1
    (rep,) = reports
    assert rep.point[0] == pytest.approx(0.61991, abs=2e-4)
    assert rep.point[1] == pytest.approx(0.71988, abs=2e-4)
    assert max(rep.residuals) <= 1e-12
    assert rep.multiples == (1, 2)


def test_find_double_refinement_stable_under_grid_halving():
    a = find_double(Mode(2, 5), (30, 30), 256)
    b = find_double(Mode(2, 5), (30, 30), 512)
    assert len(a) == len(b) == 1
    assert math.hypot(
        a[0].point[0] - b[0].point[0], a[0].point[1] - b[0].point[1]
    ) <= 1e-8


def test_find_double_below_visibility_empty():
    assert find_double(Mode(2, 5), (6, 6), 64) == []


def test_find_double_requires_coprime_mode():
    with pytest.raises(ValueError):
        find_double(Mode(2, 4), (20, 20), 64)


def test_find_double_deterministic_bitwise():
    a = find_double(Mode(2, 5), (30, 30), 128)
    b = find_double(Mode(2, 5), (30, 30), 128)
    assert a == b


def test_find_triple_structure_small_order():
    res = find_triple(Mode(1, 2), (12, 12), 64)
    assert {pair for pair, _ in res.pair_reports} == {(1, 2), (1, 3), (2, 3)}
    for _, reports in res.pair_reports:
        for rep in reports:
            assert max(rep.residuals) <= 1e-12


# -- scans ---------------------------------------------------------------------


def test_scan_modes_curves_small():
    report = scan_modes((10, 10), m_max=4, task="curves", grid_n=64)
    assert isinstance(report, AtlasReport)
    assert report.total_curves >= 1
    assert all(not e.skipped for e in report.entries)


def test_scan_modes_visibility_skip():
    report = scan_modes((6, 6), m_max=4, task="triple", grid_n=64)
    skipped = {str(e.mode) for e in report.entries if e.skipped}
    assert "(3,1)" in skipped  # needs 3*m* = 9 > 6
    assert "(2,1)" not in skipped
    assert "(1,2)" in skipped  # needs 3*m* = 9 > 6


def test_scan_modes_parallel_matches_serial():
    serial = scan_modes((12, 12), m_max=3, task="double", grid_n=64, jobs=1)
    parallel = scan_modes((12, 12), m_max=3, task="double", grid_n=64, jobs=2)
    assert serial == parallel


def test_scan_modes_rejects_unknown_task():
    with pytest.raises(ValueError):
        scan_modes((10, 10), m_max=3, task="quadruple")


# -- exports -----------------------------------------------------------------------


def test_reports_byte_reproducible():
    r1 = scan_modes((12, 12), m_max=3, task="double", grid_n=64)
    r2 = scan_modes((12, 12), m_max=3, task="double", grid_n=64)
    assert atlas_json(r1) == atlas_json(r2)
    assert curves_csv(r1.entries) == curves_csv(r2.entries)


def test_curves_csv_block_structure():
    report = scan_modes((10, 10), m_max=4, task="curves", grid_n=64)
    text = curves_csv(report.entries)
    assert text.count("a,e") == report.total_curves
    for line in text.splitlines():
        if line and not line.startswith("#") and line != "a,e":
            a_str, e_str = line.split(",")
            assert 0.0 < float(a_str) < 1.0
            assert 0.0 < float(e_str) < 1.0


def test_svg_render_structure():
    report = scan_modes((12, 12), m_max=3, task="double", grid_n=64)
    curves_by_j = {}
    inters = []
    for e in report.entries:
        for j, cs in e.curves:
            curves_by_j.setdefault(j, []).extend(cs)
        inters.extend(e.intersections)
    svg = render_svg(curves_by_j, inters, report.min_distance, title="t")
    assert svg.startswith("<svg ")
    assert svg.rstrip().endswith("</svg>")
    assert '<rect width="800"' in svg
    if report.min_distance is not None:
        assert "stroke-dasharray" in svg
    assert render_svg(curves_by_j, inters, report.min_distance, title="t") == svg


def test_intersection_residuals_are_exact_evaluations():
    from hansenatlas.exact import rational
    from hansenatlas.fourier import fourier_coefficient

    (rep,) = find_double(Mode(2, 5), (30, 30), 128)
    for j, residual in zip((1, 2), rep.residuals):
        series = fourier_coefficient(Mode(2 * j, 5 * j), 30, 30)
        exact = abs(float(series.eval_exact(rational(rep.point[0]), rational(rep.point[1]))))
        assert residual == exact
