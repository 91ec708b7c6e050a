"""Zero curves of truncated Fourier coefficients inside the unit square.

The traced object is the normalized coefficient

    fhat_{m,k}(a,e) = f_{m,k}(a,e) / (2 |t_{m,k}| e^{|m-k|} a^{m*}),

whose zero set in (0,1)^2 coincides with that of f_{m,k} away from the axes;
the raw coefficient vanishes identically on e = 0 (for m != k) and a = 0,
which would flood a sign-based tracer with boundary artifacts.

Pipeline per mode: value grid on [delta, 1-delta]^2 -> marching squares with
per-edge bisection -> chained polylines (ZeroCurve) -> pairwise-proximity
seeds -> damped Newton on the exact-series Jacobian (IntersectionReport) ->
near-triple triangles with area/incenter/inradius (TriangleReport).  A triple
zero is certified only when a Gauss-Newton solve of the full 3-system reaches
residuals <= RESIDUAL_TOL on all three coefficients.

Everything is deterministic: grids, seed ordering, Newton damping and the
report ordering are all fixed functions of the input.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .exact import rational
from .fourier import Mode, fourier_coefficient, g2_modes, t_mk
from .series import SeriesAE

log = logging.getLogger("hansenatlas.atlas")

EPS_CURVE = 1e-9
RESIDUAL_TOL = 1e-12
DEDUPE_TOL = 1e-6
DEFAULT_GRID = 512
NEWTON_MAX_ITER = 50
NEWTON_DAMPING = 0.5
BISECT_ITER = 54
TRIANGLE_AREA_THRESHOLD = 1e-3
MMAX_CURVES = 12
MMAX_TRIPLES = 8


# ---------------------------------------------------------------------------
# Float evaluation of exact series
# ---------------------------------------------------------------------------


class PolyEval:
    """Double-precision Horner evaluation (in a, then in e) of a SeriesAE."""

    def __init__(self, series: SeriesAE):
        self.trunc_a = series.trunc_a
        self.trunc_e = series.trunc_e
        C = np.zeros((series.trunc_a + 1, series.trunc_e + 1))
        for (n, q), v in series.c.items():
            C[n, q] = float(v)
        self.C = C
        self._rows = None

    def on_grid(self, avec: np.ndarray, evec: np.ndarray) -> np.ndarray:
        """Values V[i,j] = p(avec[i], evec[j])."""
        R = np.zeros((len(avec), self.trunc_e + 1))
        for n in range(self.trunc_a, -1, -1):
            R *= avec[:, None]
            R += self.C[n][None, :]
        V = np.zeros((len(avec), len(evec)))
        for q in range(self.trunc_e, -1, -1):
            V *= evec[None, :]
            V += R[:, q][:, None]
        return V

    def at(self, a: np.ndarray, e: np.ndarray) -> np.ndarray:
        """Values at paired points (a[i], e[i])."""
        a = np.asarray(a, dtype=float)
        e = np.asarray(e, dtype=float)
        R = np.zeros(a.shape + (self.trunc_e + 1,))
        for n in range(self.trunc_a, -1, -1):
            R *= a[..., None]
            R += self.C[n][None, :] if a.ndim == 1 else self.C[n]
        v = np.zeros_like(a)
        for q in range(self.trunc_e, -1, -1):
            v *= e
            v += R[..., q]
        return v

    def at_point(self, a: float, e: float) -> float:
        """Pure-Python scalar Horner (same scheme as `at`, no array overhead).

        Rows exploit the parity gaps: per a-exponent n, the e-coefficients are
        stored from their lowest exponent with step 2 and evaluated in e^2.
        """
        rows = self._rows
        if rows is None:
            rows = self._build_rows()
        e2 = e * e
        acc = 0.0
        prev_n = None
        for n, qlow, step2, coeffs in rows:
            if prev_n is not None:
                acc *= a ** (prev_n - n)
            inner = 0.0
            x = e2 if step2 else e
            for c in coeffs:
                inner = inner * x + c
            acc += inner * e**qlow
            prev_n = n
        if prev_n is None:
            return 0.0
        return acc * a**prev_n

    def _build_rows(self):
        by_n: Dict[int, Dict[int, float]] = {}
        for n in range(self.trunc_a + 1):
            row = self.C[n]
            nz = np.nonzero(row)[0]
            if len(nz):
                by_n[n] = {int(q): float(row[q]) for q in nz}
        rows = []
        for n in sorted(by_n, reverse=True):
            row = by_n[n]
            qlow = min(row)
            qhigh = max(row)
            step2 = all((q - qlow) % 2 == 0 for q in row)
            step = 2 if step2 else 1
            coeffs = [row.get(q, 0.0) for q in range(qhigh, qlow - 1, -step)]
            rows.append((n, qlow, step2, coeffs))
        self._rows = rows
        return rows


class ModeSurface:
    """One mode's truncated coefficient with its normalization and derivatives."""

    def __init__(self, mode: Mode, order: Tuple[int, int]):
        self.mode = mode
        self.order = order
        self.series = fourier_coefficient(mode, order[0], order[1])
        self.poly = PolyEval(self.series)
        self.da = PolyEval(self.series.derivative_a())
        self.de = PolyEval(self.series.derivative_e())
        t = t_mk(mode)
        self.norm_scale = 2.0 * abs(float(t.t_value))
        self.a_power = t.leading_a_power
        self.e_power = t.leading_e_power
        if self.norm_scale == 0.0:
            log.error("normalization scale vanishes for mode %s", mode)
            self.norm_scale = 1.0

    def visible(self) -> bool:
        return not self.series.is_zero()

    def norm(self, a: np.ndarray, e: np.ndarray) -> np.ndarray:
        return self.norm_scale * np.power(a, self.a_power) * np.power(e, self.e_power)

    def normalized_grid(self, avec: np.ndarray, evec: np.ndarray) -> np.ndarray:
        raw = self.poly.on_grid(avec, evec)
        denom = self.norm_scale * np.power(avec, self.a_power)[:, None] * np.power(
            evec, self.e_power
        )[None, :]
        return raw / denom

    def normalized_at(self, a: np.ndarray, e: np.ndarray) -> np.ndarray:
        return self.poly.at(a, e) / self.norm(a, e)

    def normalized_value_and_jac(
        self, a: float, e: float
    ) -> Tuple[float, float, float]:
        """fhat and its partials; d(f/nm)/da = (f_a - p_a f / a)/nm etc."""
        f = self.poly.at_point(a, e)
        fa = self.da.at_point(a, e)
        fe = self.de.at_point(a, e)
        nm = self.norm_scale * a**self.a_power * e**self.e_power
        return (
            f / nm,
            (fa - self.a_power * f / a) / nm,
            (fe - self.e_power * f / e) / nm,
        )

    def residual_exact(self, a: float, e: float) -> float:
        """|f(a,e)| evaluated in exact rational arithmetic at the dyadic point."""
        return abs(float(self.series.eval_exact(rational(a), rational(e))))


# ---------------------------------------------------------------------------
# Report types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ZeroCurve:
    """Ordered polyline approximating one connected component of {f_{m,k} = 0}."""

    mode: Mode
    order: Tuple[int, int]
    points: Tuple[Tuple[float, float], ...]
    closed: bool


@dataclass(frozen=True)
class IntersectionReport:
    """A refined common zero of f_{jm,jk} for the j's in `multiples`."""

    mode: Mode
    multiples: Tuple[int, ...]
    point: Tuple[float, float]
    residuals: Tuple[float, ...]
    newton_iterations: int


@dataclass(frozen=True)
class TriangleReport:
    """Triple-proximity triangle built from the three pairwise intersections."""

    mode: Mode
    order: Tuple[int, int]
    vertices: Tuple[Tuple[float, float], ...]
    area: float
    incenter: Tuple[float, float]
    inradius: float


@dataclass(frozen=True)
class TripleZeroCertificate:
    mode: Mode
    order: Tuple[int, int]
    point: Tuple[float, float]
    residuals: Tuple[float, float, float]


# ---------------------------------------------------------------------------
# Grid evaluation and marching squares
# ---------------------------------------------------------------------------


def grid_axis(grid_n: int) -> np.ndarray:
    """grid_n uniform samples of [delta, 1-delta] with delta = 1/grid_n."""
    delta = 1.0 / grid_n
    return np.linspace(delta, 1.0 - delta, grid_n)


def eval_grid(mode: Mode, order: Tuple[int, int], grid_n: int = DEFAULT_GRID) -> np.ndarray:
    """Normalized coefficient values on the uniform grid (rows: a, columns: e)."""
    if grid_n < 16:
        raise ValueError(f"grid_n must be at least 16, got {grid_n}")
    surf = ModeSurface(mode, order)
    ax = grid_axis(grid_n)
    return surf.normalized_grid(ax, ax)


def _bisect_edges(
    surf: ModeSurface,
    a_lo: np.ndarray,
    e_lo: np.ndarray,
    a_hi: np.ndarray,
    e_hi: np.ndarray,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Bisect f-hat along straight edges with a sign change; returns (a, e, value)."""
    f_lo = surf.normalized_at(a_lo, e_lo)
    lo = np.zeros_like(a_lo)
    hi = np.ones_like(a_lo)
    neg_lo = f_lo < 0
    for _ in range(BISECT_ITER):
        mid = 0.5 * (lo + hi)
        am = a_lo + mid * (a_hi - a_lo)
        em = e_lo + mid * (e_hi - e_lo)
        fm = surf.normalized_at(am, em)
        go_right = (fm < 0) == neg_lo
        lo = np.where(go_right, mid, lo)
        hi = np.where(go_right, hi, mid)
    mid = 0.5 * (lo + hi)
    am = a_lo + mid * (a_hi - a_lo)
    em = e_lo + mid * (e_hi - e_lo)
    return am, em, surf.normalized_at(am, em)


_CORNER_EDGES = {
    # corner -> (edge adjacent along a, edge adjacent along e); corners labelled
    # by (da, de) offsets inside one cell
    (0, 0): ("B", "L"),
    (1, 0): ("B", "R"),
    (0, 1): ("T", "L"),
    (1, 1): ("T", "R"),
}


def trace_curves(
    mode: Mode,
    order: Tuple[int, int],
    grid_n: int = DEFAULT_GRID,
    eps: float = EPS_CURVE,
) -> List[ZeroCurve]:
    """Marching-squares zero curves of the normalized coefficient.

    Each cell-edge sign change is refined by bisection to |fhat| <= eps, cell
    segments are derived from the corner sign pattern (saddles resolved by the
    cell-center value) and chained into open or closed polylines.
    """
    return trace_surface(ModeSurface(mode, order), grid_n, eps)


def trace_surface(surf, grid_n: int = DEFAULT_GRID, eps: float = EPS_CURVE) -> List[ZeroCurve]:
    """Tracer core; `surf` needs mode/order attributes, visible(),
    normalized_grid(avec, evec) and normalized_at(a, e)."""
    if grid_n < 16:
        raise ValueError(f"grid_n must be at least 16, got {grid_n}")
    mode, order = surf.mode, surf.order
    if not surf.visible():
        return []
    ax = grid_axis(grid_n)
    V = surf.normalized_grid(ax, ax)
    S = V > 0.0

    # edge ids: ("a", i, j) crosses between nodes (i,j)-(i+1,j);
    #           ("e", i, j) between (i,j)-(i,j+1)
    a_change = S[:-1, :] != S[1:, :]
    e_change = S[:, :-1] != S[:, 1:]
    ai, aj = np.nonzero(a_change)
    ei, ej = np.nonzero(e_change)
    if len(ai) == 0 and len(ei) == 0:
        return []

    a_lo = np.concatenate([ax[ai], ax[ei]])
    e_lo = np.concatenate([ax[aj], ax[ej]])
    a_hi = np.concatenate([ax[ai + 1], ax[ei]])
    e_hi = np.concatenate([ax[aj], ax[ej + 1]])
    pa, pe, pv = _bisect_edges(surf, a_lo, e_lo, a_hi, e_hi)

    points: Dict[Tuple[str, int, int], Tuple[float, float]] = {}
    ok = np.abs(pv) <= eps
    n_a = len(ai)
    for idx in range(len(pa)):
        if not ok[idx]:
            continue
        if idx < n_a:
            key = ("a", int(ai[idx]), int(aj[idx]))
        else:
            key = ("e", int(ei[idx - n_a]), int(ej[idx - n_a]))
        points[key] = (float(pa[idx]), float(pe[idx]))
    dropped = int(len(pa) - ok.sum())
    if dropped:
        log.info("mode %s order %s: %d edge crossings above eps dropped", mode, order, dropped)

    # cells with any crossing edge
    cells = set()
    for i, j in zip(ai, aj):
        if j > 0:
            cells.add((int(i), int(j) - 1))
        if j < grid_n - 1:
            cells.add((int(i), int(j)))
    for i, j in zip(ei, ej):
        if i > 0:
            cells.add((int(i) - 1, int(j)))
        if i < grid_n - 1:
            cells.add((int(i), int(j)))

    def cell_edge_key(i: int, j: int, name: str) -> Tuple[str, int, int]:
        if name == "B":
            return ("a", i, j)
        if name == "T":
            return ("a", i, j + 1)
        if name == "L":
            return ("e", i, j)
        return ("e", i + 1, j)

    segments: List[Tuple[Tuple[str, int, int], Tuple[str, int, int]]] = []
    saddle_cells = 0
    for (i, j) in sorted(cells):
        s00, s10 = S[i, j], S[i + 1, j]
        s01, s11 = S[i, j + 1], S[i + 1, j + 1]
        crossing = []
        if s00 != s10:
            crossing.append("B")
        if s01 != s11:
            crossing.append("T")
        if s00 != s01:
            crossing.append("L")
        if s10 != s11:
            crossing.append("R")
        keys = {name: cell_edge_key(i, j, name) for name in crossing}
        if any(keys[name] not in points for name in crossing):
            continue
        if len(crossing) == 2:
            segments.append((keys[crossing[0]], keys[crossing[1]]))
        elif len(crossing) == 4:
            saddle_cells += 1
            ac = 0.5 * (ax[i] + ax[i + 1])
            ec = 0.5 * (ax[j] + ax[j + 1])
            center_pos = surf.normalized_at(np.array([ac]), np.array([ec]))[0] > 0.0
            corner_sign = {(0, 0): s00, (1, 0): s10, (0, 1): s01, (1, 1): s11}
            for corner, (ea, eb) in _CORNER_EDGES.items():
                if corner_sign[corner] != center_pos:
                    segments.append((cell_edge_key(i, j, ea), cell_edge_key(i, j, eb)))
    if saddle_cells:
        log.info("mode %s order %s: %d saddle cells resolved by center value", mode, order, saddle_cells)

    # chain segments into polylines
    adjacency: Dict[Tuple[str, int, int], List[Tuple[str, int, int]]] = {}
    for u, v in segments:
        adjacency.setdefault(u, []).append(v)
        adjacency.setdefault(v, []).append(u)
    for nbrs in adjacency.values():
        nbrs.sort()

    visited = set()
    curves: List[ZeroCurve] = []

    def walk(start: Tuple[str, int, int]) -> Tuple[List[Tuple[str, int, int]], bool]:
        chain = [start]
        visited.add(start)
        cur, prev = start, None
        while True:
            nxt = None
            for cand in adjacency[cur]:
                if cand != prev and (cand not in visited or cand == start):
                    nxt = cand
                    break
            if nxt is None or (nxt == start and len(chain) > 2):
                return chain, nxt == start
            if nxt in visited:
                return chain, False
            chain.append(nxt)
            visited.add(nxt)
            prev, cur = cur, nxt

    endpoints = sorted(k for k, nbrs in adjacency.items() if len(nbrs) == 1)
    for start in endpoints:
        if start not in visited:
            chain, _ = walk(start)
            curves.append(
                ZeroCurve(mode, order, tuple(points[k] for k in chain), False)
            )
    for start in sorted(adjacency):
        if start not in visited:
            chain, is_closed = walk(start)
            curves.append(
                ZeroCurve(mode, order, tuple(points[k] for k in chain), is_closed)
            )
    curves.sort(key=lambda c: c.points[0])
    return curves


# ---------------------------------------------------------------------------
# Intersections
# ---------------------------------------------------------------------------


def _trace_surface(surf: ModeSurface, grid_n: int, eps: float) -> List[ZeroCurve]:
    return trace_surface(surf, grid_n, eps)


def _proximity_seeds(
    curves1: Sequence[ZeroCurve], curves2: Sequence[ZeroCurve], radius: float
) -> List[Tuple[float, float]]:
    """Midpoints of cross-curve point pairs closer than `radius`, deduplicated."""
    pts1 = [p for c in curves1 for p in c.points]
    pts2 = [p for c in curves2 for p in c.points]
    if not pts1 or not pts2:
        return []
    buckets: Dict[Tuple[int, int], List[Tuple[float, float]]] = {}
    for p in pts2:
        key = (int(p[0] / radius), int(p[1] / radius))
        buckets.setdefault(key, []).append(p)
    lattice = radius / 2.0
    seeds: Dict[Tuple[int, int], Tuple[float, float]] = {}
    for p in pts1:
        i0, j0 = int(p[0] / radius), int(p[1] / radius)
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                for q in buckets.get((i0 + di, j0 + dj), ()):
                    if math.hypot(p[0] - q[0], p[1] - q[1]) < radius:
                        mid = ((p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0)
                        cell = (round(mid[0] / lattice), round(mid[1] / lattice))
                        seeds.setdefault(cell, mid)
    return sorted(seeds.values())


def _polyline_distance(curves: Sequence[ZeroCurve], point: Tuple[float, float]) -> float:
    best = math.inf
    for c in curves:
        for p in c.points:
            d = math.hypot(p[0] - point[0], p[1] - point[1])
            if d < best:
                best = d
    return best


NORMALIZED_NEWTON_TOL = 1e-13


def _newton_system(
    surfs: Sequence[ModeSurface], seed: Tuple[float, float]
) -> Optional[Tuple[Tuple[float, float], Tuple[float, ...], int]]:
    """Damped (Gauss-)Newton refinement; returns (point, exact raw residuals, iters).

    The iteration runs on the normalized coefficients (which have transversal
    zeros where the raw ones vanish to high order near the axes, so spurious
    absolute-residual solutions never converge).  The final point must satisfy
    |fhat_j| <= EPS_CURVE for every surface and, after a few polish steps with
    exactly-evaluated residuals, |f_j| <= RESIDUAL_TOL.  None on divergence.
    """
    x = np.array(seed, dtype=float)

    def fhat_jac(pt: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        rows = [s.normalized_value_and_jac(pt[0], pt[1]) for s in surfs]
        return (
            np.array([r[0] for r in rows]),
            np.array([[r[1], r[2]] for r in rows]),
        )

    def f_exact(pt: np.ndarray) -> np.ndarray:
        return np.array(
            [
                float(s.series.eval_exact(rational(pt[0]), rational(pt[1])))
                for s in surfs
            ]
        )

    def raw_jac(pt: np.ndarray) -> np.ndarray:
        return np.array(
            [
                [s.da.at_point(pt[0], pt[1]), s.de.at_point(pt[0], pt[1])]
                for s in surfs
            ]
        )

    def step_from(F: np.ndarray, J: np.ndarray) -> Optional[np.ndarray]:
        try:
            if len(surfs) == 2:
                return np.linalg.solve(J, -F)
            return np.linalg.lstsq(J, -F, rcond=None)[0]
        except np.linalg.LinAlgError:
            return None

    iterations = 0
    stagnant = 0
    F, J = fhat_jac(x)
    for _ in range(NEWTON_MAX_ITER):
        fmax = np.max(np.abs(F))
        if fmax <= NORMALIZED_NEWTON_TOL:
            break
        step = step_from(F, J)
        if step is None:
            return None
        lam = 1.0
        accepted = False
        for _ in range(40):
            xn = x + lam * step
            if 0.0 < xn[0] < 1.0 and 0.0 < xn[1] < 1.0:
                Fn, Jn = fhat_jac(xn)
                if np.max(np.abs(Fn)) < fmax or np.max(np.abs(Fn)) <= NORMALIZED_NEWTON_TOL:
                    x, F, J = xn, Fn, Jn
                    accepted = True
                    break
            lam *= NEWTON_DAMPING
        iterations += 1
        if not accepted:
            return None
        # seeds sitting on near-tangent curve pairs creep without converging
        stagnant = stagnant + 1 if np.max(np.abs(F)) > 0.5 * fmax else 0
        if stagnant >= 6:
            return None
    if np.max(np.abs(F)) > NORMALIZED_NEWTON_TOL:
        return None
    # exact raw residuals (float Horner roundoff can hide above the tolerance)
    Fe = f_exact(x)
    polish = 0
    while np.max(np.abs(Fe)) > RESIDUAL_TOL and polish < 10:
        step = step_from(Fe, raw_jac(x))
        if step is None:
            return None
        xn = x + step
        if not (0.0 < xn[0] < 1.0 and 0.0 < xn[1] < 1.0):
            return None
        x = xn
        Fe = f_exact(x)
        polish += 1
        iterations += 1
    if np.max(np.abs(Fe)) > RESIDUAL_TOL:
        return None
    fhat_final, _ = fhat_jac(x)
    if np.max(np.abs(fhat_final)) > EPS_CURVE:
        return None
    return (float(x[0]), float(x[1])), tuple(abs(float(v)) for v in Fe), iterations


def _dedupe_points(
    results: List[Tuple[Tuple[float, float], Tuple[float, ...], int]]
) -> List[Tuple[Tuple[float, float], Tuple[float, ...], int]]:
    out: List[Tuple[Tuple[float, float], Tuple[float, ...], int]] = []
    for item in sorted(results, key=lambda r: r[0]):
        if all(
            math.hypot(item[0][0] - kept[0][0], item[0][1] - kept[0][1]) > DEDUPE_TOL
            for kept in out
        ):
            out.append(item)
    return out


def _refine_pair(
    surf_a: ModeSurface,
    surf_b: ModeSurface,
    curves_a: Sequence[ZeroCurve],
    curves_b: Sequence[ZeroCurve],
    grid_n: int,
    multiples: Tuple[int, ...],
) -> List[IntersectionReport]:
    radius = 2.0 / grid_n
    seeds = _proximity_seeds(curves_a, curves_b, radius)
    refined = []
    for seed in seeds:
        res = _newton_system((surf_a, surf_b), seed)
        if res is None:
            log.info(
                "mode %s %s: Newton dropped seed (%.6f, %.6f)",
                surf_a.mode,
                multiples,
                seed[0],
                seed[1],
            )
            continue
        refined.append(res)
    reports = []
    for point, residuals, iters in _dedupe_points(refined):
        if (
            _polyline_distance(curves_a, point) <= radius
            and _polyline_distance(curves_b, point) <= radius
        ):
            reports.append(
                IntersectionReport(surf_a.mode, multiples, point, residuals, iters)
            )
        else:
            log.info("mode %s: refined point strayed from parent polylines", surf_a.mode)
    return reports


def find_double(
    mode: Mode, order: Tuple[int, int], grid_n: int = DEFAULT_GRID
) -> List[IntersectionReport]:
    """Common zeros of f_{m,k} and f_{2m,2k} for a coprime-set mode."""
    if not mode.in_g2:
        raise ValueError(f"find_double needs a coprime-set mode, got {mode}")
    surf1 = ModeSurface(mode, order)
    surf2 = ModeSurface(mode.multiple(2), order)
    if not (surf1.visible() and surf2.visible()):
        return []
    curves1 = _trace_surface(surf1, grid_n, EPS_CURVE)
    curves2 = _trace_surface(surf2, grid_n, EPS_CURVE)
    return _refine_pair(surf1, surf2, curves1, curves2, grid_n, (1, 2))


# ---------------------------------------------------------------------------
# Triangles and triples
# ---------------------------------------------------------------------------


def triangle_metrics(
    vertices: Sequence[Tuple[float, float]]
) -> Tuple[float, Tuple[float, float], float]:
    """(area, incenter, inradius); degenerate triangles give zero area/inradius."""
    (x1, y1), (x2, y2), (x3, y3) = vertices
    area = 0.5 * abs((x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1))
    l1 = math.hypot(x2 - x3, y2 - y3)
    l2 = math.hypot(x1 - x3, y1 - y3)
    l3 = math.hypot(x1 - x2, y1 - y2)
    perimeter = l1 + l2 + l3
    if perimeter == 0.0:
        return 0.0, (x1, y1), 0.0
    incenter = (
        (l1 * x1 + l2 * x2 + l3 * x3) / perimeter,
        (l1 * y1 + l2 * y2 + l3 * y3) / perimeter,
    )
    return area, incenter, area / (perimeter / 2.0)


@dataclass(frozen=True)
class TripleResult:
    """Pairwise intersections, near-triple triangles and any certified triple zero."""

    mode: Mode
    order: Tuple[int, int]
    pair_reports: Tuple[Tuple[Tuple[int, int], Tuple[IntersectionReport, ...]], ...]
    triangles: Tuple[TriangleReport, ...]
    certificates: Tuple[TripleZeroCertificate, ...]

    def pair(self, j1: int, j2: int) -> Tuple[IntersectionReport, ...]:
        for key, reports in self.pair_reports:
            if key == (j1, j2):
                return reports
        return ()


def find_triple(
    mode: Mode, order: Tuple[int, int], grid_n: int = DEFAULT_GRID
) -> TripleResult:
    """Pairwise zeros of f_{jm,jk} (j = 1,2,3), their proximity triangles, and
    triple-zero certification attempts."""
    if not mode.in_g2:
        raise ValueError(f"find_triple needs a coprime-set mode, got {mode}")
    surfs = {j: ModeSurface(mode.multiple(j), order) for j in (1, 2, 3)}
    curves = {
        j: (_trace_surface(s, grid_n, EPS_CURVE) if s.visible() else [])
        for j, s in surfs.items()
    }
    pair_reports = []
    for (j1, j2) in ((1, 2), (1, 3), (2, 3)):
        reports = _refine_pair(
            surfs[j1], surfs[j2], curves[j1], curves[j2], grid_n, (j1, j2)
        )
        pair_reports.append(((j1, j2), tuple(reports)))

    p12, p13, p23 = (r for _, r in pair_reports)
    triangles: List[TriangleReport] = []
    if p12 and p13 and p23:
        combos = []
        if len(p12) * len(p13) * len(p23) <= 50000:
            pool = [(r1, r2, r3) for r1 in p12 for r2 in p13 for r3 in p23]
        else:  # nearest-neighbour matching for pathological point counts
            pool = []
            for r1 in p12:
                r2 = min(p13, key=lambda r: _dist(r.point, r1.point))
                r3 = min(p23, key=lambda r: _dist(r.point, r1.point))
                pool.append((r1, r2, r3))
        for r1, r2, r3 in pool:
            verts = (r1.point, r2.point, r3.point)
            perim = (
                _dist(verts[0], verts[1])
                + _dist(verts[0], verts[2])
                + _dist(verts[1], verts[2])
            )
            combos.append((perim, verts))
        combos.sort(key=lambda c: (c[0], c[1]))
        seen = set()
        for rank, (perim, verts) in enumerate(combos):
            area, incenter, inradius = triangle_metrics(verts)
            if rank > 0 and area >= TRIANGLE_AREA_THRESHOLD:
                continue
            key = tuple(sorted(verts))
            if key in seen:
                continue
            seen.add(key)
            triangles.append(
                TriangleReport(mode, order, verts, area, incenter, inradius)
            )

    certificates: List[TripleZeroCertificate] = []
    for tri in triangles[:5]:
        res = _newton_system((surfs[1], surfs[2], surfs[3]), tri.incenter)
        if res is not None:
            point, residuals, _ = res
            certificates.append(
                TripleZeroCertificate(mode, order, point, residuals)  # type: ignore[arg-type]
            )
    return TripleResult(
        mode, order, tuple(pair_reports), tuple(triangles), tuple(certificates)
    )


def _dist(p: Tuple[float, float], q: Tuple[float, float]) -> float:
    return math.hypot(p[0] - q[0], p[1] - q[1])


# ---------------------------------------------------------------------------
# Mode scans
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ModeScanEntry:
    mode: Mode
    skipped: bool
    reason: str
    curves: Tuple[Tuple[int, Tuple[ZeroCurve, ...]], ...]
    intersections: Tuple[IntersectionReport, ...]
    triangles: Tuple[TriangleReport, ...]
    certificates: Tuple[TripleZeroCertificate, ...]

    @property
    def curve_count(self) -> int:
        return sum(len(cs) for _, cs in self.curves)

    @property
    def min_distance(self) -> Optional[float]:
        if not self.intersections:
            return None
        return min(math.hypot(r.point[0], r.point[1]) for r in self.intersections)


@dataclass(frozen=True)
class AtlasReport:
    task: str
    order: Tuple[int, int]
    grid_n: int
    m_max: int
    entries: Tuple[ModeScanEntry, ...]

    @property
    def total_curves(self) -> int:
        return sum(e.curve_count for e in self.entries)

    @property
    def min_distance(self) -> Optional[float]:
        dists = [e.min_distance for e in self.entries if e.min_distance is not None]
        return min(dists) if dists else None

    @property
    def certified(self) -> Tuple[TripleZeroCertificate, ...]:
        return tuple(c for e in self.entries for c in e.certificates)


def _scan_one(args: Tuple[Mode, str, Tuple[int, int], int]) -> ModeScanEntry:
    mode, task, order, grid_n = args
    trunc_a, trunc_e = order
    if task == "curves":
        needed_a, needed_e = mode.m_star, abs(mode.m - mode.k)
    elif task == "double":
        needed_a, needed_e = 2 * mode.m_star, 2 * abs(mode.m - mode.k)
    else:
        needed_a, needed_e = 3 * mode.m_star, 3 * abs(mode.m - mode.k)
    if trunc_a < needed_a or trunc_e < needed_e:
        return ModeScanEntry(mode, True, "below visibility order", (), (), (), ())
    if task == "curves":
        curves = trace_curves(mode, order, grid_n)
        return ModeScanEntry(mode, False, "", ((1, tuple(curves)),), (), (), ())
    if task == "double":
        surf1 = ModeSurface(mode, order)
        surf2 = ModeSurface(mode.multiple(2), order)
        c1 = _trace_surface(surf1, grid_n, EPS_CURVE) if surf1.visible() else []
        c2 = _trace_surface(surf2, grid_n, EPS_CURVE) if surf2.visible() else []
        reports = _refine_pair(surf1, surf2, c1, c2, grid_n, (1, 2))
        return ModeScanEntry(
            mode,
            False,
            "",
            ((1, tuple(c1)), (2, tuple(c2))),
            tuple(reports),
            (),
            (),
        )
    result = find_triple(mode, order, grid_n)
    curves = tuple(
        (j, tuple(trace_curves(mode.multiple(j), order, grid_n))) for j in (1, 2, 3)
    )
    intersections = tuple(r for _, reports in result.pair_reports for r in reports)
    return ModeScanEntry(
        mode, False, "", curves, intersections, result.triangles, result.certificates
    )


def scan_modes(
    order: Tuple[int, int],
    m_max: Optional[int] = None,
    task: str = "curves",
    grid_n: int = DEFAULT_GRID,
    jobs: int = 1,
    modes: Optional[Sequence[Mode]] = None,
) -> AtlasReport:
    """Run one task over every coprime-set mode with |m|+|k| <= m_max.

    Skips modes whose leading monomial is invisible at this order; `jobs` > 1
    distributes modes over worker processes (results keep the input order).
    """
    if task not in ("curves", "double", "triple"):
        raise ValueError(f"unknown task {task!r}")
    if m_max is None:
        m_max = MMAX_TRIPLES if task == "triple" else MMAX_CURVES
    mode_list = list(modes) if modes is not None else g2_modes(m_max)
    args = [(mode, task, order, grid_n) for mode in mode_list]
    if jobs > 1 and len(args) > 1:
        import multiprocessing as mp

        with mp.get_context("fork").Pool(jobs) as pool:
            entries = pool.map(_scan_one, args, chunksize=1)
    else:
        entries = [_scan_one(a) for a in args]
    return AtlasReport(task, order, grid_n, m_max, tuple(entries))
