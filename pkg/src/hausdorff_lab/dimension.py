"""Dimension estimators: similarity-equation root finding, box counting with
log-log regression, and a critical-exponent scan over (s, eps) sweeps.

Box counting reports the minimal number of origin-anchored closed grid cells
needed to cover a cloud.  Cell membership is exact: a coordinate that is an
exact multiple of the cell side lies on a grid boundary and belongs to both
adjacent cells, and the counter may use either.  In one dimension the greedy
sweep below returns the true minimum; in higher dimensions boundary points
are resolved greedily, which matches the minimum whenever no point sits on a
grid hyperplane (the generic case).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .measure import (
    DEFAULT_THRESHOLDS,
    TREND_CONVERGING,
    TREND_DIVERGING,
    TREND_UNDETERMINED,
    TREND_VANISHING,
    ScaleSweep,
    TrendThresholds,
    scale_sweep,
)
from .sets import CsvFormatError, PointCloud, format_g17

METHOD_MORAN = "moran"
METHOD_BOX_REGRESSION = "box-regression"
METHOD_CRITICAL_SCAN = "critical-scan"

BISECTION_LO = 0.0
BISECTION_HI = 64.0
BISECTION_MAX_ITER = 200
MORAN_RESIDUAL_TOL = 1e-12


@dataclass(frozen=True)
class RegressionResult:
    slope: float
    intercept: float
    r_squared: float
    n_points: int


@dataclass(frozen=True)
class DimensionEstimate:
    value: float
    method: str
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("dimension estimates are non-negative")
        if self.method not in (METHOD_MORAN, METHOD_BOX_REGRESSION, METHOD_CRITICAL_SCAN):
            raise ValueError(f"unknown method {self.method!r}")


# ---------------------------------------------------------------------------
# Similarity dimension: the unique root of sum(r_i^s) = 1
# ---------------------------------------------------------------------------


def moran_dimension(ratios: Sequence[float]) -> DimensionEstimate:
    """Solve sum(r_i^s) = 1 for s >= 0 by bisection.

    The map s -> sum(r_i^s) is strictly decreasing from m at s=0, so the root
    is unique; a single map gives s = 0 directly.  The accepted root carries
    a certified sign-change bracket and a residual below 1e-12.
    """
    rs = [float(r) for r in ratios]
    if not rs:
        raise ValueError("at least one contraction ratio is required")
    for r in rs:
        if not (0.0 < r < 1.0):
            raise ValueError(f"contraction ratios must lie in (0,1), got {r}")

    def f(s: float) -> float:
        return math.fsum(r**s for r in rs) - 1.0

    if len(rs) == 1:
        return DimensionEstimate(
            0.0, METHOD_MORAN, {"residual": 0.0, "bracket": (0.0, 0.0), "iterations": 0}
        )
    lo, hi = BISECTION_LO, BISECTION_HI
    flo, fhi = f(lo), f(hi)
    if fhi > 0:
        raise ValueError("similarity dimension exceeds the bisection domain [0, 64]")
    iterations = 0
    while hi - lo > 1e-14 and iterations < BISECTION_MAX_ITER:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm > 0:
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
        iterations += 1
    s_hat = 0.5 * (lo + hi)
    residual = f(s_hat)
    if abs(residual) > MORAN_RESIDUAL_TOL:
        raise ArithmeticError(f"bisection failed to certify the root (residual {residual})")
    return DimensionEstimate(
        s_hat,
        METHOD_MORAN,
        {"residual": residual, "bracket": (lo, hi), "iterations": iterations},
    )


# ---------------------------------------------------------------------------
# Box counting
# ---------------------------------------------------------------------------


def _cell_candidates_exact(coord: Fraction, eps: Fraction) -> tuple[int, ...]:
    q = coord / eps
    if q.denominator == 1:
        m = q.numerator
        return (m - 1, m)
    return (math.floor(q),)


def box_count(cloud: PointCloud, eps) -> int:
    """Minimal number of closed eps-cells (origin-anchored) covering the cloud.

    Exact-rational inputs take an exact path so that boundary membership is
    decided without rounding; float clouds go through a vectorized path with
    the same convention.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if len(cloud) == 0:
        return 0
    wants_exact = isinstance(eps, (int, Fraction)) or not cloud.is_float
    if wants_exact and len(cloud) <= 20_000:
        epsq = Fraction(eps)
        cands = []
        for p in sorted(cloud.points):
            cands.append(tuple(_cell_candidates_exact(Fraction(c), epsq) for c in p))
        return _greedy_min_cells(cands)
    arr = cloud.as_array()
    e = float(eps)
    q = arr / e
    fl = np.floor(q)
    boundary = q == fl
    ambiguous_rows = boundary.any(axis=1)
    cells = set(map(tuple, fl[~ambiguous_rows].astype(np.int64)))
    if not ambiguous_rows.any():
        return len(cells)
    amb = sorted(
        (tuple(int(v) for v in fl[i]), tuple(bool(b) for b in boundary[i]))
        for i in np.nonzero(ambiguous_rows)[0]
    )
    cands = [
        tuple((f - 1, f) if b else (f,) for f, b in zip(fs, bs)) for fs, bs in amb
    ]
    return _greedy_min_cells(cands, preoccupied=cells)


def _greedy_min_cells(cands: list[tuple[tuple[int, ...], ...]], preoccupied: set | None = None) -> int:
    """Point-sorted greedy cell cover; picks the largest containing cell when a
    point is not yet covered (the rightmost-cell rule, optimal in 1-D)."""
    occupied = set(preoccupied) if preoccupied else set()
    for per_axis in cands:
        options = list(product(*per_axis))
        if any(cell in occupied for cell in options):
            continue
        occupied.add(max(options))
    return len(occupied)


def box_counting_dimension(
    cloud: PointCloud, eps_schedule: Iterable
) -> DimensionEstimate:
    """Least-squares slope of log N(eps) against log(1/eps).

    Scale selection is the dominant bias knob of this estimator, so the
    schedule is taken as-is from the caller and recorded in the diagnostics;
    no automatic range picking.  Scales with zero count are dropped with a
    warning; fewer than 3 usable scales is an error.
    """
    schedule = [e for e in eps_schedule]
    if len(schedule) < 3:
        raise ValueError("need at least 3 scales for a regression")
    for a, b in zip(schedule, schedule[1:]):
        if not b < a:
            raise ValueError("eps schedule must be strictly decreasing")
    counts = []
    used = []
    for e in schedule:
        c = box_count(cloud, e)
        if c == 0:
            warnings.warn(f"scale {float(e)} has zero occupied cells; dropped")
            continue
        counts.append(c)
        used.append(float(e))
    if len(used) < 3:
        raise ValueError("fewer than 3 usable scales after dropping zero counts")
    x = np.log([1.0 / e for e in used])
    y = np.log(counts)
    if np.allclose(y, y[0]):
        # all counts equal: slope 0 by convention, R^2 undefined
        reg = RegressionResult(0.0, float(y[0]), float("nan"), len(used))
        return DimensionEstimate(
            0.0,
            METHOD_BOX_REGRESSION,
            {"regression": reg, "scales": used, "counts": counts, "degenerate": True},
        )
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_res = float((resid**2).sum())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - ss_res / ss_tot
    reg = RegressionResult(float(slope), float(intercept), r2, len(used))
    return DimensionEstimate(
        max(float(slope), 0.0),
        METHOD_BOX_REGRESSION,
        {"regression": reg, "scales": used, "counts": counts, "degenerate": False},
    )


# ---------------------------------------------------------------------------
# Critical-exponent scan
# ---------------------------------------------------------------------------


def critical_exponent_scan(
    target,
    s_grid: Sequence[float],
    eps_schedule: Iterable,
    thresholds: TrendThresholds = DEFAULT_THRESHOLDS,
) -> DimensionEstimate:
    """Bracket the exponent where sweeps flip from diverging to vanishing.

    The dichotomy defining the critical exponent makes an enclosure the
    honest computable output: the estimate carries [lo, hi] and a midpoint
    (or the exponent itself when some sweep converges to a finite nonzero
    value, the boundary case 0 < H^d < infinity).  With no flip in sight the
    grid boundary is returned, flagged undetermined.
    """
    grid = [float(s) for s in s_grid]
    if not grid:
        raise ValueError("empty exponent grid")
    for a, b in zip(grid, grid[1:]):
        if not b > a:
            raise ValueError("exponent grid must be strictly ascending")
    schedule = list(eps_schedule)
    sweeps: list[ScaleSweep] = [scale_sweep(target, s, schedule, thresholds) for s in grid]
    trends = [sw.trend for sw in sweeps]
    diag = {
        "s_grid": grid,
        "trends": trends,
        "eps_schedule": [float(e) for e in schedule],
    }
    last_div = None
    for s, t in zip(grid, trends):
        if t == TREND_DIVERGING:
            last_div = s
    first_special = None
    for s, t in zip(grid, trends):
        if (last_div is None or s > last_div) and t in (TREND_CONVERGING, TREND_VANISHING):
            first_special = (s, t)
            break
    if first_special is None:
        # no flip observed: report the grid boundary, flagged
        hi = grid[-1]
        lo = last_div if last_div is not None else grid[0]
        diag.update({"bracket": (lo, hi), "status": TREND_UNDETERMINED})
        return DimensionEstimate(hi, METHOD_CRITICAL_SCAN, diag)
    s_star, kind = first_special
    lo = last_div if last_div is not None else 0.0
    if kind == TREND_CONVERGING:
        diag.update({"bracket": (lo, s_star), "status": "converging-at-critical"})
        return DimensionEstimate(s_star, METHOD_CRITICAL_SCAN, diag)
    # vanishing
    if last_div is None:
        # even the smallest probed exponent vanishes: dimension 0
        diag.update({"bracket": (0.0, grid[0]), "status": "vanishing-everywhere"})
        return DimensionEstimate(0.0, METHOD_CRITICAL_SCAN, diag)
    diag.update({"bracket": (lo, s_star), "status": "bracketed"})
    return DimensionEstimate(0.5 * (lo + s_star), METHOD_CRITICAL_SCAN, diag)


# ---------------------------------------------------------------------------
# Report serialization: `method,value,lo,hi,r_squared,n_scales`
# ---------------------------------------------------------------------------

REPORT_HEADER = "method,value,lo,hi,r_squared,n_scales"


def dimension_report_csv(est: DimensionEstimate) -> str:
    lo = hi = ""
    r2 = ""
    n_scales = ""
    d = est.diagnostics
    if "bracket" in d:
        lo, hi = (format_g17(v) for v in d["bracket"])
    if "regression" in d:
        reg: RegressionResult = d["regression"]
        r2 = "nan" if math.isnan(reg.r_squared) else format_g17(reg.r_squared)
        n_scales = str(reg.n_points)
    elif "eps_schedule" in d:
        n_scales = str(len(d["eps_schedule"]))
    return (
        REPORT_HEADER
        + "\n"
        + f"{est.method},{format_g17(est.value)},{lo},{hi},{r2},{n_scales}\n"
    )


def parse_dimension_report(text: str) -> dict:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if len(lines) < 2 or lines[0].strip() != REPORT_HEADER:
        raise CsvFormatError(1, "not a dimension report")
    parts = lines[1].split(",")
    if len(parts) != 6:
        raise CsvFormatError(2, f"expected 6 fields, got {len(parts)}")

    def opt_float(v: str) -> float | None:
        return float(v) if v.strip() else None

    return {
        "method": parts[0],
        "value": float(parts[1]),
        "lo": opt_float(parts[2]),
        "hi": opt_float(parts[3]),
        "r_squared": opt_float(parts[4]),
        "n_scales": int(parts[5]) if parts[5].strip() else None,
    }
