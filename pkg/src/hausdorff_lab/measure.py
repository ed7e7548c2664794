"""Hausdorff pre-measures at a fixed scale, exact on small instances.

``premeasure_finite`` minimizes sum(diam(X)^s) over covers of a subset of a
finite metric space by blocks of diameter <= eps.  ``premeasure_intervals``
does the same for 1-D interval sets, where the admissible blocks form a
continuum; a left-to-right dynamic program over exact rational breakpoints
returns the infimum for s in (0, 1].

Scheduling arithmetic in the interval DP is done in ``fractions.Fraction``
(float inputs are converted exactly), so translated or triadic instances
produce bit-identical block layouts; only the final diam^s costs are floats.
"""

from __future__ import annotations

import heapq
import math
import os
from bisect import bisect_left, bisect_right
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .gauge import Cover, Gauge, OuterMeasureTable, construct_outer_measure, _diam_power
from .sets import (
    CsvFormatError,
    FiniteMetricSpace,
    IntervalSet,
    PointCloud,
    format_g17,
)

EXACT_SUBSET_LIMIT = 20

METHOD_EXACT = "exact-dp"
METHOD_INTERVAL = "interval-dp"
METHOD_BOX = "box-cover"


@dataclass(frozen=True)
class MeasureEstimate:
    """One pre-measure evaluation: value of H^s at scale eps, with provenance."""

    value: float
    exponent_s: float
    scale_eps: float
    method: str
    is_exact: bool

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("measure values are non-negative")
        if self.method not in (METHOD_EXACT, METHOD_INTERVAL, METHOD_BOX):
            raise ValueError(f"unknown method {self.method!r}")
        if self.method == METHOD_BOX and self.is_exact:
            raise ValueError("box covers only bound the infimum from above")


# ---------------------------------------------------------------------------
# Finite metric spaces: partition DP over bitmasks
# ---------------------------------------------------------------------------


def premeasure_finite(space: FiniteMetricSpace, subset, s: float, eps) -> MeasureEstimate:
    """Exact inf of sum(diam^s) over covers of ``subset`` at scale ``eps``.

    An optimal cover may be assumed to be a partition into blocks drawn from
    the subset itself (dropping points from a block never raises its cost),
    so the DP walks bitmasks of still-uncovered points, always extending a
    block from the lowest uncovered one.  Singletons have diameter 0 and are
    always admissible, hence the value is finite; with the 0^0 := 1
    convention the s=0 case counts blocks.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if s < 0:
        raise ValueError("the exponent s must be >= 0")
    idx = space._indices(subset)
    a = len(idx)
    if a == 0:
        return MeasureEstimate(0.0, float(s), float(eps), METHOD_EXACT, True)
    if a > EXACT_SUBSET_LIMIT:
        raise ValueError(f"exact mode limited to {EXACT_SUBSET_LIMIT} points, got {a}")
    d = space.dist[np.ix_(idx, idx)]
    size = 1 << a
    # neighbors within reach of each point; any admissible block containing i
    # is a subset of {i} | nb[i]
    nb = [0] * a
    for i in range(a):
        m = 0
        for j in range(a):
            if j != i and d[i, j] <= eps:
                m |= 1 << j
        nb[i] = m

    # diam over all submasks, built incrementally from the lowest bit
    diam = [0.0] * size
    for mask in range(1, size):
        low = (mask & -mask).bit_length() - 1
        rest = mask & (mask - 1)
        if rest == 0:
            diam[mask] = 0.0
            continue
        md = 0.0
        r = rest
        while r:
            j = (r & -r).bit_length() - 1
            if d[low, j] > md:
                md = d[low, j]
            r &= r - 1
        diam[mask] = md if md > diam[rest] else diam[rest]

    s = float(s)
    best = [0.0] * size
    for mask in range(1, size):
        low = (mask & -mask).bit_length() - 1
        rest = mask & (mask - 1)
        lowbit = 1 << low
        # singleton block {low}
        acc = _diam_power(0.0, s) + best[rest]
        r = rest & nb[low]
        t = r
        while t:
            block = lowbit | t
            dm = diam[block]
            if dm <= eps:
                v = _diam_power(dm, s) + best[mask & ~block]
                if v < acc:
                    acc = v
            t = (t - 1) & r
        best[mask] = acc
    return MeasureEstimate(float(best[size - 1]), s, float(eps), METHOD_EXACT, True)


def counting_measure(a) -> int:
    """Number of distinct points: the s=0 pre-measure below the smallest gap."""
    if isinstance(a, PointCloud):
        return len(a.deduplicate())
    if isinstance(a, IntervalSet):
        raise TypeError("counting_measure expects a finite set, not intervals")
    return len(set(tuple(p) if isinstance(p, (list, tuple)) else p for p in a))


def hausdorff_gauge(space: FiniteMetricSpace, s: float, eps) -> Gauge:
    """The scale-eps gauge on a finite space: every subset of diameter <= eps,
    weighted diam^s.  Exponential in n; intended for small spaces."""
    n = space.n
    if n > 16:
        raise ValueError("hausdorff_gauge enumerates 2^n blocks; n too large")
    blocks, weights = [], []
    for mask in range(1, 1 << n):
        dm = space.subset_diameter(mask)
        if dm <= eps:
            blocks.append(mask)
            weights.append(_diam_power(dm, float(s)))
    return Gauge(n, tuple(blocks), tuple(weights))


def premeasure_table(space: FiniteMetricSpace, s: float, eps) -> OuterMeasureTable:
    """H^s_eps as an explicit outer-measure table (via the general gauge DP)."""
    return construct_outer_measure(hausdorff_gauge(space, s, eps))


# ---------------------------------------------------------------------------
# Interval sets: exact left-to-right DP
# ---------------------------------------------------------------------------


def _material_fractions(iset: IntervalSet) -> list[tuple[Fraction, Fraction]]:
    return [(Fraction(a), Fraction(b)) for a, b in iset]


def premeasure_intervals(
    iset: IntervalSet, s: float, eps, *, return_cover: bool = False
) -> MeasureEstimate | tuple[MeasureEstimate, Cover]:
    """Exact inf of sum(diam^s) over interval covers of a 1-D set, s in (0, 1].

    State: the leftmost uncovered material point p.  Each step places one
    block starting at p; because x^s is strictly increasing and subadditive
    on (0, 1], an optimal block either is saturated (length eps) or ends at a
    material endpoint within reach.  Candidates therefore are
    {p + eps} | {material endpoints in (p, p + eps]}, plus the zero-length
    block when p is an isolated material point.  The candidate layout is
    validated against an exhaustive oracle in the test suite rather than
    assumed.

    For s > 1 the pre-measure of any bounded 1-D set degenerates to 0 and the
    candidate argument breaks; the exponent is rejected.
    """
    if not (0 < s <= 1):
        raise ValueError("interval DP valid for s in (0,1]")
    if eps <= 0:
        raise ValueError("eps must be positive")
    s = float(s)
    if iset.is_empty:
        est = MeasureEstimate(0.0, s, float(eps), METHOD_INTERVAL, True)
        return (est, Cover((), 0.0, (s, float(eps)))) if return_cover else est

    material = _material_fractions(iset)
    epsq = Fraction(eps)
    starts = [a for a, _ in material]
    ends = [b for _, b in material]
    pts: list[Fraction] = []
    for a, b in material:
        pts.append(a)
        if b != a:
            pts.append(b)
    last_end = ends[-1]

    def next_state(q: Fraction) -> Fraction | None:
        """Leftmost material at or after covering everything <= q."""
        if q >= last_end:
            return None
        i = bisect_right(ends, q)
        a, b = material[i]
        return a if a > q else q

    # Dijkstra-style relaxation; states only move right, so processing in
    # increasing p order finalizes each state the first time it pops.
    start = material[0][0]
    best: dict[Fraction, float] = {start: 0.0}
    parent: dict[Fraction, tuple[Fraction, Fraction]] = {}
    heap: list[Fraction] = [start]
    done_cost = math.inf
    done_tail: tuple[Fraction, Fraction] | None = None
    visited: set[Fraction] = set()
    n_states = 0
    while heap:
        p = heapq.heappop(heap)
        if p in visited:
            continue
        visited.add(p)
        n_states += 1
        if n_states > 2_000_000:
            raise RuntimeError("interval DP state budget exceeded; eps too fine")
        base = best[p]
        if base >= done_cost:
            continue
        reach = p + epsq
        lo = bisect_right(pts, p)
        hi = bisect_right(pts, reach)
        cands = set(pts[lo:hi])
        cands.add(reach)
        # zero-length block allowed when the remaining material at p is just {p}
        j = bisect_left(starts, p)
        isolated = (
            j < len(material) and material[j][0] == p and material[j][1] == p
        )
        if isolated:
            cands.add(p)
        for q in sorted(cands):
            cost = base + (float(q - p) ** s if q > p else 0.0)
            if cost >= done_cost:
                continue
            nxt = next_state(q)
            if nxt is None:
                if cost < done_cost:
                    done_cost = cost
                    done_tail = (p, q)
            elif nxt not in visited and cost < best.get(nxt, math.inf):
                best[nxt] = cost
                parent[nxt] = (p, q)
                heapq.heappush(heap, nxt)
    est = MeasureEstimate(float(done_cost), s, float(eps), METHOD_INTERVAL, True)
    if not return_cover:
        return est
    blocks: list[tuple[float, float]] = []
    tail = done_tail
    while tail is not None:
        p, q = tail
        blocks.append((float(p), float(q)))
        nxt_key = p
        tail = parent.get(nxt_key)
    blocks.reverse()
    return est, Cover(tuple(blocks), est.value, (s, float(eps)))


def canonical_interval_cover(iset: IntervalSet, s: float, eps=None) -> Cover:
    """The cover of an interval set by its own intervals, costed at diam^s."""
    return Cover.from_intervals(iset, s, eps)


# ---------------------------------------------------------------------------
# Grid (box) covers: upper bounds for clouds of any size
# ---------------------------------------------------------------------------


def box_premeasure(cloud: PointCloud, s: float, eps) -> MeasureEstimate:
    """Grid-cover upper bound: occupied eps-cells, each costed (eps*sqrt(d))^s.

    Cells of side eps have diameter eps*sqrt(d), so they form an admissible
    cover at that scale; the value bounds the true pre-measure from above.
    """
    from .dimension import box_count

    if eps <= 0:
        raise ValueError("eps must be positive")
    n_cells = box_count(cloud, eps)
    cell_diam = float(eps) * math.sqrt(cloud.ambient_dim)
    value = n_cells * _diam_power(cell_diam, float(s))
    return MeasureEstimate(value, float(s), float(eps), METHOD_BOX, False)


# ---------------------------------------------------------------------------
# Scale sweeps (the eps -> 0 limit process, observed at finitely many scales)
# ---------------------------------------------------------------------------

TREND_DIVERGING = "diverging"
TREND_CONVERGING = "converging"
TREND_VANISHING = "vanishing"
TREND_UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class TrendThresholds:
    """Stopping-rule constants for classifying a sweep; the limit itself is a
    mathematical object, so these are engineering knobs with documented
    defaults."""

    vanish_below: float = 1e-9
    diverge_ratio: float = 1e3
    converge_rel: float = 1e-3


DEFAULT_THRESHOLDS = TrendThresholds()


@dataclass(frozen=True)
class ScaleSweep:
    entries: tuple[tuple[float, MeasureEstimate], ...]
    trend: str

    @property
    def eps_values(self) -> list[float]:
        return [e for e, _ in self.entries]

    @property
    def values(self) -> list[float]:
        return [m.value for _, m in self.entries]

    def monotone_in_scale(self, rel_tol: float = 1e-12) -> bool:
        """Values must not decrease as eps shrinks (exact estimators only)."""
        vals = self.values
        return all(
            vals[i + 1] >= vals[i] - rel_tol * max(abs(vals[i]), 1.0)
            for i in range(len(vals) - 1)
        )


def classify_trend(values: Sequence[float], thresholds: TrendThresholds = DEFAULT_THRESHOLDS) -> str:
    vals = [float(v) for v in values]
    if not vals:
        return TREND_UNDETERMINED
    last = vals[-1]
    if last < thresholds.vanish_below:
        return TREND_VANISHING
    first = vals[0]
    if len(vals) >= 2:
        growing = vals[-1] > vals[-2] * (1 + thresholds.converge_rel)
        if first > 0 and last / first > thresholds.diverge_ratio and growing:
            return TREND_DIVERGING
        rel_change = abs(vals[-1] - vals[-2]) / max(abs(vals[-1]), 1e-300)
        if rel_change < thresholds.converge_rel:
            return TREND_CONVERGING
    return TREND_UNDETERMINED


def _worker_count() -> int:
    env = os.environ.get("HAUSDORFF_LAB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _evaluate_at_scale(target, s: float, eps) -> MeasureEstimate:
    if isinstance(target, IntervalSet):
        return premeasure_intervals(target, s, eps)
    if isinstance(target, PointCloud):
        if len(target) == 0:
            return MeasureEstimate(0.0, float(s), float(eps), METHOD_EXACT, True)
        if len(target) <= EXACT_SUBSET_LIMIT:
            space = FiniteMetricSpace.from_points(target)
            return premeasure_finite(space, range(space.n), s, eps)
        return box_premeasure(target, s, eps)
    if isinstance(target, tuple) and len(target) == 2 and isinstance(target[0], FiniteMetricSpace):
        return premeasure_finite(target[0], target[1], s, eps)
    raise TypeError(f"cannot evaluate a pre-measure on {type(target).__name__}")


def scale_sweep(
    target,
    s: float,
    eps_schedule: Iterable,
    thresholds: TrendThresholds = DEFAULT_THRESHOLDS,
) -> ScaleSweep:
    """Evaluate the pre-measure along a decreasing eps schedule and classify
    the trend.  Targets: IntervalSet, PointCloud (exact when small, box-cover
    otherwise), or a (FiniteMetricSpace, subset) pair.

    Scales may be evaluated on worker threads (capped by the
    HAUSDORFF_LAB_THREADS environment variable); results are collected in
    schedule order, so the output is identical to sequential evaluation.
    """
    schedule = list(eps_schedule)
    if len(schedule) < 3:
        raise ValueError("eps schedule needs at least 3 entries")
    for a, b in zip(schedule, schedule[1:]):
        if not b < a:
            raise ValueError("eps schedule must be strictly decreasing")
    if schedule[-1] <= 0:
        raise ValueError("eps values must be positive")
    workers = min(_worker_count(), len(schedule))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            estimates = list(pool.map(lambda e: _evaluate_at_scale(target, s, e), schedule))
    else:
        estimates = [_evaluate_at_scale(target, s, e) for e in schedule]
    entries = tuple((float(e), m) for e, m in zip(schedule, estimates))
    trend = classify_trend([m.value for m in estimates], thresholds)
    return ScaleSweep(entries=entries, trend=trend)


# ---------------------------------------------------------------------------
# Sweep serialization: `eps,s,value,method,is_exact`
# ---------------------------------------------------------------------------

SWEEP_HEADER = "eps,s,value,method,is_exact"


def sweep_to_csv(sweep: ScaleSweep) -> str:
    lines = [SWEEP_HEADER]
    for eps, m in sweep.entries:
        lines.append(
            f"{format_g17(eps)},{format_g17(m.exponent_s)},{format_g17(m.value)},"
            f"{m.method},{str(m.is_exact).lower()}"
        )
    return "\n".join(lines) + "\n"


def sweep_from_csv(text: str, thresholds: TrendThresholds = DEFAULT_THRESHOLDS) -> ScaleSweep:
    entries = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#") or line.lower().startswith("eps,"):
            continue
        parts = line.split(",")
        if len(parts) != 5:
            raise CsvFormatError(lineno, f"expected 5 fields, got {len(parts)}")
        try:
            eps = float(parts[0])
            m = MeasureEstimate(
                value=float(parts[2]),
                exponent_s=float(parts[1]),
                scale_eps=eps,
                method=parts[3],
                is_exact=parts[4].strip().lower() == "true",
            )
        except ValueError as exc:
            raise CsvFormatError(lineno, str(exc)) from exc
        entries.append((eps, m))
    trend = classify_trend([m.value for _, m in entries], thresholds)
    return ScaleSweep(entries=tuple(entries), trend=trend)


def geometric_schedule(start: float, ratio: float, count: int) -> list[float]:
    """start, start*ratio, ... -- the refinement pattern both the limit
    definition and log-log regression presuppose."""
    if not (0 < ratio < 1):
        raise ValueError("schedule ratio must be in (0,1)")
    if count < 1:
        raise ValueError("schedule count must be >= 1")
    if start <= 0:
        raise ValueError("schedule start must be positive")
    return [start * ratio**k for k in range(count)]
