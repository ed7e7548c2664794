"""Seeded randomized property suites.

Each suite checks a family of measure/dimension identities over generated
instances and reports one line per property, with a counterexample dump on
failure.  The suites back the command-line ``verify`` command; the unit tests
run them too.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .dimension import box_count, critical_exponent_scan, moran_dimension
from .fractals import cantor_endpoints, cantor_ifs, cantor_prefractal, ifs_deterministic
from .gauge import (
    Gauge,
    OuterMeasureTable,
    construct_outer_measure,
    counting_gauge,
    indicator_gauge,
    is_metric_outer,
    measurable_family,
    verify_outer_measure,
)
from .measure import (
    canonical_interval_cover,
    hausdorff_gauge,
    premeasure_finite,
    premeasure_intervals,
)
from .sets import FiniteMetricSpace, IntervalSet, PointCloud, set_distance

LN2_OVER_LN3 = math.log(2) / math.log(3)


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class SuiteReport:
    suite: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = ""):
        self.checks.append(Check(name, passed, detail))

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            mark = "pass" if c.passed else "FAIL"
            line = f"[{mark}] {self.suite}: {c.name}"
            if not c.passed and c.detail:
                line += f"\n       counterexample: {c.detail}"
            out.append(line)
        return out


# ---------------------------------------------------------------------------
# Instance generators
# ---------------------------------------------------------------------------


def random_gauge(rng: random.Random, n: int) -> Gauge:
    """A valid random gauge: random blocks with non-negative weights, padded
    with singletons so the family covers the ground set."""
    full = (1 << n) - 1
    blocks = []
    weights = []
    n_blocks = rng.randint(1, 8)
    for _ in range(n_blocks):
        b = rng.randint(1, full)
        blocks.append(b)
        weights.append(round(rng.uniform(0.0, 4.0), 6))
    union = 0
    for b in blocks:
        union |= b
    missing = full & ~union
    i = 0
    while missing:
        if missing & 1:
            blocks.append(1 << i)
            weights.append(round(rng.uniform(0.0, 4.0), 6))
        missing >>= 1
        i += 1
    if rng.random() < 0.3:
        blocks.append(0)
        weights.append(0.0)
    return Gauge(n, tuple(blocks), tuple(weights))


def random_metric_space(rng: random.Random, n: int) -> FiniteMetricSpace:
    """Euclidean distances of random planar points (triangle inequality for
    free), occasionally replaced by the shortest-path closure of a random
    symmetric matrix for non-embeddable variety."""
    if rng.random() < 0.5:
        pts = [(rng.uniform(0, 1), rng.uniform(0, 1)) for _ in range(n)]
        return FiniteMetricSpace.from_points(PointCloud(pts, ambient_dim=2))
    d = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d[i, j] = d[j, i] = rng.uniform(0.2, 2.0)
    for k in range(n):  # Floyd-Warshall closure makes it a metric
        d = np.minimum(d, d[:, k][:, None] + d[k, :][None, :])
    np.fill_diagonal(d, 0.0)
    return FiniteMetricSpace(d)


def random_interval_set(rng: random.Random, max_intervals: int = 4) -> IntervalSet:
    """Disjoint intervals with dyadic endpoints (exact under float +/-)."""
    k = rng.randint(1, max_intervals)
    cuts = sorted(rng.sample(range(1, 64), 2 * k))
    return IntervalSet(
        (Fraction(cuts[2 * i], 64), Fraction(cuts[2 * i + 1], 64)) for i in range(k)
    )


def random_cloud(rng: random.Random, n: int, dim: int = 2) -> PointCloud:
    pts = set()
    while len(pts) < n:
        pts.add(tuple(round(rng.uniform(0, 1), 9) for _ in range(dim)))
    return PointCloud(sorted(pts), ambient_dim=dim)


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------


def suite_axioms(n: int = 6, trials: int = 25, seed: int = 0,
                 table: OuterMeasureTable | None = None) -> SuiteReport:
    """Outer-measure axioms hold for every gauge-constructed table (or for a
    user-supplied table, when given)."""
    rep = SuiteReport("axioms")
    if table is not None:
        r = verify_outer_measure(table)
        rep.add("supplied table satisfies the axioms", r.ok,
                "; ".join(map(str, r.violations[:5])))
        return rep
    rng = random.Random(seed)
    bad = None
    for t in range(trials):
        g = random_gauge(rng, rng.randint(2, n))
        r = verify_outer_measure(construct_outer_measure(g))
        if not r.ok:
            bad = (t, g, r.violations[:3])
            break
    rep.add(f"gauge construction satisfies the axioms ({trials} random gauges)",
            bad is None, str(bad))
    return rep


def suite_caratheodory(n: int = 6, trials: int = 25, seed: int = 0) -> SuiteReport:
    rep = SuiteReport("caratheodory")
    rng = random.Random(seed)
    bad_sigma = bad_add = None
    for t in range(trials):
        g = random_gauge(rng, rng.randint(2, n))
        fam = measurable_family(construct_outer_measure(g))
        if not fam.sigma_algebra_ok and bad_sigma is None:
            bad_sigma = (t, g)
        if not fam.additive_ok and bad_add is None:
            bad_add = (t, g)
    rep.add(f"measurable family is a sigma-algebra ({trials} gauges)",
            bad_sigma is None, str(bad_sigma))
    rep.add(f"restriction to measurable sets is additive ({trials} gauges)",
            bad_add is None, str(bad_add))
    # the all-or-nothing indicator measure: only the trivial sets measure up
    phi = construct_outer_measure(indicator_gauge(2))
    fam = measurable_family(phi)
    rep.add("indicator measure on 2 points: members = {empty, X}",
            fam.members == [0, 3], f"members={fam.members}")
    cnt = construct_outer_measure(counting_gauge(3))
    fam = measurable_family(cnt)
    rep.add("counting measure: every subset measurable",
            fam.members == list(range(8)), f"members={fam.members}")
    return rep


def suite_metric(n: int = 6, trials: int = 20, seed: int = 0) -> SuiteReport:
    """Metric outer measures have a fully measurable power set (every subset
    of a finite metric space is closed)."""
    rep = SuiteReport("metric")
    rng = random.Random(seed)
    bad_metric = None
    bad_full = None
    checked_metric = 0
    for t in range(trials):
        space = random_metric_space(rng, rng.randint(2, n))
        gap = space.min_positive_distance()
        choices = [
            (0.0, 0.5 * gap if math.isfinite(gap) else 1.0),
            (0.5, rng.uniform(0.1, 2.0)),
            (1.0, rng.uniform(0.1, 2.0)),
        ]
        for s, eps in choices:
            if eps <= 0:
                continue
            table = construct_outer_measure(hausdorff_gauge(space, s, eps))
            metric = is_metric_outer(table, space)
            if s > 0 or eps < gap:
                checked_metric += 1
                if not metric and bad_metric is None:
                    bad_metric = (t, s, eps)
            if metric:
                fam = measurable_family(table)
                if len(fam.members) != 1 << space.n and bad_full is None:
                    bad_full = (t, s, eps, len(fam.members))
    rep.add(f"scale gauges are metric outer measures ({checked_metric} cases)",
            bad_metric is None, str(bad_metric))
    rep.add("metric implies every subset measurable",
            bad_full is None, str(bad_full))
    return rep


def suite_hausdorff_props(trials: int = 30, seed: int = 0) -> SuiteReport:
    """Scale/set monotonicity, subadditivity, metric additivity, and the
    transformation laws of the exact estimators."""
    rep = SuiteReport("hausdorff-props")
    rng = random.Random(seed)

    bad = None
    for t in range(trials):
        iv = random_interval_set(rng)
        s = rng.uniform(0.2, 1.0)
        eps = Fraction(rng.randint(2, 40), 64)
        hi = premeasure_intervals(iv, s, eps).value
        lo = premeasure_intervals(iv, s, eps / 2).value
        if lo < hi - 1e-12 * max(1.0, hi):
            bad = (t, float(eps), s, lo, hi)
            break
    rep.add("finer scales never measure less (intervals)", bad is None, str(bad))

    bad = None
    for t in range(trials):
        space = random_metric_space(rng, 6)
        s = rng.choice([0.0, 0.5, 1.0])
        eps = rng.uniform(0.05, 1.5)
        sub = rng.randint(1, 62)
        sup = sub | rng.randint(1, 63)
        va = premeasure_finite(space, sub, s, eps).value
        vb = premeasure_finite(space, sup, s, eps).value
        if va > vb + 1e-12:
            bad = (t, sub, sup, va, vb)
            break
    rep.add("monotone in the set (finite spaces)", bad is None, str(bad))

    bad = None
    for t in range(trials):
        space = random_metric_space(rng, 6)
        s = rng.choice([0.0, 0.5, 1.0])
        eps = rng.uniform(0.05, 1.5)
        a = rng.randint(1, 62)
        b = rng.randint(1, 62)
        vu = premeasure_finite(space, a | b, s, eps).value
        va = premeasure_finite(space, a, s, eps).value
        vb = premeasure_finite(space, b, s, eps).value
        if vu > va + vb + 1e-12:
            bad = (t, a, b, vu, va + vb)
            break
    rep.add("subadditive at fixed scale", bad is None, str(bad))

    bad = None
    for t in range(trials):
        iv1 = random_interval_set(rng, 2)
        iv2 = random_interval_set(rng, 2).translate(2)
        gap = set_distance(iv1, iv2)
        eps = Fraction(gap).limit_denominator(10**6) / 2
        if eps <= 0:
            continue
        s = rng.uniform(0.2, 1.0)
        vu = premeasure_intervals(IntervalSet(list(iv1) + list(iv2)), s, eps).value
        v1 = premeasure_intervals(iv1, s, eps).value
        v2 = premeasure_intervals(iv2, s, eps).value
        if abs(vu - (v1 + v2)) > 1e-12:
            bad = (t, s, float(eps), vu, v1 + v2)
            break
    rep.add("additive across gaps wider than the scale", bad is None, str(bad))

    bad = None
    for t in range(trials):
        iv = random_interval_set(rng)
        shift = Fraction(rng.randint(-64, 64), 32)
        s = rng.uniform(0.2, 1.0)
        eps = Fraction(rng.randint(2, 40), 64)
        v0 = premeasure_intervals(iv, s, eps).value
        v1 = premeasure_intervals(iv.translate(shift), s, eps).value
        if v0 != v1:
            bad = (t, float(shift), v0, v1)
            break
    rep.add("translation invariance is exact", bad is None, str(bad))

    bad = None
    for t in range(trials):
        iv = random_interval_set(rng)
        # dyadic factors keep the scaled instance the exact image of the
        # original; an irrational factor perturbs the data by an ulp, which
        # a cover can feel as (ulp)^s
        lam = Fraction(rng.randint(10, 96), 32)
        s = rng.uniform(0.2, 1.0)
        eps = Fraction(rng.randint(2, 40), 64)
        v0 = premeasure_intervals(iv, s, eps).value
        v1 = premeasure_intervals(iv.scale(lam), s, lam * eps).value
        if abs(v1 - float(lam) ** s * v0) > 1e-9 * max(1.0, abs(v1)):
            bad = (t, float(lam), s, v1, float(lam) ** s * v0)
            break
    rep.add("dilation rescales by lambda^s at matched scales", bad is None, str(bad))

    bad = None
    for t in range(trials):
        iv = random_interval_set(rng)
        d_exp = rng.uniform(0.1, 0.8)
        s_exp = rng.uniform(d_exp + 0.05, 1.0)
        eps = Fraction(rng.randint(2, 40), 64)
        vs = premeasure_intervals(iv, s_exp, eps).value
        vd = premeasure_intervals(iv, d_exp, eps).value
        bound = float(eps) ** (s_exp - d_exp) * vd
        if vs > bound + 1e-12 * max(1.0, bound):
            bad = (t, d_exp, s_exp, vs, bound)
            break
    rep.add("higher exponents are crushed by eps^(s-d)", bad is None, str(bad))
    return rep


def suite_dimension_props(trials: int = 20, seed: int = 0) -> SuiteReport:
    rep = SuiteReport("dimension-props")
    rng = random.Random(seed)

    bad = None
    for m in range(1, 9):
        for r in (0.5, 1 / 3, 0.25):
            est = moran_dimension([r] * m)
            want = 0.0 if m == 1 else math.log(m) / math.log(1 / r)
            if abs(est.value - want) > 1e-12 or abs(est.diagnostics["residual"]) > 1e-12:
                bad = (m, r, est.value, want)
    rep.add("equal-ratio closed form (m <= 8, r in {1/2,1/3,1/4})", bad is None, str(bad))

    bad = None
    for t in range(trials):
        base = random_cloud(rng, rng.randint(5, 40))
        extra = random_cloud(rng, rng.randint(1, 10))
        both = PointCloud(list(base) + list(extra), ambient_dim=2)
        eps = rng.choice([0.5, 0.25, 0.125, 0.0625])
        ca = box_count(base, eps)
        cu = box_count(both, eps)
        cb = box_count(extra, eps)
        if not (max(ca, cb) <= cu <= ca + cb):
            bad = (t, eps, ca, cb, cu)
            break
    rep.add("union cell counts between max and sum", bad is None, str(bad))

    bad = None
    for t in range(5):
        cloud = random_cloud(rng, rng.randint(1, 12))
        est = critical_exponent_scan(
            cloud, [0.3, 0.6, 0.9], [0.25, 0.125, 0.0625]
        )
        if est.value != 0.0:
            bad = (t, est.value)
            break
    rep.add("finite clouds get dimension zero", bad is None, str(bad))
    return rep


def suite_cantor(depth: int = 8) -> SuiteReport:
    """The flagship middle-thirds identities, checked at a given depth."""
    rep = SuiteReport("cantor")
    s = LN2_OVER_LN3
    prev = None
    ok_len = ok_count = ok_gap = ok_nest = True
    detail = ""
    for n in range(depth + 1):
        kn = cantor_prefractal(n)
        if kn.lebesgue_length() != Fraction(2, 3) ** n:
            ok_len, detail = False, f"n={n}"
        if len(kn) != 2**n:
            ok_count, detail = False, f"n={n}"
        if any(b - a != Fraction(1, 3**n) for a, b in kn):
            ok_count, detail = False, f"n={n} lengths"
        gaps = [kn.intervals[i + 1][0] - kn.intervals[i][1] for i in range(len(kn) - 1)]
        if any(g < Fraction(1, 3**n) for g in gaps):
            ok_gap, detail = False, f"n={n}"
        if prev is not None and not prev.contains_set(kn):
            ok_nest, detail = False, f"n={n}"
        prev = kn
    rep.add(f"total length is (2/3)^n exactly (n <= {depth})", ok_len, detail)
    rep.add(f"2^n intervals of length 3^-n (n <= {depth})", ok_count, detail)
    rep.add("construction gaps at least 3^-n", ok_gap, detail)
    rep.add("stages are nested decreasing compacts", ok_nest, detail)

    kd = cantor_prefractal(depth)
    cover = canonical_interval_cover(kd, s)
    rep.add("own-interval cover costs 1 at the critical exponent",
            abs(cover.total_cost - 1.0) <= 1e-10, f"cost={cover.total_cost!r}")
    est = premeasure_intervals(kd, s, Fraction(1, 3**depth))
    rep.add("optimized cover at matched scale costs at most 1",
            est.value <= 1.0 + 1e-10, f"value={est.value!r}")

    n_ep = min(depth, 10)
    pts = ifs_deterministic(cantor_ifs(), PointCloud([(0,), (1,)], ambient_dim=1), n_ep)
    same = set(pts.points) == set(cantor_endpoints(n_ep).points)
    rep.add(f"two-map iteration reproduces stage endpoints (n={n_ep})", same)

    counts = [box_count(cantor_endpoints(min(depth, 10)), Fraction(1, 3**k)) for k in range(1, 6)]
    rep.add("triadic cells occupied are exactly 2^k",
            counts == [2**k for k in range(1, 6)], f"counts={counts}")
    return rep


SUITES = {
    "axioms": suite_axioms,
    "caratheodory": suite_caratheodory,
    "metric": suite_metric,
    "hausdorff-props": suite_hausdorff_props,
    "dimension-props": suite_dimension_props,
    "cantor": suite_cantor,
}


def run_suite(name: str, **kwargs) -> SuiteReport:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name](**kwargs)
