"""Gauge-constructed outer measures on finite ground sets, made exact.

A :class:`Gauge` is a covering family of blocks (bitmask subsets of
``{0..n-1}``) with non-negative weights.  ``construct_outer_measure`` realizes
mu(A) = inf over covers of A of the summed block weights, for *every* subset
A at once, by dynamic programming over the set of still-uncovered elements.
On a finite ground set the countable infimum is attained by a finite cover
without repeats, so the DP value is the exact infimum.

The verifiers in this module check the outer-measure axioms, metric
additivity, and Caratheodory measurability by exhaustive enumeration; they
are meant for small ground sets (the checks are exponential by nature).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .sets import FiniteMetricSpace, format_g17, CsvFormatError

INF = math.inf

#: tolerance for equality checks on measure values (see Gauge docs: exact
#: comparison would be wrong for triadic weights, which floats cannot carry)
MEASURE_TOL = 1e-12

EXACT_LIMIT = 20  # 2^n table entries; hard bound for exact construction


def _ext_eq(x: float, y: float, tol: float = MEASURE_TOL) -> bool:
    """Equality on [0, +inf] extended reals with tolerance on the finite part."""
    xi, yi = math.isinf(x), math.isinf(y)
    if xi or yi:
        return xi and yi
    return abs(x - y) <= tol


# ---------------------------------------------------------------------------
# Gauge and tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Gauge:
    """A cover family with weights on an n-point ground set.

    ``blocks[k]`` is an n-bit mask; ``weights[k]`` its cost in [0, +inf].
    The blocks must jointly cover the ground set, and an empty block (mask 0)
    must carry weight 0.
    """

    ground_size: int
    blocks: tuple[int, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        n = self.ground_size
        if not (1 <= n <= EXACT_LIMIT):
            raise ValueError(f"exact construction limited to {EXACT_LIMIT} points")
        blocks = tuple(int(b) for b in self.blocks)
        weights = tuple(float(w) for w in self.weights)
        if len(blocks) != len(weights):
            raise ValueError("blocks and weights must align")
        full = (1 << n) - 1
        union = 0
        for b, w in zip(blocks, weights):
            if b < 0 or b > full:
                raise ValueError(f"block {b:#x} outside the ground set")
            if w < 0 and not math.isinf(w):
                raise ValueError("weights must be >= 0")
            if b == 0 and w != 0:
                raise ValueError("the empty block must have weight 0")
            union |= b
        if union != full:
            raise ValueError("blocks must jointly cover the ground set")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "weights", weights)

    @property
    def full_mask(self) -> int:
        return (1 << self.ground_size) - 1

    # -- file format: header `n=<int>`, then `mask_hex,weight` lines --------

    def to_text(self) -> str:
        lines = [f"n={self.ground_size}"]
        for b, w in zip(self.blocks, self.weights):
            wtxt = "inf" if math.isinf(w) else format_g17(w)
            lines.append(f"{b:x},{wtxt}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Gauge":
        lines = [ln.strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln and not ln.startswith("#")]
        if not lines or not lines[0].startswith("n="):
            raise CsvFormatError(1, "gauge file must start with 'n=<int>'")
        n = int(lines[0][2:])
        blocks, weights = [], []
        for lineno, ln in enumerate(lines[1:], start=2):
            try:
                mask_hex, wtxt = ln.split(",")
                blocks.append(int(mask_hex, 16))
                weights.append(float(wtxt))
            except ValueError as exc:
                raise CsvFormatError(lineno, str(exc)) from exc
        return cls(n, tuple(blocks), tuple(weights))


@dataclass(frozen=True)
class OuterMeasureTable:
    """mu*(A) for every subset A of an n-point ground set, indexed by bitmask."""

    ground_size: int
    values: tuple[float, ...]

    def __post_init__(self):
        n = self.ground_size
        vals = tuple(float(v) for v in self.values)
        if len(vals) != 1 << n:
            raise ValueError(f"table needs 2^{n} entries, got {len(vals)}")
        object.__setattr__(self, "values", vals)

    def __getitem__(self, mask: int) -> float:
        return self.values[mask]

    @property
    def full_mask(self) -> int:
        return (1 << self.ground_size) - 1

    def to_csv(self) -> str:
        out = []
        for mask, v in enumerate(self.values):
            vtxt = "inf" if math.isinf(v) else format_g17(v)
            out.append(f"{mask:x},{vtxt}\n")
        return "".join(out)

    @classmethod
    def from_csv(cls, text: str, ground_size: int | None = None) -> "OuterMeasureTable":
        entries: dict[int, float] = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                mask_hex, vtxt = line.split(",")
                entries[int(mask_hex, 16)] = float(vtxt)
            except ValueError as exc:
                raise CsvFormatError(lineno, str(exc)) from exc
        if ground_size is None:
            size = max(entries) if entries else 0
            ground_size = max(1, size.bit_length())
        vals = [INF] * (1 << ground_size)
        for mask, v in entries.items():
            vals[mask] = v
        return cls(ground_size, tuple(vals))


@dataclass(frozen=True)
class Cover:
    """A witness cover: blocks, their summed cost, and optional (s, eps) context."""

    blocks: tuple
    total_cost: float
    context: tuple | None = None

    @classmethod
    def from_intervals(cls, intervals, s: float, eps: float | None = None) -> "Cover":
        """Cover whose blocks are the given intervals, costed at diam^s."""
        blocks = tuple((a, b) for a, b in intervals)
        cost = 0.0
        for a, b in blocks:
            d = float(b - a)
            cost += _diam_power(d, s)
        return cls(blocks, cost, context=(float(s), None if eps is None else float(eps)))


def _diam_power(diam: float, s: float) -> float:
    """diam^s with 0^0 := 1 so that the s=0 gauge counts blocks."""
    if s == 0:
        return 1.0
    if diam == 0:
        return 0.0
    return diam**s


# ---------------------------------------------------------------------------
# Construction (Theorem-style gauge infimum, exact by subset DP)
# ---------------------------------------------------------------------------


def construct_outer_measure(gauge: Gauge) -> OuterMeasureTable:
    """Exact minimum-cost-cover value for every subset of the ground set.

    ``best[S]`` for non-empty S branches on the lowest uncovered element and
    tries every block containing it; ``S \\ X`` is a strictly smaller mask, so
    a single pass in increasing mask order fills the whole table in
    O(2^n * |blocks|).  Blocks are used as given (no intersection with the
    target): a general gauge weight need not shrink under intersection.
    """
    n = gauge.ground_size
    size = 1 << n
    by_elem: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for b, w in zip(gauge.blocks, gauge.weights):
        if b == 0:
            continue
        for i in range(n):
            if b >> i & 1:
                by_elem[i].append((b, w))
    best = [0.0] * size
    for mask in range(1, size):
        low = (mask & -mask).bit_length() - 1
        acc = INF
        for b, w in by_elem[low]:
            v = best[mask & ~b] + w
            if v < acc:
                acc = v
        best[mask] = acc
    return OuterMeasureTable(n, tuple(best))


def min_cover(gauge: Gauge, target_mask: int) -> Cover:
    """A witness cover attaining mu(target).

    Ties are broken toward the smallest block mask at each DP step, so the
    reported block sequence is deterministic; the cost is tie-free.
    """
    table = construct_outer_measure(gauge)
    if math.isinf(table[target_mask]):
        raise ValueError("target is not coverable by the gauge blocks")
    weight_of: dict[int, float] = {}
    for b, w in zip(gauge.blocks, gauge.weights):
        if b and (b not in weight_of or w < weight_of[b]):
            weight_of[b] = w
    chosen: list[int] = []
    mask = target_mask
    cost = 0.0
    while mask:
        low = (mask & -mask).bit_length() - 1
        pick = min(
            (b for b in weight_of if b >> low & 1),
            key=lambda b: (table[mask & ~b] + weight_of[b], b),
        )
        chosen.append(pick)
        cost += weight_of[pick]
        mask &= ~pick
    return Cover(tuple(chosen), float(cost))


# ---------------------------------------------------------------------------
# Verifiers
# ---------------------------------------------------------------------------


@dataclass
class AxiomReport:
    ok: bool
    violations: list = field(default_factory=list)


def verify_outer_measure(table: OuterMeasureTable, tol: float = MEASURE_TOL) -> AxiomReport:
    """Check the three outer-measure axioms by exhaustive enumeration.

    (i) the empty set has value 0; (ii) monotone on every comparable pair;
    (iii) subadditive on every pair.  On a finite ground set the pairwise
    subadditivity check is complete: finite families follow by induction and
    countable families only have finitely many distinct members.  Cost is
    O(3^n + 4^n) -- intended for small tables.
    """
    vals = table.values
    size = len(vals)
    violations = []
    if not _ext_eq(vals[0], 0.0, tol):
        violations.append(("empty", 0, vals[0]))
    # monotonicity: enumerate supersets B of each A via submask walk over B
    for b in range(size):
        vb = vals[b]
        a = b
        while True:
            a = (a - 1) & b
            if vals[a] > vb + tol and not (math.isinf(vals[a]) and math.isinf(vb)):
                violations.append(("monotone", (a, b), (vals[a], vb)))
            if a == 0:
                break
    for a in range(size):
        va = vals[a]
        for b in range(a, size):
            lhs = vals[a | b]
            rhs = va + vals[b]
            if lhs > rhs + tol and not math.isinf(rhs):
                violations.append(("subadditive", (a, b), (lhs, rhs)))
    return AxiomReport(ok=not violations, violations=violations)


def is_metric_outer(table: OuterMeasureTable, space: FiniteMetricSpace,
                    tol: float = MEASURE_TOL) -> bool:
    """True iff mu is additive on every positively separated pair of subsets."""
    if table.ground_size != space.n:
        raise ValueError("table and metric space sizes do not match")
    size = 1 << space.n
    vals = table.values
    for e in range(1, size):
        # f ranges over non-empty subsets of the complement of e
        comp = (size - 1) & ~e
        f = comp
        while f:
            if e < f and space.subset_distance(e, f) > 0:
                lhs = vals[e | f]
                rhs = vals[e] + vals[f]
                if not _ext_eq(lhs, rhs, tol):
                    return False
            f = (f - 1) & comp
    return True


def is_measurable(table: OuterMeasureTable, b_mask: int, tol: float = MEASURE_TOL) -> bool:
    """Caratheodory test: mu(A) = mu(A & B) + mu(A \\ B) for every test set A."""
    size = 1 << table.ground_size
    if not (0 <= b_mask < size):
        raise ValueError("subset outside the ground set")
    vals = table.values
    for a in range(size):
        inner = vals[a & b_mask] + vals[a & ~b_mask]
        if not _ext_eq(vals[a], inner, tol):
            return False
    return True


@dataclass
class MeasurableFamily:
    members: list[int]
    sigma_algebra_ok: bool
    additive_ok: bool


def measurable_family(table: OuterMeasureTable, tol: float = MEASURE_TOL) -> MeasurableFamily:
    """All measurable subsets, plus sigma-algebra and additivity verdicts.

    On a finite ground set sigma-closure coincides with closure under
    complement and pairwise union, so those are what get checked.
    """
    n = table.ground_size
    size = 1 << n
    full = size - 1
    members = [b for b in range(size) if is_measurable(table, b, tol)]
    member_set = set(members)
    sigma_ok = 0 in member_set
    if sigma_ok:
        for b in members:
            if (full & ~b) not in member_set:
                sigma_ok = False
                break
    if sigma_ok:
        for i, b1 in enumerate(members):
            for b2 in members[i + 1:]:
                if (b1 | b2) not in member_set:
                    sigma_ok = False
                    break
            if not sigma_ok:
                break
    additive_ok = True
    vals = table.values
    for i, b1 in enumerate(members):
        for b2 in members[i + 1:]:
            if b1 & b2:
                continue
            if not _ext_eq(vals[b1 | b2], vals[b1] + vals[b2], tol):
                additive_ok = False
                break
        if not additive_ok:
            break
    return MeasurableFamily(members=members, sigma_algebra_ok=sigma_ok, additive_ok=additive_ok)


# ---------------------------------------------------------------------------
# Canonical small gauges
# ---------------------------------------------------------------------------


def indicator_gauge(n: int) -> Gauge:
    """Blocks {empty, X} with weights {0, 1}: mu(A) = 1 for A != empty."""
    return Gauge(n, (0, (1 << n) - 1), (0.0, 1.0))


def counting_gauge(n: int) -> Gauge:
    """All singletons at weight 1: mu(A) = |A|."""
    return Gauge(n, tuple(1 << i for i in range(n)), tuple(1.0 for _ in range(n)))
