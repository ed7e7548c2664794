"""Geometric set representations and the primitive quantities built on them.

Three ground-set flavors are supported:

* :class:`IntervalSet` -- finite unions of disjoint closed intervals on the
  real line (the natural home of middle-thirds prefractals),
* :class:`PointCloud` -- finite point sets in R^d,
* :class:`FiniteMetricSpace` -- an explicit distance matrix, for exact
  measure-theoretic experiments where no ambient coordinates exist.

Endpoints and coordinates may be ``float``, ``int`` or ``fractions.Fraction``;
exact rational inputs are kept exact so that triadic identities can be checked
without rounding.  All types are immutable values; every operation returns a
new object.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

Number = int | float | Fraction

#: absolute tolerance for float comparisons on unit-scale data
ABS_TOL = 1e-12


class EmptySetError(ValueError):
    """Raised when an operation is undefined on the empty set."""


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction))


# ---------------------------------------------------------------------------
# IntervalSet
# ---------------------------------------------------------------------------


class IntervalSet:
    """A finite union of disjoint closed intervals, sorted ascending.

    Overlapping or touching input intervals are merged on construction, so
    the stored representation always satisfies ``b_i < a_{i+1}`` strictly.
    Degenerate single-point intervals ``[a, a]`` are allowed.
    """

    __slots__ = ("_intervals",)

    def __init__(self, intervals: Iterable[tuple[Number, Number]] = ()):
        items = []
        for a, b in intervals:
            if b < a:
                raise ValueError(f"interval endpoints out of order: ({a}, {b})")
            items.append((a, b))
        items.sort(key=lambda iv: (iv[0], iv[1]))
        merged: list[tuple[Number, Number]] = []
        for a, b in items:
            if merged and a <= merged[-1][1]:
                pa, pb = merged[-1]
                if b > pb:
                    merged[-1] = (pa, b)
            else:
                merged.append((a, b))
        self._intervals = tuple(merged)

    @classmethod
    def _from_sorted_disjoint(cls, intervals) -> "IntervalSet":
        """Trusting constructor for generators that already guarantee the
        sorted/strictly-disjoint invariant; skips the O(n log n) merge."""
        out = object.__new__(cls)
        out._intervals = tuple(intervals)
        return out

    @property
    def intervals(self) -> tuple[tuple[Number, Number], ...]:
        return self._intervals

    def __iter__(self) -> Iterator[tuple[Number, Number]]:
        return iter(self._intervals)

    def __len__(self) -> int:
        return len(self._intervals)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntervalSet):
            return NotImplemented
        return self._intervals == other._intervals

    def __hash__(self) -> int:
        return hash(self._intervals)

    def __repr__(self) -> str:
        inner = ", ".join(f"[{a}, {b}]" for a, b in self._intervals)
        return f"IntervalSet({inner})"

    @property
    def is_empty(self) -> bool:
        return not self._intervals

    @property
    def endpoints(self) -> list[Number]:
        """All interval endpoints, ascending."""
        out: list[Number] = []
        for a, b in self._intervals:
            out.append(a)
            if b != a:
                out.append(b)
        return out

    @property
    def hull(self) -> tuple[Number, Number] | None:
        if not self._intervals:
            return None
        return (self._intervals[0][0], self._intervals[-1][1])

    def diameter(self) -> Number:
        if not self._intervals:
            return 0
        return self._intervals[-1][1] - self._intervals[0][0]

    def lebesgue_length(self) -> Number:
        """Total length, exact when the endpoints are exact rationals."""
        if not self._intervals:
            return 0
        if any(isinstance(x, Fraction) for ab in self._intervals for x in ab):
            return sum(b - a for a, b in self._intervals)
        # fsum keeps the accumulated rounding at one ulp of the total
        return math.fsum(b - a for a, b in self._intervals)

    def contains_point(self, x: Number) -> bool:
        for a, b in self._intervals:
            if a <= x <= b:
                return True
            if a > x:
                return False
        return False

    def contains_set(self, other: "IntervalSet") -> bool:
        """True iff every interval of ``other`` lies inside one of ours."""
        i = 0
        for a, b in other:
            while i < len(self._intervals) and self._intervals[i][1] < a:
                i += 1
            if i == len(self._intervals):
                return False
            sa, sb = self._intervals[i]
            if not (sa <= a and b <= sb):
                return False
        return True

    def translate(self, v: Number) -> "IntervalSet":
        return IntervalSet((a + v, b + v) for a, b in self._intervals)

    def scale(self, lam: Number) -> "IntervalSet":
        if lam <= 0:
            raise ValueError("scale factor must be positive")
        return IntervalSet((a * lam, b * lam) for a, b in self._intervals)

    def to_floats(self) -> "IntervalSet":
        return IntervalSet((float(a), float(b)) for a, b in self._intervals)

    # -- serialization (CSV, one `a,b` line per interval) -------------------

    def to_csv(self) -> str:
        return "".join(f"{format_g17(a)},{format_g17(b)}\n" for a, b in self._intervals)

    @classmethod
    def from_csv(cls, text: str) -> "IntervalSet":
        rows = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise CsvFormatError(lineno, f"expected 2 fields, got {len(parts)}")
            try:
                rows.append((float(parts[0]), float(parts[1])))
            except ValueError as exc:
                raise CsvFormatError(lineno, str(exc)) from exc
        return cls(rows)


class CsvFormatError(ValueError):
    """Malformed delimited input; carries the offending line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def format_g17(x: Number) -> str:
    """Render a number with 17 significant digits (lossless float round-trip)."""
    return f"{float(x):.17g}"


# ---------------------------------------------------------------------------
# PointCloud
# ---------------------------------------------------------------------------


class PointCloud:
    """A finite list of points in R^d (possibly empty, possibly exact-rational)."""

    __slots__ = ("_points", "_dim")

    def __init__(self, points: Iterable[Sequence[Number]], ambient_dim: int | None = None):
        pts = tuple(tuple(p) for p in points)
        if pts:
            dim = len(pts[0])
            if ambient_dim is not None and ambient_dim != dim:
                raise ValueError(f"ambient_dim={ambient_dim} but points have {dim} coordinates")
            for p in pts:
                if len(p) != dim:
                    raise ValueError("all points must share the ambient dimension")
        else:
            if ambient_dim is None:
                raise ValueError("empty cloud needs an explicit ambient_dim")
            dim = ambient_dim
        if dim < 1:
            raise ValueError("ambient dimension must be >= 1")
        self._points = pts
        self._dim = dim

    @property
    def points(self) -> tuple[tuple[Number, ...], ...]:
        return self._points

    @property
    def ambient_dim(self) -> int:
        return self._dim

    def __len__(self) -> int:
        return len(self._points)

    def __iter__(self):
        return iter(self._points)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PointCloud):
            return NotImplemented
        return self._dim == other._dim and self._points == other._points

    def __hash__(self) -> int:
        return hash((self._dim, self._points))

    def __repr__(self) -> str:
        return f"PointCloud(dim={self._dim}, n={len(self._points)})"

    @property
    def is_float(self) -> bool:
        return all(isinstance(c, float) for p in self._points for c in p)

    def as_array(self) -> np.ndarray:
        return np.asarray([[float(c) for c in p] for p in self._points], dtype=float).reshape(
            len(self._points), self._dim
        )

    def deduplicate(self) -> "PointCloud":
        seen: dict[tuple, None] = {}
        for p in self._points:
            seen.setdefault(p, None)
        return PointCloud(seen.keys(), ambient_dim=self._dim)

    def diameter(self) -> float:
        n = len(self._points)
        if n <= 1:
            return 0.0
        if self._dim == 1:
            xs = [p[0] for p in self._points]
            return float(max(xs) - min(xs))
        arr = self.as_array()
        if n > 2048:
            # pairwise scan is quadratic; reduce to the convex hull first
            from scipy.spatial import ConvexHull

            arr = arr[ConvexHull(arr).vertices]
        diffs = arr[:, None, :] - arr[None, :, :]
        return float(np.sqrt((diffs**2).sum(axis=2)).max())

    def hull_box(self) -> tuple[tuple[float, float], ...] | None:
        """Axis-aligned bounding box, (min, max) per coordinate."""
        if not self._points:
            return None
        arr = self.as_array()
        return tuple((float(lo), float(hi)) for lo, hi in zip(arr.min(axis=0), arr.max(axis=0)))

    def translate(self, v: Sequence[Number]) -> "PointCloud":
        if len(v) != self._dim:
            raise ValueError("translation vector has wrong dimension")
        return PointCloud(
            (tuple(c + vc for c, vc in zip(p, v)) for p in self._points), ambient_dim=self._dim
        )

    def scale(self, lam: Number) -> "PointCloud":
        if lam <= 0:
            raise ValueError("scale factor must be positive")
        return PointCloud(
            (tuple(c * lam for c in p) for p in self._points), ambient_dim=self._dim
        )

    # -- serialization (CSV, one point per line) ----------------------------

    def to_csv(self) -> str:
        return "".join(",".join(format_g17(c) for c in p) + "\n" for p in self._points)

    @classmethod
    def from_csv(cls, text: str, ambient_dim: int | None = None) -> "PointCloud":
        rows = []
        dim = None
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            if dim is None:
                dim = len(parts)
            elif len(parts) != dim:
                raise CsvFormatError(lineno, f"expected {dim} fields, got {len(parts)}")
            try:
                rows.append(tuple(float(v) for v in parts))
            except ValueError as exc:
                raise CsvFormatError(lineno, str(exc)) from exc
        if not rows:
            return cls([], ambient_dim=ambient_dim or 1)
        return cls(rows)


def euclidean(p: Sequence[Number], q: Sequence[Number]) -> float:
    return math.sqrt(sum((float(a) - float(b)) ** 2 for a, b in zip(p, q)))


# ---------------------------------------------------------------------------
# FiniteMetricSpace
# ---------------------------------------------------------------------------


class FiniteMetricSpace:
    """An explicit n-point metric, validated eagerly at construction.

    The triangle-inequality check is O(n^3); every downstream exactness claim
    rests on ``dist`` actually being a metric, so the cost is paid up front.
    """

    __slots__ = ("_dist", "_n")

    def __init__(self, dist: Sequence[Sequence[float]] | np.ndarray):
        d = np.array(dist, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValueError("distance matrix must be square")
        n = d.shape[0]
        if n == 0:
            raise ValueError("metric space must contain at least one point")
        if not np.allclose(np.diag(d), 0.0, atol=ABS_TOL):
            raise ValueError("diagonal of a distance matrix must be zero")
        if (d < -ABS_TOL).any():
            raise ValueError("distances must be non-negative")
        if not np.allclose(d, d.T, atol=ABS_TOL):
            raise ValueError("distance matrix must be symmetric")
        # d[i,k] <= d[i,j] + d[j,k]; vectorize over j
        for j in range(n):
            if (d > d[:, j][:, None] + d[j, :][None, :] + ABS_TOL).any():
                raise ValueError(f"triangle inequality violated through point {j}")
        d.setflags(write=False)
        self._dist = d
        self._n = n

    @classmethod
    def from_points(cls, cloud: PointCloud) -> "FiniteMetricSpace":
        if len(cloud) == 0:
            raise EmptySetError("cannot build a metric space from an empty cloud")
        arr = cloud.as_array()
        diffs = arr[:, None, :] - arr[None, :, :]
        d = np.sqrt((diffs**2).sum(axis=2))
        np.fill_diagonal(d, 0.0)
        d = (d + d.T) / 2.0
        return cls(d)

    @property
    def n(self) -> int:
        return self._n

    @property
    def dist(self) -> np.ndarray:
        return self._dist

    def __repr__(self) -> str:
        return f"FiniteMetricSpace(n={self._n})"

    def _indices(self, subset) -> list[int]:
        """Normalize a subset given as an int bitmask or an index iterable."""
        if isinstance(subset, int):
            return [i for i in range(self._n) if subset >> i & 1]
        idx = sorted(set(int(i) for i in subset))
        if idx and (idx[0] < 0 or idx[-1] >= self._n):
            raise ValueError("subset index out of range")
        return idx

    def subset_diameter(self, subset) -> float:
        idx = self._indices(subset)
        if len(idx) <= 1:
            return 0.0
        sub = self._dist[np.ix_(idx, idx)]
        return float(sub.max())

    def subset_distance(self, e_subset, f_subset) -> float:
        ei = self._indices(e_subset)
        fi = self._indices(f_subset)
        if not ei or not fi:
            raise EmptySetError("undefined distance to empty set")
        return float(self._dist[np.ix_(ei, fi)].min())

    def min_positive_distance(self) -> float:
        """Smallest nonzero pairwise distance (inf for a single point)."""
        if self._n == 1:
            return math.inf
        off = self._dist[~np.eye(self._n, dtype=bool)]
        pos = off[off > 0]
        return float(pos.min()) if pos.size else 0.0

    def to_csv(self) -> str:
        return "".join(
            ",".join(format_g17(v) for v in row) + "\n" for row in self._dist
        )

    @classmethod
    def from_csv(cls, text: str) -> "FiniteMetricSpace":
        rows = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                rows.append([float(v) for v in line.split(",")])
            except ValueError as exc:
                raise CsvFormatError(lineno, str(exc)) from exc
        return cls(rows)


# ---------------------------------------------------------------------------
# Similarity maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Similarity:
    """x -> ratio * Q x + translation with Q orthogonal, so all distances
    scale by exactly ``ratio``."""

    ratio: Number
    orthogonal_part: tuple[tuple[Number, ...], ...]
    translation: tuple[Number, ...]

    def __post_init__(self):
        if self.ratio <= 0:
            raise ValueError("similarity ratio must be positive")
        q = tuple(tuple(row) for row in self.orthogonal_part)
        t = tuple(self.translation)
        d = len(t)
        if len(q) != d or any(len(row) != d for row in q):
            raise ValueError("orthogonal part must be d x d matching the translation")
        qf = np.array([[float(v) for v in row] for row in q])
        if not np.allclose(qf.T @ qf, np.eye(d), atol=1e-12):
            raise ValueError("orthogonal part fails Q^T Q = I within 1e-12")
        object.__setattr__(self, "orthogonal_part", q)
        object.__setattr__(self, "translation", t)

    @property
    def dim(self) -> int:
        return len(self.translation)

    @classmethod
    def scaling(cls, ratio: Number, translation: Sequence[Number]) -> "Similarity":
        d = len(translation)
        eye = tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d))
        return cls(ratio, eye, tuple(translation))

    @classmethod
    def rotation_2d(cls, ratio: Number, angle: float, translation: Sequence[Number]) -> "Similarity":
        c, s = math.cos(angle), math.sin(angle)
        return cls(ratio, ((c, -s), (s, c)), tuple(translation))

    def apply_point(self, p: Sequence[Number]) -> tuple[Number, ...]:
        q = self.orthogonal_part
        r = self.ratio
        return tuple(
            r * sum(q[i][j] * p[j] for j in range(self.dim)) + self.translation[i]
            for i in range(self.dim)
        )


def apply_similarity(cloud: PointCloud, f: Similarity) -> PointCloud:
    """Push a cloud through a similarity (vectorized when the data is float)."""
    if cloud.ambient_dim != f.dim:
        raise ValueError("similarity dimension does not match the cloud")
    if len(cloud) and cloud.is_float:
        arr = cloud.as_array()
        q = np.array([[float(v) for v in row] for row in f.orthogonal_part])
        t = np.array([float(v) for v in f.translation])
        out = float(f.ratio) * (arr @ q.T) + t
        return PointCloud([tuple(row) for row in out], ambient_dim=cloud.ambient_dim)
    return PointCloud((f.apply_point(p) for p in cloud), ambient_dim=cloud.ambient_dim)


# ---------------------------------------------------------------------------
# Generic operations
# ---------------------------------------------------------------------------


def diameter(s) -> Number:
    """sup of pairwise distances; 0 for the empty set.

    Accepts an IntervalSet, a PointCloud, or a ``(FiniteMetricSpace, subset)``
    pair where the subset is a bitmask or index iterable.
    """
    if isinstance(s, IntervalSet):
        return s.diameter()
    if isinstance(s, PointCloud):
        return s.diameter()
    if isinstance(s, tuple) and len(s) == 2 and isinstance(s[0], FiniteMetricSpace):
        return s[0].subset_diameter(s[1])
    raise TypeError(f"diameter not defined for {type(s).__name__}")


def set_distance(e, f) -> float:
    """inf of pairwise distances between two non-empty sets."""
    if isinstance(e, IntervalSet) and isinstance(f, IntervalSet):
        if e.is_empty or f.is_empty:
            raise EmptySetError("undefined distance to empty set")
        best = None
        i = j = 0
        ei, fi = e.intervals, f.intervals
        while i < len(ei) and j < len(fi):
            a1, b1 = ei[i]
            a2, b2 = fi[j]
            if b1 < a2:
                gap = a2 - b1
                i += 1
            elif b2 < a1:
                gap = a1 - b2
                j += 1
            else:
                return 0.0
            if best is None or gap < best:
                best = gap
        return float(best)
    if isinstance(e, PointCloud) and isinstance(f, PointCloud):
        if len(e) == 0 or len(f) == 0:
            raise EmptySetError("undefined distance to empty set")
        ea, fa = e.as_array(), f.as_array()
        if len(e) * len(f) > 4_000_000:
            from scipy.spatial import cKDTree

            d, _ = cKDTree(fa).query(ea, k=1)
            return float(np.min(d))
        diffs = ea[:, None, :] - fa[None, :, :]
        return float(np.sqrt((diffs**2).sum(axis=2)).min())
    raise TypeError("set_distance expects two IntervalSets or two PointClouds")


def translate(s, v):
    """Translate an IntervalSet (by a scalar) or a PointCloud (by a vector)."""
    if isinstance(s, IntervalSet):
        return s.translate(v)
    if isinstance(s, PointCloud):
        return s.translate(v)
    raise TypeError(f"translate not defined for {type(s).__name__}")


def scale(s, lam: Number):
    if isinstance(s, (IntervalSet, PointCloud)):
        return s.scale(lam)
    raise TypeError(f"scale not defined for {type(s).__name__}")


def lebesgue_length(s: IntervalSet) -> Number:
    if not isinstance(s, IntervalSet):
        raise TypeError("lebesgue_length is defined for IntervalSet")
    return s.lebesgue_length()
