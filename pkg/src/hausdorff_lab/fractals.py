"""Self-similar set generators: middle-thirds prefractals, deterministic IFS
iteration, and chaos-game sampling.

Triadic endpoints are kept as exact rationals (numerator over 3^n) and only
converted to floats at serialization boundaries; the classic identities
(interval count 2^n, lengths 3^-n, total length (2/3)^n) then hold exactly.

Chaos-game randomness comes from splitmix64, a 64-bit generator with a fully
specified update rule, so identical seeds reproduce identical clouds across
runs and platforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .sets import CsvFormatError, IntervalSet, PointCloud, Similarity

MAX_PREFRACTAL_DEPTH = 30
MAX_ENDPOINT_DEPTH = 20
MAX_DETERMINISTIC_POINTS = 10_000_000


# ---------------------------------------------------------------------------
# Middle-thirds prefractals
# ---------------------------------------------------------------------------


def cantor_prefractal(n: int) -> IntervalSet:
    """Stage n of the middle-thirds construction: 2^n closed intervals of
    length 3^-n, starting from [0, 1] at n = 0.

    Endpoints are exact rationals k/3^n; convert with
    :meth:`IntervalSet.to_floats` when float coordinates are wanted.
    """
    if n < 0:
        raise ValueError("depth must be >= 0")
    if n > MAX_PREFRACTAL_DEPTH:
        raise ValueError(f"depth limited to {MAX_PREFRACTAL_DEPTH} (2^n intervals)")
    starts = [0]
    for _ in range(n):
        # each kept third stays left of the next start, so order is preserved
        starts = [x for s in starts for x in (3 * s, 3 * s + 2)]
    den = 3**n
    return IntervalSet._from_sorted_disjoint(
        (Fraction(k, den), Fraction(k + 1, den)) for k in starts
    )


def cantor_endpoints(n: int) -> PointCloud:
    """The 2^(n+1) interval endpoints of the depth-n prefractal, as a 1-D
    cloud (all of them belong to the limit set)."""
    if n < 0:
        raise ValueError("depth must be >= 0")
    if n > MAX_ENDPOINT_DEPTH:
        raise ValueError(f"depth limited to {MAX_ENDPOINT_DEPTH}")
    pts = []
    for a, b in cantor_prefractal(n):
        pts.append((a,))
        if b != a:
            pts.append((b,))
    return PointCloud(pts, ambient_dim=1)


# ---------------------------------------------------------------------------
# Iterated function systems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IFS:
    """A non-empty family of contracting similarities sharing one ambient
    dimension."""

    maps: tuple[Similarity, ...]

    def __post_init__(self):
        maps = tuple(self.maps)
        if not maps:
            raise ValueError("an IFS needs at least one map")
        d = maps[0].dim
        for f in maps:
            if f.dim != d:
                raise ValueError("all maps must share the ambient dimension")
            if not f.ratio < 1:
                raise ValueError("all maps must contract (ratio < 1)")
        object.__setattr__(self, "maps", maps)

    @property
    def ambient_dim(self) -> int:
        return self.maps[0].dim

    @property
    def ratios(self) -> list[float]:
        return [float(f.ratio) for f in self.maps]

    # -- config file: `r, q11..qdd (row-major), t1..td`; '#' comments --------

    def to_text(self) -> str:
        lines = []
        for f in self.maps:
            flat = [f.ratio]
            for row in f.orthogonal_part:
                flat.extend(row)
            flat.extend(f.translation)
            lines.append(", ".join(repr(float(v)) for v in flat))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "IFS":
        maps = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            vals = [float(v) for v in line.split(",")]
            # 1 + d^2 + d values: solve d^2 + d + 1 = len
            d = int((math.sqrt(4 * len(vals) - 3) - 1) / 2)
            if 1 + d * d + d != len(vals):
                raise CsvFormatError(lineno, f"cannot split {len(vals)} fields into r, Q, t")
            r = vals[0]
            q = tuple(tuple(vals[1 + i * d: 1 + (i + 1) * d]) for i in range(d))
            t = tuple(vals[1 + d * d:])
            maps.append(Similarity(r, q, t))
        return cls(tuple(maps))


def _identity(d: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d))


def cantor_ifs() -> IFS:
    """x -> x/3 and x -> x/3 + 2/3 on the line (exact rational parameters)."""
    third = Fraction(1, 3)
    return IFS(
        (
            Similarity(third, _identity(1), (Fraction(0),)),
            Similarity(third, _identity(1), (Fraction(2, 3),)),
        )
    )


def sierpinski_triangle_ifs() -> IFS:
    """Three half-scale maps toward the vertices of a unit-base triangle."""
    half = Fraction(1, 2)
    verts = [(Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)),
             (Fraction(1, 2), math.sqrt(3) / 2)]
    return IFS(
        tuple(
            Similarity(half, _identity(2), (v[0] * half, v[1] * half))
            for v in verts
        )
    )


def sierpinski_carpet_ifs() -> IFS:
    """Eight third-scale maps on the 3x3 grid minus its center."""
    third = Fraction(1, 3)
    maps = []
    for i in range(3):
        for j in range(3):
            if i == 1 and j == 1:
                continue
            maps.append(
                Similarity(third, _identity(2), (Fraction(i, 3), Fraction(j, 3)))
            )
    return IFS(tuple(maps))


def koch_points_ifs() -> IFS:
    """Four third-scale maps (two rotated by +-60 degrees) tracing the Koch
    curve's point set."""
    third = 1.0 / 3.0
    s3 = math.sqrt(3.0)
    return IFS(
        (
            Similarity.scaling(third, (0.0, 0.0)),
            Similarity.rotation_2d(third, math.pi / 3, (third, 0.0)),
            Similarity.rotation_2d(third, -math.pi / 3, (0.5, s3 / 6)),
            Similarity.scaling(third, (2.0 / 3.0, 0.0)),
        )
    )


PRESETS = {
    "cantor": cantor_ifs,
    "sierpinski-triangle": sierpinski_triangle_ifs,
    "sierpinski-carpet": sierpinski_carpet_ifs,
    "koch-points": koch_points_ifs,
}


def preset_ifs(name: str) -> IFS:
    try:
        return PRESETS[name]()
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None


# ---------------------------------------------------------------------------
# Attractor sampling
# ---------------------------------------------------------------------------


def ifs_deterministic(ifs: IFS, seed: PointCloud, iterations: int) -> PointCloud:
    """Apply every map to every point, ``iterations`` times.

    Output order is map-major then point order, so runs are reproducible;
    exact-rational seeds stay exact under rational maps.
    """
    if iterations < 0:
        raise ValueError("iterations must be >= 0")
    if len(seed) < 1:
        raise ValueError("seed cloud must be non-empty")
    if seed.ambient_dim != ifs.ambient_dim:
        raise ValueError("seed dimension does not match the IFS")
    total = len(seed) * len(ifs.maps) ** iterations
    if total > MAX_DETERMINISTIC_POINTS:
        raise ValueError(f"would generate {total} points (limit {MAX_DETERMINISTIC_POINTS})")
    float_fast = seed.is_float and all(
        isinstance(v, float)
        for f in ifs.maps
        for v in (f.ratio, *f.translation, *(c for row in f.orthogonal_part for c in row))
    )
    if float_fast:
        pts = seed.as_array()
        mats = [
            (
                float(f.ratio) * np.array([[float(v) for v in row] for row in f.orthogonal_part]),
                np.array([float(v) for v in f.translation]),
            )
            for f in ifs.maps
        ]
        for _ in range(iterations):
            pts = np.concatenate([pts @ m.T + t for m, t in mats], axis=0)
        return PointCloud([tuple(p) for p in pts], ambient_dim=ifs.ambient_dim)
    pts = list(seed.points)
    for _ in range(iterations):
        pts = [f.apply_point(p) for f in ifs.maps for p in pts]
    return PointCloud(pts, ambient_dim=ifs.ambient_dim)


# -- splitmix64: documented 64-bit generator for reproducible sampling ------

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """state += 0x9E3779B97F4A7C15;
    z = state; z = (z ^ z>>30) * 0xBF58476D1CE4E5B9;
    z = (z ^ z>>27) * 0x94D049BB133111EB; return z ^ z>>31."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def next_below(self, n: int) -> int:
        return self.next_u64() % n

    def next_unit(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))


def chaos_game(ifs: IFS, n_points: int, rng_seed: int, burn_in: int = 32) -> PointCloud:
    """Sample the attractor by iterating randomly chosen maps.

    The first ``burn_in`` iterates are discarded (for ratios <= 1/2 the
    initial-condition error is below 1e-9 after the default 32 steps).
    Identical seeds give identical clouds.
    """
    if n_points < 1:
        raise ValueError("n_points must be >= 1")
    if burn_in < 0:
        raise ValueError("burn_in must be >= 0")
    rng = SplitMix64(rng_seed)
    d = ifs.ambient_dim
    m = len(ifs.maps)
    mats = [
        (
            float(f.ratio) * np.array([[float(v) for v in row] for row in f.orthogonal_part]),
            np.array([float(v) for v in f.translation]),
        )
        for f in ifs.maps
    ]
    x = np.zeros(d)
    out = np.empty((n_points, d))
    for k in range(burn_in + n_points):
        q, t = mats[rng.next_below(m)]
        x = q @ x + t
        if k >= burn_in:
            out[k - burn_in] = x
    return PointCloud([tuple(p) for p in out], ambient_dim=d)
