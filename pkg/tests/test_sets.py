import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hausdorff_lab import (
    EmptySetError,
    FiniteMetricSpace,
    IntervalSet,
    PointCloud,
    Similarity,
    apply_similarity,
    diameter,
    lebesgue_length,
    set_distance,
)


def build_intervals(pairs):
    return IntervalSet((a, a + w) for a, w in pairs)


interval_inputs = st.lists(
    st.tuples(st.integers(-50, 50), st.integers(0, 20)), max_size=8
)


class TestIntervalSet:
    @given(interval_inputs)
    def test_constructor_invariants(self, pairs):
        s = build_intervals(pairs)
        for (a, b) in s:
            assert a <= b
        for (a1, b1), (a2, b2) in zip(s, list(s)[1:]):
            assert b1 < a2

    @given(interval_inputs)
    def test_merge_idempotent(self, pairs):
        s = build_intervals(pairs)
        assert IntervalSet(s.intervals) == s

    def test_touching_intervals_merge(self):
        s = IntervalSet([(0, 1), (1, 2)])
        assert s.intervals == ((0, 2),)

    def test_overlapping_merge(self):
        s = IntervalSet([(0, 2), (1, 5), (7, 8)])
        assert s.intervals == ((0, 5), (7, 8))

    def test_degenerate_points_allowed(self):
        s = IntervalSet([(3, 3), (1, 1)])
        assert s.intervals == ((1, 1), (3, 3))

    def test_reversed_endpoints_rejected(self):
        with pytest.raises(ValueError):
            IntervalSet([(2, 1)])

    def test_diameter_hull(self):
        s = IntervalSet([(0, Fraction(1, 9)), (Fraction(8, 9), 1)])
        assert diameter(s) == 1

    def test_empty_diameter(self):
        assert diameter(IntervalSet()) == 0
        assert diameter(PointCloud([], ambient_dim=2)) == 0.0

    def test_lebesgue_examples(self):
        assert lebesgue_length(IntervalSet([(0, 1)])) == 1
        s = IntervalSet([(0, Fraction(1, 9)), (Fraction(2, 9), Fraction(1, 3)),
                         (Fraction(2, 3), Fraction(7, 9)), (Fraction(8, 9), 1)])
        assert lebesgue_length(s) == Fraction(4, 9)

    @given(interval_inputs, st.integers(-30, 30))
    def test_translate_preserves_diameter(self, pairs, v):
        s = build_intervals(pairs)
        assert diameter(s.translate(v)) == diameter(s)

    @given(interval_inputs, st.integers(1, 9))
    def test_scale_diameter(self, pairs, lam):
        s = build_intervals(pairs)
        assert diameter(s.scale(lam)) == lam * diameter(s)

    def test_scale_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            IntervalSet([(0, 1)]).scale(0)
        with pytest.raises(ValueError):
            IntervalSet([(0, 1)]).scale(-2)

    def test_translate_thirds(self):
        s = IntervalSet([(0, Fraction(1, 3))]).translate(Fraction(2, 3))
        assert s.intervals == ((Fraction(2, 3), 1),)

    def test_contains_set(self):
        big = IntervalSet([(0, 1), (2, 3)])
        assert big.contains_set(IntervalSet([(0, Fraction(1, 3)), (Fraction(5, 2), 3)]))
        assert not big.contains_set(IntervalSet([(1, 2)]))

    def test_csv_round_trip(self):
        s = IntervalSet([(0.1, 0.25), (0.5, 0.625)])
        assert IntervalSet.from_csv(s.to_csv()) == s

    def test_csv_line_numbers(self):
        with pytest.raises(ValueError, match="line 2"):
            IntervalSet.from_csv("0,1\n0,1,2\n")


class TestSetDistance:
    def test_gap_between_thirds(self):
        e = IntervalSet([(0, Fraction(1, 3))])
        f = IntervalSet([(Fraction(2, 3), 1)])
        assert set_distance(e, f) == pytest.approx(1 / 3, abs=1e-15)

    def test_shared_point_is_zero(self):
        e = IntervalSet([(0, 1)])
        assert set_distance(e, e) == 0.0

    def test_cloud_distance(self):
        assert set_distance(
            PointCloud([(0.0, 0.0)]), PointCloud([(3.0, 4.0)])
        ) == pytest.approx(5.0)

    def test_empty_operand_raises(self):
        with pytest.raises(EmptySetError, match="undefined distance to empty set"):
            set_distance(IntervalSet(), IntervalSet([(0, 1)]))

    def test_symmetry(self):
        e = IntervalSet([(0, 1), (4, 5)])
        f = IntervalSet([(2, Fraction(7, 3))])
        assert set_distance(e, f) == set_distance(f, e)


class TestPointCloud:
    def test_diameter_345(self):
        assert diameter(PointCloud([(0.0, 0.0), (3.0, 4.0)])) == pytest.approx(5.0)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            PointCloud([(0.0,), (1.0, 2.0)])

    def test_dedup(self):
        c = PointCloud([(1.0,), (1.0,), (2.0,)])
        assert len(c.deduplicate()) == 2

    def test_csv_round_trip_17_digits(self):
        c = PointCloud([(math.pi, math.e), (1 / 3, 2 / 3)])
        back = PointCloud.from_csv(c.to_csv())
        assert back.points == tuple((float(x), float(y)) for x, y in c.points)

    def test_large_cloud_diameter_uses_hull(self):
        rng = np.random.default_rng(0)
        pts = rng.uniform(size=(3000, 2))
        cloud = PointCloud([tuple(p) for p in pts])
        arr = cloud.as_array()
        # subsampled pairwise distances can never beat the hull-based answer
        d = np.sqrt(((arr[:500, None, :] - arr[None, :500, :]) ** 2).sum(axis=2)).max()
        assert cloud.diameter() >= d - 1e-12


class TestFiniteMetricSpace:
    def test_triangle_violation_rejected(self):
        with pytest.raises(ValueError, match="triangle"):
            FiniteMetricSpace([[0, 1, 3], [1, 0, 1], [3, 1, 0]])

    def test_asymmetry_rejected(self):
        with pytest.raises(ValueError, match="symmetric"):
            FiniteMetricSpace([[0, 1], [2, 0]])

    def test_nonzero_diagonal_rejected(self):
        with pytest.raises(ValueError, match="diagonal"):
            FiniteMetricSpace([[1.0]])

    def test_subset_ops(self):
        sp = FiniteMetricSpace.from_points(PointCloud([(0.0,), (1.0,), (5.0,)]))
        assert sp.subset_diameter([0, 1]) == pytest.approx(1.0)
        assert sp.subset_diameter(0b101) == pytest.approx(5.0)
        assert diameter((sp, 0b101)) == pytest.approx(5.0)
        assert sp.subset_distance([0], [2]) == pytest.approx(5.0)
        with pytest.raises(EmptySetError):
            sp.subset_distance([], [0])

    def test_csv_round_trip(self):
        sp = FiniteMetricSpace.from_points(PointCloud([(0.0, 0.0), (1.0, 0.5)]))
        back = FiniteMetricSpace.from_csv(sp.to_csv())
        assert np.allclose(back.dist, sp.dist)


class TestSimilarity:
    def test_identity_case(self):
        f = Similarity.scaling(1, (0.0, 0.0))
        cloud = PointCloud([(0.25, 0.5), (0.75, 0.1)])
        assert apply_similarity(cloud, f) == cloud

    def test_non_orthogonal_rejected(self):
        with pytest.raises(ValueError, match="Q\\^T Q"):
            Similarity(1.0, ((1.0, 0.5), (0.0, 1.0)), (0.0, 0.0))

    def test_nonpositive_ratio_rejected(self):
        with pytest.raises(ValueError):
            Similarity.scaling(0, (0.0,))

    def test_ratio_preserved_on_random_pairs(self):
        rng = np.random.default_rng(7)
        f = Similarity.rotation_2d(1.7, 0.83, (0.2, -0.4))
        pts = rng.uniform(-1, 1, size=(200, 2))
        for i in range(0, 200, 2):
            x, y = pts[i], pts[i + 1]
            fx = f.apply_point(tuple(x))
            fy = f.apply_point(tuple(y))
            d0 = math.dist(x, y)
            if d0 == 0:
                continue
            assert abs(math.dist(fx, fy) / d0 - 1.7) <= 1e-9
