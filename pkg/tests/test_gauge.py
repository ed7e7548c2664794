import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hausdorff_lab import (
    FiniteMetricSpace,
    Gauge,
    OuterMeasureTable,
    construct_outer_measure,
    counting_gauge,
    indicator_gauge,
    is_measurable,
    is_metric_outer,
    measurable_family,
    min_cover,
    verify_outer_measure,
)
from hausdorff_lab.verify import random_gauge

from oracles import naive_min_cover_cost


class TestGaugeType:
    def test_blocks_must_cover(self):
        with pytest.raises(ValueError, match="cover"):
            Gauge(3, (0b011,), (1.0,))

    def test_empty_block_weight_zero(self):
        with pytest.raises(ValueError, match="empty block"):
            Gauge(2, (0, 0b11), (0.5, 1.0))

    def test_too_many_points(self):
        with pytest.raises(ValueError, match="limited to 20"):
            Gauge(21, ((1 << 21) - 1,), (1.0,))

    def test_file_round_trip(self):
        g = Gauge(3, (0b111, 0b001, 0), (1.5, 0.25, 0.0))
        back = Gauge.from_text(g.to_text())
        assert back == g

    def test_inf_weight_round_trip(self):
        g = Gauge(2, (0b11, 0b01), (math.inf, 1.0))
        back = Gauge.from_text(g.to_text())
        assert math.isinf(back.weights[0])


class TestConstruction:
    def test_indicator_measure(self):
        # blocks {empty, X} at weights {0, 1}: every non-empty set costs 1
        t = construct_outer_measure(indicator_gauge(3))
        assert t[0] == 0.0
        assert all(t[m] == 1.0 for m in range(1, 8))

    def test_singleton_gauge_counts(self):
        t = construct_outer_measure(counting_gauge(4))
        for m in range(16):
            assert t[m] == float(bin(m).count("1")) == naive_min_cover_cost(
                list(counting_gauge(4).blocks), [1.0] * 4, m
            )

    def test_zero_weight_full_block(self):
        g = Gauge(3, (0b111,), (0.0,))
        t = construct_outer_measure(g)
        assert all(t[m] == 0.0 for m in range(8))

    def test_uncoverable_is_rejected_at_gauge(self):
        # the Gauge type refuses non-covering families outright
        with pytest.raises(ValueError):
            Gauge(2, (0b01,), (1.0,))

    def test_agrees_with_naive_oracle_dyadic(self):
        # dyadic weights make every cover cost exactly representable, so the
        # DP and the brute-force enumeration must agree to the last bit
        rng = random.Random(42)
        for _ in range(40):
            n = rng.randint(2, 10)
            full = (1 << n) - 1
            blocks = [rng.randint(1, full) for _ in range(rng.randint(1, 7))]
            union = 0
            for b in blocks:
                union |= b
            missing, i = full & ~union, 0
            while missing:
                if missing & 1:
                    blocks.append(1 << i)
                missing >>= 1
                i += 1
            if len(blocks) > 12:
                continue
            weights = [rng.randint(0, 192) / 64 for _ in blocks]
            table = construct_outer_measure(Gauge(n, tuple(blocks), tuple(weights)))
            for _ in range(8):
                a = rng.randint(0, full)
                assert table[a] == naive_min_cover_cost(blocks, weights, a)

    def test_min_cover_witness(self):
        g = Gauge(3, (0b011, 0b110, 0b100, 0b001), (1.0, 1.0, 0.25, 0.25))
        cover = min_cover(g, 0b111)
        t = construct_outer_measure(g)
        assert cover.total_cost == pytest.approx(t[0b111])
        union = 0
        for b in cover.blocks:
            union |= b
        assert union & 0b111 == 0b111

    def test_min_cover_deterministic(self):
        g = random_gauge(random.Random(3), 6)
        c1 = min_cover(g, 0b111111)
        c2 = min_cover(g, 0b111111)
        assert c1.blocks == c2.blocks


class TestVerifier:
    @given(st.integers(0, 10_000))
    @settings(max_examples=40, deadline=None)
    def test_constructed_tables_always_pass(self, seed):
        rng = random.Random(seed)
        g = random_gauge(rng, rng.randint(2, 7))
        assert verify_outer_measure(construct_outer_measure(g)).ok

    def test_nonzero_empty_flagged(self):
        t = OuterMeasureTable(2, (1.0, 1.0, 1.0, 2.0))
        rep = verify_outer_measure(t)
        assert not rep.ok
        assert any(v[0] == "empty" for v in rep.violations)

    def test_non_monotone_flagged(self):
        t = OuterMeasureTable(2, (0.0, 2.0, 1.0, 1.0))
        rep = verify_outer_measure(t)
        assert any(v[0] == "monotone" for v in rep.violations)

    def test_non_subadditive_flagged(self):
        t = OuterMeasureTable(2, (0.0, 1.0, 1.0, 3.0))
        rep = verify_outer_measure(t)
        assert any(v[0] == "subadditive" for v in rep.violations)


class TestMetricAndMeasurability:
    def test_indicator_not_metric_on_two_separated_points(self):
        sp = FiniteMetricSpace([[0, 1], [1, 0]])
        t = construct_outer_measure(indicator_gauge(2))
        assert is_metric_outer(t, sp) is False

    def test_single_point_vacuously_metric(self):
        sp = FiniteMetricSpace([[0.0]])
        t = construct_outer_measure(indicator_gauge(1))
        assert is_metric_outer(t, sp) is True

    def test_size_mismatch_rejected(self):
        sp = FiniteMetricSpace([[0, 1], [1, 0]])
        with pytest.raises(ValueError, match="size"):
            is_metric_outer(construct_outer_measure(indicator_gauge(3)), sp)

    def test_trivial_sets_always_measurable(self):
        t = construct_outer_measure(indicator_gauge(2))
        assert is_measurable(t, 0)
        assert is_measurable(t, 0b11)

    def test_half_not_measurable_under_indicator(self):
        # test set X splits as 1 != 1 + 1
        t = construct_outer_measure(indicator_gauge(2))
        assert is_measurable(t, 0b01) is False

    def test_counting_all_measurable(self):
        t = construct_outer_measure(counting_gauge(3))
        assert all(is_measurable(t, b) for b in range(8))

    def test_family_indicator(self):
        fam = measurable_family(construct_outer_measure(indicator_gauge(2)))
        assert fam.members == [0, 0b11]
        assert fam.sigma_algebra_ok and fam.additive_ok

    def test_family_counting_full(self):
        fam = measurable_family(construct_outer_measure(counting_gauge(3)))
        assert fam.members == list(range(8))
        assert fam.sigma_algebra_ok and fam.additive_ok

    @given(st.integers(0, 10_000))
    @settings(max_examples=30, deadline=None)
    def test_family_flags_always_true_for_constructed(self, seed):
        rng = random.Random(seed)
        g = random_gauge(rng, rng.randint(2, 6))
        fam = measurable_family(construct_outer_measure(g))
        assert fam.sigma_algebra_ok and fam.additive_ok

    def test_table_csv_round_trip(self):
        t = construct_outer_measure(random_gauge(random.Random(1), 4))
        back = OuterMeasureTable.from_csv(t.to_csv(), ground_size=4)
        assert back.values == t.values
