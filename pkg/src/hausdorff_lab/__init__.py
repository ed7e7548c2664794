"""Exact gauge-constructed outer measures, Hausdorff pre-measures, and
fractal dimension estimation."""

from .sets import (
    EmptySetError,
    FiniteMetricSpace,
    IntervalSet,
    PointCloud,
    Similarity,
    apply_similarity,
    diameter,
    lebesgue_length,
    scale,
    set_distance,
    translate,
)
from .gauge import (
    Cover,
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
from .measure import (
    MeasureEstimate,
    ScaleSweep,
    TrendThresholds,
    box_premeasure,
    canonical_interval_cover,
    counting_measure,
    geometric_schedule,
    hausdorff_gauge,
    premeasure_finite,
    premeasure_intervals,
    premeasure_table,
    scale_sweep,
)
from .dimension import (
    DimensionEstimate,
    RegressionResult,
    box_count,
    box_counting_dimension,
    critical_exponent_scan,
    moran_dimension,
)
from .fractals import (
    IFS,
    SplitMix64,
    cantor_endpoints,
    cantor_ifs,
    cantor_prefractal,
    chaos_game,
    ifs_deterministic,
    preset_ifs,
)

__version__ = "0.1.0"

__all__ = [
    "EmptySetError",
    "FiniteMetricSpace",
    "IntervalSet",
    "PointCloud",
    "Similarity",
    "apply_similarity",
    "diameter",
    "lebesgue_length",
    "scale",
    "set_distance",
    "translate",
    "Cover",
    "Gauge",
    "OuterMeasureTable",
    "construct_outer_measure",
    "counting_gauge",
    "indicator_gauge",
    "is_measurable",
    "is_metric_outer",
    "measurable_family",
    "min_cover",
    "verify_outer_measure",
    "MeasureEstimate",
    "ScaleSweep",
    "TrendThresholds",
    "box_premeasure",
    "canonical_interval_cover",
    "counting_measure",
    "geometric_schedule",
    "hausdorff_gauge",
    "premeasure_finite",
    "premeasure_intervals",
    "premeasure_table",
    "scale_sweep",
    "DimensionEstimate",
    "RegressionResult",
    "box_count",
    "box_counting_dimension",
    "critical_exponent_scan",
    "moran_dimension",
    "IFS",
    "SplitMix64",
    "cantor_endpoints",
    "cantor_ifs",
    "cantor_prefractal",
    "chaos_game",
    "ifs_deterministic",
    "preset_ifs",
]
