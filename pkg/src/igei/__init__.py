"""Composite gender-equality index construction.

Builds 0-100 indicator scores from gender-disaggregated observations,
aggregates them through a configurable domain hierarchy with penalized
arithmetic means, and reproduces the published reference tables that pin
the conventions down.
"""

from igei.errors import (
    AggregationError,
    DataError,
    DegenerateInputError,
    IgeiError,
    InconsistentReferenceError,
    MetricInputError,
    OutOfModelError,
    ScoringError,
    SpecError,
    StatisticsError,
)
from igei.metrics import (
    GenderPair,
    MetricKind,
    correction_coefficient,
    gap_metric,
    gei_correction_coefficient,
    gei_gap_metric,
    invert_polarity,
    score_capped,
    score_gei,
    score_ratio,
    score_share,
    score_standard,
)
from igei.model import (
    Correction,
    Dataset,
    Domain,
    IndexTree,
    IndicatorSpec,
    ObservationRecord,
    SubDomain,
)
from igei.penalized import (
    Polarity,
    WeightedSequence,
    cartwright_field_bounds,
    geometric_mean,
    penalized_mean,
    value_range,
    weighted_mean,
    weighted_variance,
)
from igei.pipeline import (
    ReferenceLevels,
    TerritoryReport,
    aggregate_level,
    aggregate_scores,
    compute_indicator,
    resolve_references,
    score_territory,
    score_time_series,
)
from igei.stats import (
    DescriptiveSummary,
    correlation_matrix,
    descriptive_summary,
    rank_table,
)

__version__ = "0.1.0"

__all__ = [
    "AggregationError",
    "Correction",
    "DataError",
    "Dataset",
    "DegenerateInputError",
    "DescriptiveSummary",
    "Domain",
    "GenderPair",
    "IgeiError",
    "InconsistentReferenceError",
    "IndexTree",
    "IndicatorSpec",
    "MetricInputError",
    "MetricKind",
    "ObservationRecord",
    "OutOfModelError",
    "Polarity",
    "ReferenceLevels",
    "ScoringError",
    "SpecError",
    "StatisticsError",
    "SubDomain",
    "TerritoryReport",
    "WeightedSequence",
    "aggregate_level",
    "aggregate_scores",
    "cartwright_field_bounds",
    "compute_indicator",
    "correction_coefficient",
    "correlation_matrix",
    "descriptive_summary",
    "gap_metric",
    "gei_correction_coefficient",
    "gei_gap_metric",
    "geometric_mean",
    "invert_polarity",
    "penalized_mean",
    "rank_table",
    "resolve_references",
    "score_capped",
    "score_gei",
    "score_ratio",
    "score_share",
    "score_standard",
    "score_territory",
    "score_time_series",
    "value_range",
    "weighted_mean",
    "weighted_variance",
]
