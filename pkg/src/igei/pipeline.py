"""End-to-end index computation.

Resolves reference maxima over a territory scope, dispatches
per-indicator scoring by metric kind, and folds indicator scores up the
tree (sub-domain, domain, final index) with the positive-polarity
penalized mean at every level.

Reference resolution needs the whole dataset; after it, per-territory
scoring is independent, deterministic, and side-effect free.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from igei.errors import AggregationError, ScoringError
from igei.metrics import (
    MetricKind,
    correction_coefficient,
    gap_metric,
    invert_polarity,
    score_capped,
    score_ratio,
    score_share,
)
from igei.model import (
    Dataset,
    IndexTree,
    IndicatorSpec,
    ObservationRecord,
    as_dataset,
)
from igei.penalized import Polarity, penalized_mean

# Allowance for floating-point drift when validating 0-100 score ranges.
_SCORE_EPS = 1e-9


@dataclass(frozen=True)
class ReferenceLevels:
    """Resolved scoring references.

    ``maxima`` maps an indicator id to its reference maximum on the
    working (polarity-adjusted) scale; ``bases`` maps
    ``(indicator, territory, period)`` to the externally sourced
    correction value for indicators whose correction borrows another
    indicator's variable.
    """

    maxima: Mapping[str, float]
    bases: Mapping[tuple[str, str, int], float] = field(default_factory=dict)


@dataclass(frozen=True)
class TerritoryReport:
    """All computed values for one territory, from leaves to the final index."""

    territory: str
    indicator_scores: Mapping[str, float]
    subdomain_values: Mapping[tuple[str, str], float]
    domain_values: Mapping[str, float]
    index: float
    period: int | None = None


def _working(value: float, polarity: Polarity) -> float:
    """Map a raw level onto the working scale (rates inverted for negative polarity)."""
    return invert_polarity(value) if polarity is Polarity.NEGATIVE else float(value)


def _correction_source(
    spec: IndicatorSpec, specs: Mapping[str, IndicatorSpec]
) -> tuple[str, str, Polarity]:
    """(source indicator id, observation attribute, source polarity) for a correction."""
    corr = spec.correction
    if corr.kind == "own_average":
        return spec.id, "x_a", spec.polarity
    source = specs.get(corr.indicator or "")
    if source is None:
        raise ScoringError(
            f"{spec.id}: external correction references unknown indicator "
            f"{corr.indicator!r}"
        )
    if source.metric is not MetricKind.STANDARD:
        raise ScoringError(
            f"{spec.id}: external correction source {source.id!r} must be a "
            f"standard-metric indicator"
        )
    return source.id, corr.source_attr, source.polarity


def resolve_references(
    dataset: Dataset | Iterable[ObservationRecord],
    specs: Mapping[str, IndicatorSpec],
    scope: Sequence[str],
    time_mode: bool = False,
) -> ReferenceLevels:
    """Resolve per-indicator reference maxima and external correction bases.

    The reference maximum is taken over ``scope`` territories only (and
    over all periods when ``time_mode`` is set, freezing a single
    reference across the whole series). Correction base values are
    collected for every territory in the dataset, so territories outside
    the scope can still be scored against the scope's references.
    """
    data = as_dataset(dataset)
    scope = list(scope)
    if not scope:
        raise ScoringError("territory scope is empty")
    maxima: dict[str, float] = {}
    bases: dict[tuple[str, str, int], float] = {}
    for spec in specs.values():
        if spec.correction.kind == "none":
            continue
        source_id, attr, source_polarity = _correction_source(spec, specs)
        base_by_tp: dict[tuple[str, int], float] = {}
        for rec in data:
            if rec.indicator != source_id:
                continue
            raw = getattr(rec, attr)
            if raw is None:
                continue
            base_by_tp[(rec.territory, rec.period)] = _working(raw, source_polarity)
        scope_values: list[float] = []
        for terr in scope:
            periods = sorted(p for (t, p) in base_by_tp if t == terr)
            if not periods:
                raise ScoringError(
                    f"{spec.id}: no {attr} value of indicator {source_id!r} for "
                    f"territory {terr!r}; dataset is incomplete"
                )
            if not time_mode and len(periods) > 1:
                raise ScoringError(
                    f"{spec.id}: territory {terr!r} has {len(periods)} periods for "
                    f"indicator {source_id!r}; score as a time series"
                )
            scope_values.extend(base_by_tp[(terr, p)] for p in periods)
        reference = max(scope_values)
        if reference <= 0:
            raise ScoringError(
                f"{spec.id}: reference maximum must be strictly positive, "
                f"got {reference}"
            )
        maxima[spec.id] = reference
        if spec.correction.kind == "external":
            for (terr, per), val in base_by_tp.items():
                bases[(spec.id, terr, per)] = val
    return ReferenceLevels(maxima=maxima, bases=bases)


def _alpha(
    spec: IndicatorSpec,
    obs: ObservationRecord,
    working_total: float | None,
    refs: ReferenceLevels,
) -> float | None:
    """Correction coefficient for one observation; ``None`` when uncorrected."""
    corr = spec.correction
    if corr.kind == "none":
        return None
    reference = refs.maxima.get(spec.id)
    if reference is None:
        raise ScoringError(f"{spec.id}: references were not resolved for this indicator")
    if corr.kind == "own_average":
        if working_total is None:
            raise ScoringError(
                f"{spec.id}: observation for {obs.territory!r} lacks the total level "
                f"required by the own-average correction"
            )
        return correction_coefficient(working_total, reference)
    base = refs.bases.get((spec.id, obs.territory, obs.period))
    if base is None:
        raise ScoringError(
            f"{spec.id}: unresolved external correction for territory "
            f"{obs.territory!r}, period {obs.period}"
        )
    return correction_coefficient(base, reference)


def compute_indicator(
    spec: IndicatorSpec, obs: ObservationRecord, refs: ReferenceLevels
) -> float:
    """Score one observation according to its indicator recipe, on 0-100."""
    if obs.kind is not spec.metric:
        raise ScoringError(
            f"{spec.id}: expected a {spec.metric.value} observation, "
            f"got {obs.kind.value}"
        )
    if spec.metric is MetricKind.STANDARD:
        if obs.x_w is None or obs.x_m is None:
            raise ScoringError(
                f"{spec.id}: standard observation for {obs.territory!r} lacks "
                f"gendered levels"
            )
        x_w = _working(obs.x_w, spec.polarity)
        x_m = _working(obs.x_m, spec.polarity)
        total = None if obs.x_a is None else _working(obs.x_a, spec.polarity)
        gamma = gap_metric(x_w, x_m)
        alpha = _alpha(spec, obs, total, refs)
        return (1.0 if alpha is None else alpha) * (1.0 - gamma) * 100.0
    if obs.value is None:
        raise ScoringError(
            f"{spec.id}: {spec.metric.value} observation for {obs.territory!r} "
            f"lacks a value"
        )
    if spec.metric is MetricKind.SHARE:
        return score_share(obs.value, _alpha(spec, obs, None, refs))
    if spec.metric is MetricKind.RATIO:
        alpha = _alpha(spec, obs, None, refs)
        return score_ratio(obs.value, 1.0 if alpha is None else alpha)
    return score_capped(obs.value)


def aggregate_level(values: Iterable[float]) -> float:
    """Fold child scores into one value with the positive-polarity penalized mean.

    The result never leaves the children's [min, max] envelope; a single
    child passes through unchanged.
    """
    vals = [float(v) for v in values]
    if not vals:
        raise AggregationError("cannot aggregate an empty level")
    for v in vals:
        if not -_SCORE_EPS <= v <= 100.0 + _SCORE_EPS:
            raise AggregationError(f"scores must lie in [0, 100], got {v}")
    return penalized_mean(vals, Polarity.POSITIVE)


def aggregate_scores(
    tree: IndexTree,
    scores: Mapping[str, float],
    territory: str,
    period: int | None = None,
) -> TerritoryReport:
    """Fold a full set of leaf scores up the tree into a territory report."""
    missing = [leaf for leaf in tree.leaf_ids() if leaf not in scores]
    if missing:
        raise ScoringError(
            f"partial report for {territory!r}: missing scores for "
            f"{', '.join(missing)}"
        )
    subdomain_values: dict[tuple[str, str], float] = {}
    domain_values: dict[str, float] = {}
    for dom in tree.domains:
        for sub in dom.subdomains:
            subdomain_values[(dom.id, sub.id)] = aggregate_level(
                scores[i] for i in sub.indicators
            )
        domain_values[dom.id] = aggregate_level(
            subdomain_values[(dom.id, sub.id)] for sub in dom.subdomains
        )
    index = aggregate_level(domain_values.values())
    return TerritoryReport(
        territory=territory,
        indicator_scores={leaf: scores[leaf] for leaf in tree.leaf_ids()},
        subdomain_values=subdomain_values,
        domain_values=domain_values,
        index=index,
        period=period,
    )


def score_territory(
    territory: str,
    dataset: Dataset | Iterable[ObservationRecord],
    specs: Mapping[str, IndicatorSpec],
    tree: IndexTree,
    refs: ReferenceLevels,
    period: int | None = None,
) -> TerritoryReport:
    """Compute every indicator for one territory and aggregate to the final index."""
    data = as_dataset(dataset)
    scores: dict[str, float] = {}
    gaps: list[str] = []
    for leaf in tree.leaf_ids():
        spec = specs.get(leaf)
        if spec is None:
            raise ScoringError(f"no indicator spec for tree leaf {leaf!r}")
        obs = data.get(territory, leaf, period)
        if obs is None:
            gaps.append(leaf)
            continue
        scores[leaf] = compute_indicator(spec, obs, refs)
    if gaps:
        raise ScoringError(
            f"partial report for {territory!r}: missing observations for "
            f"{', '.join(gaps)}"
        )
    return aggregate_scores(tree, scores, territory, period=period)


def score_time_series(
    dataset: Dataset | Iterable[ObservationRecord],
    specs: Mapping[str, IndicatorSpec],
    tree: IndexTree,
    scope: Sequence[str] | None = None,
) -> dict[int, dict[str, TerritoryReport]]:
    """Score every period against references frozen over the whole series.

    The reference maximum for each indicator is taken across all scope
    territories and all periods, so a territory's score trajectory
    depends only on its own data: identical observations in two periods
    yield identical scores no matter what other territories do.
    """
    data = as_dataset(dataset)
    if not data.periods:
        raise ScoringError("dataset has no observations")
    coverage = {
        p: {(r.territory, r.indicator) for r in data if r.period == p}
        for p in data.periods
    }
    first = coverage[data.periods[0]]
    for p, pairs in coverage.items():
        if pairs != first:
            raise ScoringError(
                f"inconsistent indicator coverage across periods (period {p} "
                f"differs from period {data.periods[0]})"
            )
    scope = list(scope) if scope is not None else list(data.territories)
    refs = resolve_references(data, specs, scope, time_mode=True)
    return {
        p: {
            terr: score_territory(terr, data, specs, tree, refs, period=p)
            for terr in data.territories
        }
        for p in data.periods
    }
