"""Descriptive summaries, correlation matrices, and ranking tables.

Conventions match the published result tables: population standard
deviation (n denominator), coefficient of variation sd/mean, and
quantiles by linear interpolation between order statistics at position
``(n - 1) * q + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from igei.errors import StatisticsError
from igei.pipeline import TerritoryReport


@dataclass(frozen=True)
class DescriptiveSummary:
    """Location, spread, and quartiles of one score column."""

    mean: float
    sd: float | None
    cv: float | None
    min: float
    p25: float
    p50: float
    p75: float
    max: float


def descriptive_summary(values: Iterable[float]) -> DescriptiveSummary:
    """Summarize a score column.

    ``sd`` is the population standard deviation and needs at least two
    values; ``cv = sd / mean`` is undefined (None) when the mean is zero.
    """
    arr = np.asarray(list(values), dtype=float)
    if arr.size == 0:
        raise StatisticsError("cannot summarize an empty sequence")
    arr = np.sort(arr)  # fixed summation order: exactly permutation-invariant
    mean = float(arr.mean())
    sd = float(arr.std(ddof=0)) if arr.size >= 2 else None
    cv = sd / mean if sd is not None and mean != 0 else None
    q25, q50, q75 = (float(q) for q in np.percentile(arr, [25, 50, 75]))
    return DescriptiveSummary(
        mean=mean,
        sd=sd,
        cv=cv,
        min=float(arr.min()),
        p25=q25,
        p50=q50,
        p75=q75,
        max=float(arr.max()),
    )


def correlation_matrix(columns: Sequence[Sequence[float]]) -> np.ndarray:
    """Pairwise Pearson correlations of equal-length columns.

    Returns a symmetric matrix with unit diagonal, one row/column per
    input column, clipped to [-1, 1].
    """
    if len(columns) < 2:
        raise StatisticsError("need at least two columns to correlate")
    lengths = {len(c) for c in columns}
    if len(lengths) != 1:
        raise StatisticsError("columns must all have the same length")
    if lengths.pop() < 3:
        raise StatisticsError("need at least three observations per column")
    mat = np.asarray([list(c) for c in columns], dtype=float)
    stds = mat.std(axis=1)
    constant = np.flatnonzero(stds == 0)
    if constant.size:
        raise StatisticsError(
            f"correlation is undefined for constant columns "
            f"(positions {', '.join(map(str, constant))})"
        )
    return np.clip(np.corrcoef(mat), -1.0, 1.0)


def rank_table(reports: Iterable[TerritoryReport]) -> list[TerritoryReport]:
    """Order reports by final index, best first; ties break alphabetically."""
    return sorted(reports, key=lambda r: (-r.index, r.territory))
