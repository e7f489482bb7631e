"""Weighted means and the variance-penalized means used for aggregation.

The penalized arithmetic mean shifts the weighted mean by
``var(x) / (2 * ran(x))``: downward for positive-polarity data (imbalance
among components is bad) and upward for negative polarity. The shifted
value never leaves the ``[min(x), max(x)]`` envelope, and for positive
values the same ``var / (2 * bound)`` quantity brackets the gap between
the arithmetic and geometric means (the Cartwright-Field refinement of
the AM-GM inequality).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence, Union

from igei.errors import AggregationError

# Weights must sum to 1 within this tolerance.
WEIGHT_SUM_TOLERANCE = 1e-12

# Spreads at or below this are treated as constant sequences: the penalty is
# skipped instead of dividing by a vanishing range.
RANGE_TOLERANCE = 1e-12


class Polarity(Enum):
    """Direction of a quantity's relationship to well-being."""

    POSITIVE = "positive"
    NEGATIVE = "negative"


@dataclass(frozen=True)
class WeightedSequence:
    """A finite sequence of reals with non-negative weights summing to one."""

    values: tuple[float, ...]
    weights: tuple[float, ...]

    def __init__(self, values: Iterable[float], weights: Iterable[float] | None = None):
        vals = tuple(float(v) for v in values)
        if not vals:
            raise AggregationError("sequence must contain at least one value")
        if weights is None:
            w = (1.0 / len(vals),) * len(vals)
        else:
            w = tuple(float(x) for x in weights)
            if len(w) != len(vals):
                raise AggregationError(
                    f"{len(vals)} values but {len(w)} weights"
                )
            if any(x < 0 for x in w):
                raise AggregationError("weights must be non-negative")
            if abs(sum(w) - 1.0) > WEIGHT_SUM_TOLERANCE:
                raise AggregationError(f"weights must sum to 1, got {sum(w)!r}")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "weights", w)

    def __len__(self) -> int:
        return len(self.values)


SequenceLike = Union[WeightedSequence, Sequence[float]]


def _as_weighted(seq: SequenceLike) -> WeightedSequence:
    return seq if isinstance(seq, WeightedSequence) else WeightedSequence(seq)


def weighted_mean(seq: SequenceLike) -> float:
    """Weighted mean; equals the arithmetic mean under uniform weights."""
    s = _as_weighted(seq)
    # fsum: correctly rounded, hence invariant under permutation of the terms
    return math.fsum(p * x for p, x in zip(s.weights, s.values))


def weighted_variance(seq: SequenceLike) -> float:
    """Weighted population variance about the weighted mean."""
    s = _as_weighted(seq)
    m = weighted_mean(s)
    return math.fsum(p * (x - m) ** 2 for p, x in zip(s.weights, s.values))


def value_range(seq: SequenceLike) -> float:
    """Spread ``max(x) - min(x)``."""
    s = _as_weighted(seq)
    return max(s.values) - min(s.values)


def penalized_mean(seq: SequenceLike, polarity: Polarity = Polarity.POSITIVE) -> float:
    """Weighted mean shifted by ``var / (2 * range)`` against the polarity.

    Positive polarity subtracts the penalty, negative polarity adds it.
    Constant sequences (including single elements) are returned
    unpenalized, which also removes the division-by-zero case. The
    result always lies within ``[min(x), max(x)]``.
    """
    s = _as_weighted(seq)
    ran = value_range(s)
    if ran == 0.0:
        # exactly constant: the weighted mean is the constant itself
        return s.values[0]
    m = weighted_mean(s)
    if ran <= RANGE_TOLERANCE:
        return m
    penalty = weighted_variance(s) / (2.0 * ran)
    return m - penalty if polarity is Polarity.POSITIVE else m + penalty


def geometric_mean(seq: SequenceLike) -> float:
    """Weighted geometric mean of strictly positive values."""
    s = _as_weighted(seq)
    if any(x <= 0 for x in s.values):
        raise AggregationError("geometric mean requires strictly positive values")
    if min(s.values) == max(s.values):
        # constant: the product of x^p with weights summing to 1 is x itself
        return s.values[0]
    return math.exp(math.fsum(p * math.log(x) for p, x in zip(s.weights, s.values)))


def cartwright_field_bounds(seq: SequenceLike, a: float, b: float) -> tuple[float, float]:
    """Bracket the arithmetic-minus-geometric mean difference.

    For values in ``[a, b]`` with ``a > 0``, returns
    ``(var / (2b), var / (2a))``; the difference between the weighted
    arithmetic and geometric means always lies between the two, and the
    constants are the best possible.
    """
    s = _as_weighted(seq)
    if a <= 0:
        raise AggregationError(f"lower bound must be strictly positive, got {a}")
    if a > min(s.values) or b < max(s.values):
        raise AggregationError(
            f"bounds [{a}, {b}] do not enclose the values "
            f"[{min(s.values)}, {max(s.values)}]"
        )
    var = weighted_variance(s)
    return var / (2.0 * b), var / (2.0 * a)
