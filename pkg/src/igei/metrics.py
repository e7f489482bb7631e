"""Scalar formulas turning gendered observations into 0-100 indicator scores.

Two scoring families are provided. The classic level-based family
(``gei_*``, ``score_gei``) compares women's achievement to the total
population's and rescales to 1-100. The symmetric family used throughout
this package (``gap_metric``, ``correction_coefficient``,
``score_standard`` and the per-kind variants) treats the two genders
interchangeably, rescales to 0-100, and discounts each territory by its
achievement relative to a reference midway between its own average and
the best-performing territory's.

All functions are pure and operate on immutable scalars; they are safe
to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from igei.errors import (
    DegenerateInputError,
    InconsistentReferenceError,
    MetricInputError,
    OutOfModelError,
)


class MetricKind(str, Enum):
    """How an indicator's raw observation is turned into a score."""

    STANDARD = "standard"  # women/men levels plus a total-population level
    SHARE = "share"        # single share in [0, 1]; the male share is its complement
    RATIO = "ratio"        # single positive ratio of two female rates
    CAPPED = "capped"      # single non-negative coverage ratio, capped at 1


@dataclass(frozen=True)
class GenderPair:
    """One gendered measurement: women's and men's levels, optional total level."""

    x_w: float
    x_m: float
    x_a: float | None = None

    def __post_init__(self) -> None:
        if self.x_w < 0 or self.x_m < 0:
            raise MetricInputError(
                f"gendered levels must be non-negative, got ({self.x_w}, {self.x_m})"
            )
        if self.x_a is not None and self.x_a < 0:
            raise MetricInputError(f"total level must be non-negative, got {self.x_a}")


def gap_metric(x_w: float, x_m: float) -> float:
    """Relative gender gap ``|x_w - x_m| / (x_w + x_m)``.

    Symmetric in the two genders and bounded to [0, 1] for any
    non-negative levels: 0 means identical outcomes, 1 means one
    gender's outcome is zero.

    Raises:
        DegenerateInputError: if both levels are zero (0/0 is undefined;
            upstream validation should reject such observations).
    """
    if x_w < 0 or x_m < 0:
        raise MetricInputError(f"levels must be non-negative, got ({x_w}, {x_m})")
    total = x_w + x_m
    if total == 0:
        raise DegenerateInputError("gender gap is undefined when both levels are zero")
    return abs(x_w - x_m) / total


def gei_gap_metric(x_w: float, x_a: float) -> float:
    """Level-based gender gap ``|1 - x_w / x_a|``.

    Unlike :func:`gap_metric` this compares women's level to the total
    population's and is not bounded above by 1 when ``x_w > 2 * x_a``;
    callers scoring with it must treat values above 1 as out of model.
    """
    if x_w < 0:
        raise MetricInputError(f"women's level must be non-negative, got {x_w}")
    if x_a <= 0:
        raise DegenerateInputError(f"total level must be positive, got {x_a}")
    return abs(1.0 - x_w / x_a)


def correction_coefficient(x_a: float, x_ref: float) -> float:
    """Achievement correction ``2 * x_a / (x_ref + x_a)``.

    ``x_ref`` is the maximum achievement over the territory set, so the
    coefficient lies in [0, 1], reaching 1 only for the best performer.
    Relative to the plain ratio ``x_a / x_ref`` it compares a territory
    to a reference midway between its own level and the best one,
    softening the shadow the top performer casts on weak territories.
    """
    if x_ref <= 0:
        raise MetricInputError(f"reference maximum must be positive, got {x_ref}")
    if x_a < 0:
        raise MetricInputError(f"achievement must be non-negative, got {x_a}")
    if x_a > x_ref:
        raise InconsistentReferenceError(
            f"achievement {x_a} exceeds reference maximum {x_ref}"
        )
    return 2.0 * x_a / (x_ref + x_a)


def gei_correction_coefficient(x_a: float, x_ref: float) -> float:
    """Classic achievement correction ``x_a / x_ref``."""
    if x_ref <= 0:
        raise MetricInputError(f"reference maximum must be positive, got {x_ref}")
    if x_a < 0:
        raise MetricInputError(f"achievement must be non-negative, got {x_a}")
    if x_a > x_ref:
        raise InconsistentReferenceError(
            f"achievement {x_a} exceeds reference maximum {x_ref}"
        )
    return x_a / x_ref


def score_standard(x_w: float, x_m: float, x_a: float, x_ref: float) -> float:
    """Standard indicator score on the 0-100 scale.

    Combines the symmetric gap with the achievement correction:
    ``correction_coefficient(x_a, x_ref) * (1 - gap_metric(x_w, x_m)) * 100``.
    """
    alpha = correction_coefficient(x_a, x_ref)
    return alpha * (1.0 - gap_metric(x_w, x_m)) * 100.0


def score_gei(x_w: float, x_a: float, x_ref: float) -> float:
    """Classic level-based indicator score on the 1-100 scale.

    ``1 + (x_a / x_ref) * (1 - |1 - x_w / x_a|) * 99``. The floor of 1
    was chosen historically so that downstream geometric aggregation
    never meets a zero.

    Raises:
        OutOfModelError: if the level-based gap exceeds 1 (women's level
            more than twice the total), where the scaled score would
            fall below its floor.
    """
    gamma = gei_gap_metric(x_w, x_a)
    if gamma > 1.0:
        raise OutOfModelError(
            f"level-based gap {gamma} exceeds 1; observation is outside the model"
        )
    alpha = gei_correction_coefficient(x_a, x_ref)
    return 1.0 + alpha * (1.0 - gamma) * 99.0


def invert_polarity(x: float) -> float:
    """Reverse a rate's direction: ``1 - x``.

    Only defined for rates in [0, 1]; used to fold indicators where a
    higher rate means worse outcomes (e.g. smoking) into the scoring
    convention where higher is better.
    """
    if not 0.0 <= x <= 1.0:
        raise MetricInputError(f"polarity inversion is only defined for rates, got {x}")
    return 1.0 - x


def score_share(share: float, correction: float | None = None) -> float:
    """Score a single share whose complement plays the male role.

    With ``s`` the women's share, the gap metric collapses to
    ``1 - |1 - 2s|``; the optional correction multiplies it before
    rescaling to 0-100. A share of 0.5 scores 100 (times the correction).
    """
    if not 0.0 <= share <= 1.0:
        raise MetricInputError(f"share must lie in [0, 1], got {share}")
    alpha = 1.0 if correction is None else correction
    if not 0.0 <= alpha <= 1.0:
        raise MetricInputError(f"correction must lie in [0, 1], got {correction}")
    return alpha * (1.0 - abs(1.0 - 2.0 * share)) * 100.0


def score_ratio(ratio: float, correction: float) -> float:
    """Score a positive ratio of two female rates.

    Writing the ratio ``r = num / den`` turns the symmetric gap into
    ``|r - 1| / (r + 1)``, so the score is
    ``correction * (1 - |r - 1| / (r + 1)) * 100`` and is invariant
    under ``r <-> 1/r``.
    """
    if ratio <= 0:
        raise MetricInputError(f"ratio must be positive, got {ratio}")
    if not 0.0 <= correction <= 1.0:
        raise MetricInputError(f"correction must lie in [0, 1], got {correction}")
    return correction * (1.0 - abs(ratio - 1.0) / (ratio + 1.0)) * 100.0


def score_capped(value: float) -> float:
    """Score a coverage ratio as ``min(1, value) * 100``, with no correction."""
    if value < 0:
        raise MetricInputError(f"coverage ratio must be non-negative, got {value}")
    return min(1.0, value) * 100.0
