"""Decision rules turning an index curve into a verdict.

The underlying limits are qualitative: the upward index either approaches 1/2
or stays away from it, and the scaled total variation either stays bounded or
grows without bound.  Every numeric threshold below is therefore an artifact
decision exposed as a configuration knob, and the verdict always carries the
raw diagnostics so a different thresholding can be re-derived from it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import AllUndefined, TooFewPoints
from .indices import IndexCurve

__all__ = ["Classification", "DetectorConfig", "Verdict", "classify"]


class Classification(Enum):
    ANOMALY_AFFECTED = "anomaly_affected"
    ANOMALY_FREE = "anomaly_free"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class DetectorConfig:
    """Thresholds for the two votes.

    tail_fraction: trailing share of the curve the upward-index vote is
        computed on.
    i_band: half-width of the acceptance band around 1/2 for the upward
        index.
    b_growth_threshold: log-log slope of the scaled variation above which
        the growth vote fires.  iid contamination gives slope 1 - 1/p,
        i.e. 1/2 at the default p = 2, while a bounded curve scaled by
        ``n**(-1/p)`` drifts flat or downward, so the default sits between.
    min_points: smallest usable tail window.
    """

    tail_fraction: float = 0.5
    i_band: float = 0.05
    b_growth_threshold: float = 0.25
    min_points: int = 30

    def __post_init__(self):
        if not (0.0 < self.tail_fraction <= 1.0):
            raise ValueError("tail_fraction must lie in (0, 1]")
        if not (math.isfinite(self.i_band) and self.i_band > 0.0):
            raise ValueError("i_band must be positive")
        if not (math.isfinite(self.b_growth_threshold) and self.b_growth_threshold > 0.0):
            raise ValueError("b_growth_threshold must be positive")
        if self.min_points < 2:
            raise ValueError("min_points must be at least 2")


@dataclass(frozen=True)
class Verdict:
    """Classification plus the diagnostics it was derived from.

    ``i_tail_mean`` and ``i_tail_absdev`` are the tail means of the defined
    upward-index values and of their absolute deviation from 1/2;
    ``i_trend_slope`` is the least-squares slope of that deviation against n;
    ``b_growth_exponent`` is the least-squares slope of log B against log n
    over the whole curve.  A diagnostic is None when its side had nothing to
    measure.
    """

    classification: Classification
    i_tail_mean: float | None
    i_tail_absdev: float | None
    i_trend_slope: float | None
    b_growth_exponent: float | None
    notes: str = ""

    def to_dict(self) -> dict:
        return {
            "classification": self.classification.value,
            "i_tail_mean": self.i_tail_mean,
            "i_tail_absdev": self.i_tail_absdev,
            "i_trend_slope": self.i_trend_slope,
            "b_growth_exponent": self.b_growth_exponent,
            "notes": self.notes,
        }


def classify(curve: IndexCurve, config: DetectorConfig | None = None) -> Verdict:
    """Apply the two-vote rule to the tail window of ``curve``.

    Vote one (upward index): affected when the tail mean of |I - 1/2| sits
    inside ``i_band`` and the fitted trend of that deviation does not escape
    the band across the window.  Vote two (growth): affected when the log-log
    slope of B against n over the whole curve exceeds ``b_growth_threshold``;
    boundedness is a whole-trajectory property, and restricting the fit to
    the tail would read a heavy contamination jump that landed earlier as
    decay.  Agreement decides the verdict; disagreement, or an upward index
    that is undefined across the curve, yields ``inconclusive`` with a note.
    """
    config = config or DetectorConfig()
    m = len(curve)
    if m == 0:
        raise AllUndefined("curve has no points on either side")
    tail_len = max(int(math.ceil(config.tail_fraction * m)), 1)
    if tail_len < config.min_points:
        raise TooFewPoints(
            f"tail window has {tail_len} points, need at least min_points={config.min_points}"
        )
    n_tail = curve.n_values[m - tail_len :].astype(np.float64)
    i_tail = curve.i_values[m - tail_len :]

    notes: list[str] = []

    # Growth vote: slope of log B against log n over the whole curve.
    # Zero-variation points carry no log mass; a curve of (almost) only zeros
    # is the strongest possible "bounded" evidence and counts as exponent 0.
    n_all = curve.n_values.astype(np.float64)
    positive = curve.b_values > 0.0
    if int(np.count_nonzero(positive)) >= 2:
        b_growth_exponent = float(
            np.polyfit(np.log(n_all[positive]), np.log(curve.b_values[positive]), 1)[0]
        )
    else:
        b_growth_exponent = 0.0
        notes.append("scaled variation is (almost) identically zero; treated as bounded")
    b_affected = b_growth_exponent > config.b_growth_threshold

    defined_total = int(np.count_nonzero(curve.i_defined))
    if defined_total == 0:
        notes.append(
            "upward index undefined on the whole curve; the growth vote alone cannot settle the verdict"
        )
        return Verdict(Classification.INCONCLUSIVE, None, None, None, b_growth_exponent, "; ".join(notes))
    if defined_total < config.min_points:
        raise TooFewPoints(
            f"curve has {defined_total} defined upward-index values, need at least {config.min_points}"
        )

    defined = ~np.isnan(i_tail)
    if int(np.count_nonzero(defined)) < 2:
        notes.append("fewer than two defined upward-index values in the tail window")
        return Verdict(Classification.INCONCLUSIVE, None, None, None, b_growth_exponent, "; ".join(notes))

    ns = n_tail[defined]
    ivals = i_tail[defined]
    deviation = np.abs(ivals - 0.5)
    i_tail_mean = float(np.mean(ivals))
    i_tail_absdev = float(np.mean(deviation))
    i_trend_slope = float(np.polyfit(ns, deviation, 1)[0])
    # "Consistent with approach to 1/2": the fitted deviation must not climb
    # by more than one band-width across the window.
    escape = i_trend_slope * float(ns[-1] - ns[0])
    i_affected = i_tail_absdev <= config.i_band and escape <= config.i_band

    if i_affected and b_affected:
        classification = Classification.ANOMALY_AFFECTED
    elif not i_affected and not b_affected:
        classification = Classification.ANOMALY_FREE
    else:
        classification = Classification.INCONCLUSIVE
        notes.append(
            "votes disagree: upward index says "
            f"{'affected' if i_affected else 'free'}, growth says {'affected' if b_affected else 'free'}"
        )
    return Verdict(
        classification,
        i_tail_mean,
        i_tail_absdev,
        i_trend_slope,
        b_growth_exponent,
        "; ".join(notes),
    )
