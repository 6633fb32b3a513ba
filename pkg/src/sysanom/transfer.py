"""Piecewise-linear transfer maps and the theoretical limit of the upward index.

A transfer map here is continuous piecewise linear with constant continuation
outside its breakpoint span, so its derivative is piecewise constant and
vanishes off the span.  For an orderly system driven through such a map, the
upward-variation index converges to a ratio of slope integrals that reduces
to a closed form over the breakpoint values; ``limit_index`` and
``lambda_h0`` compute that form exactly.

Contamination can enter before the map, after it, or at both stages
(``TransferMode``); ``apply_transfer`` evaluates the contaminated output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InvalidRange, NonFiniteValue

__all__ = [
    "TransferMode",
    "PiecewiseLinearBaseline",
    "DerivativeDensity",
    "clamped",
    "eval_baseline",
    "derivative_density",
    "limit_index",
    "lambda_h0",
    "apply_transfer",
    "baseline_to_json",
    "baseline_from_json",
]


class TransferMode(Enum):
    """Where contamination enters: before the map, after it, or both."""

    TF1 = "tf1"  # h(x + delta)
    TF2 = "tf2"  # h(x) + eps
    TF3 = "tf3"  # h(x + delta) + eps


@dataclass(frozen=True, eq=False)
class PiecewiseLinearBaseline:
    """Continuous piecewise-linear map, constant outside the breakpoint span."""

    breakpoints: np.ndarray
    values: np.ndarray
    left_extension: str = "constant"
    right_extension: str = "constant"

    def __post_init__(self):
        bp = np.array(self.breakpoints, dtype=np.float64)
        vals = np.array(self.values, dtype=np.float64)
        if bp.ndim != 1 or vals.ndim != 1 or bp.size != vals.size:
            raise ValueError("breakpoints and values must be one-dimensional and equally long")
        if bp.size < 2:
            raise ValueError("need at least two breakpoints (one segment)")
        if not (np.isfinite(bp).all() and np.isfinite(vals).all()):
            raise NonFiniteValue("breakpoints and values must be finite")
        if not np.all(np.diff(bp) > 0.0):
            raise ValueError("breakpoints must be strictly increasing")
        if self.left_extension != "constant" or self.right_extension != "constant":
            raise ValueError("only constant continuation outside the span is supported")
        bp.setflags(write=False)
        vals.setflags(write=False)
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)

    @property
    def span(self) -> tuple[float, float]:
        return float(self.breakpoints[0]), float(self.breakpoints[-1])


def clamped(a: float, b: float) -> PiecewiseLinearBaseline:
    """Clamp window: identity on [a, b], constant at the nearer edge outside.

    ``a == b`` degenerates to the constant map; it is represented by a flat
    unit-length segment so the breakpoints stay strictly increasing.
    """
    a = float(a)
    b = float(b)
    if not (math.isfinite(a) and math.isfinite(b)):
        raise NonFiniteValue("window edges must be finite")
    if a > b:
        raise InvalidRange(f"clamp window needs a <= b, got a={a}, b={b}")
    if a == b:
        return PiecewiseLinearBaseline((a, a + 1.0), (a, a))
    return PiecewiseLinearBaseline((a, b), (a, b))


def eval_baseline(h: PiecewiseLinearBaseline, x) -> float | np.ndarray:
    """Evaluate ``h`` at scalar or array ``x``: interpolation inside the span, edge values outside."""
    arr = np.asarray(x, dtype=np.float64)
    if not np.isfinite(arr).all():
        raise NonFiniteValue("x must be finite")
    out = np.interp(arr, h.breakpoints, h.values)
    if arr.ndim == 0:
        return float(out)
    return out


@dataclass(frozen=True, eq=False)
class DerivativeDensity:
    """Piecewise-constant derivative: ``slopes[i]`` on ``intervals[i]``, zero outside."""

    intervals: np.ndarray
    slopes: np.ndarray

    def __post_init__(self):
        iv = np.array(self.intervals, dtype=np.float64)
        sl = np.array(self.slopes, dtype=np.float64)
        if iv.ndim != 2 or iv.shape[1] != 2 or sl.ndim != 1 or iv.shape[0] != sl.size:
            raise ValueError("intervals must be (m, 2) with m matching slopes")
        iv.setflags(write=False)
        sl.setflags(write=False)
        object.__setattr__(self, "intervals", iv)
        object.__setattr__(self, "slopes", sl)

    def at(self, x: float) -> float:
        """Slope at ``x`` (right-continuous at interior breakpoints, zero outside the span)."""
        x = float(x)
        for (lo, hi), slope in zip(self.intervals, self.slopes):
            if lo <= x < hi:
                return float(slope)
        if self.intervals.size and x == self.intervals[-1, 1]:
            return float(self.slopes[-1])
        return 0.0


def derivative_density(h: PiecewiseLinearBaseline) -> DerivativeDensity:
    """Slopes of ``h`` per breakpoint interval (the derivative vanishes outside the span)."""
    bp = h.breakpoints
    slopes = np.diff(h.values) / np.diff(bp)
    return DerivativeDensity(np.column_stack([bp[:-1], bp[1:]]), slopes)


def limit_index(h: PiecewiseLinearBaseline) -> float | None:
    """Limiting upward index of an orderly system driven through ``h``.

    Equal to the positive slope mass over the total slope mass, which for a
    piecewise-linear map reduces to sums of breakpoint value increments.
    Returns None when the map is constant (no variation to take a share of).
    """
    dv = np.diff(h.values)
    total = math.fsum(np.abs(dv))
    if total == 0.0:
        return None
    return math.fsum(np.maximum(dv, 0.0)) / total


def lambda_h0(h: PiecewiseLinearBaseline) -> float | None:
    """Net rise over total variation across the span, in [-1, 1].

    Whenever defined, ``limit_index == (1 + lambda_h0) / 2``.  None when the
    map is constant.
    """
    dv = np.diff(h.values)
    total = math.fsum(np.abs(dv))
    if total == 0.0:
        return None
    return float(h.values[-1] - h.values[0]) / total


def apply_transfer(mode: TransferMode, h: PiecewiseLinearBaseline, x, delta=0.0, eps=0.0):
    """Contaminated output under ``mode``; zero contamination reproduces ``eval_baseline``.

    Channels the mode ignores (eps for TF1, delta for TF2) are not evaluated,
    matching the mode definitions rather than silently mixing them in.
    """
    x_arr = np.asarray(x, dtype=np.float64)
    delta_arr = np.asarray(delta, dtype=np.float64)
    eps_arr = np.asarray(eps, dtype=np.float64)
    for name, v in (("x", x_arr), ("delta", delta_arr), ("eps", eps_arr)):
        if not np.isfinite(v).all():
            raise NonFiniteValue(f"{name} must be finite")
    if mode is TransferMode.TF1:
        out = eval_baseline(h, x_arr + delta_arr)
    elif mode is TransferMode.TF2:
        out = eval_baseline(h, x_arr) + eps_arr
    elif mode is TransferMode.TF3:
        out = eval_baseline(h, x_arr + delta_arr) + eps_arr
    else:
        raise TypeError(f"unknown transfer mode: {mode!r}")
    if np.ndim(out) == 0:
        return float(out)
    return out


def baseline_to_json(h: PiecewiseLinearBaseline) -> dict:
    """JSON-ready form: ``{"breakpoints": [...], "values": [...]}``."""
    return {
        "breakpoints": [float(v) for v in h.breakpoints],
        "values": [float(v) for v in h.values],
    }


def baseline_from_json(obj: dict) -> PiecewiseLinearBaseline:
    """Inverse of ``baseline_to_json``."""
    try:
        breakpoints = obj["breakpoints"]
        values = obj["values"]
    except (TypeError, KeyError) as exc:
        raise ValueError("baseline JSON needs 'breakpoints' and 'values' arrays") from exc
    return PiecewiseLinearBaseline(breakpoints, values)
