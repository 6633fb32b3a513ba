"""Concomitant ordering and the two variation indices over growing prefixes.

Sorting the pairs (x_t, y_t) by x carries each y along as a "concomitant".
Two statistics of the concomitant sequence y_(1), ..., y_(n) drive the
anomaly diagnosis:

* ``index_I`` -- the upward share of total variation,
  ``sum((dy)_+) / sum(|dy|)`` over adjacent concomitant differences.  A
  nondecreasing input->output map pins it at 1 (a nonincreasing one at 0),
  while persistent exogenous contamination drags it to 1/2.
* ``index_B`` -- the scaled total variation ``n**(-1/p) * sum(|dy|)``.  It
  stays bounded when the system is orderly and grows without bound under
  iid contamination.

``index_curves`` evaluates both statistics on every time-ordered prefix of a
sample.  A doubly linked list over the final sorted order supplies each newly
inserted point's neighbors in O(1), and the running sums live in exact
(Shewchuk-style) accumulators, so every prefix value is bit-for-bit identical
to a from-scratch recomputation while the whole sweep costs O(n log n).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptySample,
    InvalidP,
    LengthMismatch,
    NonFiniteValue,
    TieWarning,
    TooFewPoints,
)

__all__ = [
    "DEFAULT_N_MIN",
    "PairedSample",
    "OrderedSample",
    "IndexCurve",
    "concomitant_sort",
    "index_I",
    "index_B",
    "lambda_n",
    "index_curves",
]

# Curves start here by default; shorter prefixes swing wildly between 0 and 1
# and mostly add noise to plots and verdicts.
DEFAULT_N_MIN = 20


def _frozen_array(values, dtype=np.float64) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PairedSample:
    """Aligned input/output observations in time order."""

    x: np.ndarray
    y: np.ndarray
    label: str | None = None

    def __post_init__(self):
        x = np.array(self.x, dtype=np.float64)
        y = np.array(self.y, dtype=np.float64)
        if x.ndim != 1 or y.ndim != 1:
            raise LengthMismatch("x and y must be one-dimensional")
        if x.size != y.size:
            raise LengthMismatch(f"x has {x.size} values but y has {y.size}")
        if x.size == 0:
            raise EmptySample("need at least one (x, y) pair")
        if not (np.isfinite(x).all() and np.isfinite(y).all()):
            raise NonFiniteValue("x and y must contain only finite values")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __len__(self) -> int:
        return int(self.x.size)


@dataclass(frozen=True, eq=False)
class OrderedSample:
    """Input order statistics with their output concomitants.

    ``permutation`` maps sorted positions back to time indices:
    ``x_sorted == x[permutation]``.  ``tie_count`` counts adjacent equal
    entries of ``x_sorted``; tied inputs keep their time order, so the
    concomitant sequence is reproducible but partly conventional.
    """

    x_sorted: np.ndarray
    y_concomitant: np.ndarray
    tie_count: int
    permutation: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x_sorted", _frozen_array(self.x_sorted))
        object.__setattr__(self, "y_concomitant", _frozen_array(self.y_concomitant))
        object.__setattr__(self, "permutation", _frozen_array(self.permutation, dtype=np.int64))
        object.__setattr__(self, "tie_count", int(self.tie_count))
        if self.x_sorted.size != self.y_concomitant.size:
            raise LengthMismatch("x_sorted and y_concomitant must have equal length")
        if self.x_sorted.size == 0:
            raise EmptySample("ordered sample is empty")

    def __len__(self) -> int:
        return int(self.x_sorted.size)


def concomitant_sort(sample: PairedSample) -> OrderedSample:
    """Sort the pairs by x, carrying each y along as its concomitant.

    The sort is stable, so tied inputs keep their original time order; a
    ``TieWarning`` flags that case because the concomitant sequence is then a
    convention rather than forced by the data.
    """
    order = np.argsort(sample.x, kind="stable")
    x_sorted = sample.x[order]
    tie_count = int(np.count_nonzero(x_sorted[1:] == x_sorted[:-1]))
    if tie_count:
        warnings.warn(
            f"{tie_count} tied adjacent input value(s); concomitant order falls back to time order",
            TieWarning,
            stacklevel=2,
        )
    return OrderedSample(x_sorted, sample.y[order], tie_count, order)


def _check_p(p: float) -> float:
    p = float(p)
    if not math.isfinite(p) or p <= 0.0:
        raise InvalidP(f"moment order p must be a positive finite real, got {p!r}")
    return p


def _require_pairs(ordered: OrderedSample) -> int:
    n = len(ordered)
    if n < 2:
        raise TooFewPoints(f"need at least 2 points, got {n}")
    return n


def index_I(ordered: OrderedSample) -> float | None:
    """Upward share of the concomitant total variation, in [0, 1].

    Returns None when the total variation is exactly zero (constant
    concomitants): the 0/0 ratio carries no information.
    """
    _require_pairs(ordered)
    diffs = np.diff(ordered.y_concomitant)
    total = math.fsum(np.abs(diffs))
    if total == 0.0:
        return None
    return math.fsum(np.maximum(diffs, 0.0)) / total


def index_B(ordered: OrderedSample, p: float = 2.0) -> float:
    """Scaled total variation of the concomitants, ``n**(-1/p) * sum(|dy|)``."""
    p = _check_p(p)
    n = _require_pairs(ordered)
    total = math.fsum(np.abs(np.diff(ordered.y_concomitant)))
    return n ** (-1.0 / p) * total


def lambda_n(ordered: OrderedSample) -> float | None:
    """Net concomitant rise over total variation, in [-1, 1].

    Whenever defined, ``index_I == (1 + lambda_n) / 2`` holds identically.
    Returns None in the same degenerate 0/0 case as ``index_I``.
    """
    _require_pairs(ordered)
    y = ordered.y_concomitant
    total = math.fsum(np.abs(np.diff(y)))
    if total == 0.0:
        return None
    return float(y[-1] - y[0]) / total


@dataclass(frozen=True, eq=False)
class IndexCurve:
    """``index_I`` and ``index_B`` evaluated at each prefix size in ``n_values``.

    ``i_values`` stores NaN where the index is undefined (the 0/0 prefix);
    mask with ``i_defined`` before doing arithmetic.  ``b_values`` is always
    defined and nonnegative.
    """

    n_values: np.ndarray
    i_values: np.ndarray
    b_values: np.ndarray
    p: float

    def __post_init__(self):
        object.__setattr__(self, "n_values", _frozen_array(self.n_values, dtype=np.int64))
        object.__setattr__(self, "i_values", _frozen_array(self.i_values))
        object.__setattr__(self, "b_values", _frozen_array(self.b_values))
        object.__setattr__(self, "p", _check_p(self.p))
        if not (self.n_values.size == self.i_values.size == self.b_values.size):
            raise LengthMismatch("curve arrays must have equal length")
        if self.n_values.size == 0:
            raise EmptySample("curve has no points")
        if np.any(np.diff(self.n_values) <= 0):
            raise ValueError("n_values must be strictly increasing")
        defined = ~np.isnan(self.i_values)
        i_def = self.i_values[defined]
        if i_def.size and (np.any(i_def < 0.0) or np.any(i_def > 1.0)):
            raise ValueError("defined i_values must lie in [0, 1]")
        if np.any(np.isnan(self.b_values)) or np.any(self.b_values < 0.0):
            raise ValueError("b_values must be defined and nonnegative")

    @property
    def i_defined(self) -> np.ndarray:
        """Boolean mask of prefixes where ``index_I`` is defined."""
        return ~np.isnan(self.i_values)

    def __len__(self) -> int:
        return int(self.n_values.size)


def _accumulate(partials: list[float], value: float) -> None:
    """Fold ``value`` into a Shewchuk partials list.

    The list always represents the running sum exactly (each two-sum below is
    error free), so adding the negation of a previously added term removes it
    exactly, and ``math.fsum(partials)`` yields the correctly rounded total of
    whatever multiset of terms is currently held.
    """
    x = value
    i = 0
    for y in partials:
        if abs(x) < abs(y):
            x, y = y, x
        hi = x + y
        lo = y - (hi - x)
        if lo != 0.0:
            partials[i] = lo
            i += 1
        x = hi
    partials[i:] = [x]


def index_curves(sample: PairedSample, n_min: int = DEFAULT_N_MIN, p: float = 2.0) -> IndexCurve:
    """Evaluate both indices on every time-ordered prefix of ``sample``.

    The result is identical, bit for bit, to calling ``concomitant_sort``
    plus ``index_I``/``index_B`` on each prefix separately: inserting the
    n-th point replaces one adjacent concomitant gap by two, and the exact
    accumulators make the running sums order independent.
    """
    p = _check_p(p)
    size = len(sample)
    if n_min < 2:
        raise TooFewPoints(f"n_min must be at least 2, got {n_min}")
    if size < n_min:
        raise TooFewPoints(f"sample has {size} points, need at least n_min={n_min}")

    order = np.argsort(sample.x, kind="stable")
    x_sorted = sample.x[order]
    tie_count = int(np.count_nonzero(x_sorted[1:] == x_sorted[:-1]))
    if tie_count:
        warnings.warn(
            f"{tie_count} tied adjacent input value(s); concomitant order falls back to time order",
            TieWarning,
            stacklevel=2,
        )

    rank = np.empty(size, dtype=np.int64)
    rank[order] = np.arange(size)
    rank_of = rank.tolist()
    y_at = sample.y[order].tolist()  # concomitant value at each sorted position

    # Neighbors of each point among its time-predecessors: peel points off a
    # doubly linked list over the full sorted order, latest point first.  The
    # prefix order under the stable tie rule is the full order restricted to
    # the prefix, so the recorded neighbors are exactly the insertion-time ones.
    prev_pos = list(range(-1, size - 1))
    next_pos = list(range(1, size + 1))
    pred = [0] * size
    succ = [0] * size
    for t in range(size - 1, 0, -1):
        r = rank_of[t]
        pr = prev_pos[r]
        su = next_pos[r]
        pred[t] = pr
        succ[t] = su
        if pr >= 0:
            next_pos[pr] = su
        if su < size:
            prev_pos[su] = pr

    count = size - n_min + 1
    i_values = np.full(count, np.nan)
    b_values = np.empty(count)
    abs_parts: list[float] = []  # exact running sum of |dy| over current adjacent gaps
    pos_parts: list[float] = []  # exact running sum of (dy)_+
    exponent = -1.0 / p
    fsum = math.fsum
    for t in range(1, size):
        yt = y_at[rank_of[t]]
        pr = pred[t]
        su = succ[t]
        if pr >= 0 and su < size:
            gone = y_at[su] - y_at[pr]
            _accumulate(abs_parts, -abs(gone))
            if gone > 0.0:
                _accumulate(pos_parts, -gone)
        if pr >= 0:
            d = yt - y_at[pr]
            _accumulate(abs_parts, abs(d))
            if d > 0.0:
                _accumulate(pos_parts, d)
        if su < size:
            d = y_at[su] - yt
            _accumulate(abs_parts, abs(d))
            if d > 0.0:
                _accumulate(pos_parts, d)
        n = t + 1
        if n >= n_min:
            total = fsum(abs_parts)
            k = n - n_min
            b_values[k] = n**exponent * total
            if total != 0.0:
                i_values[k] = fsum(pos_parts) / total
    return IndexCurve(np.arange(n_min, size + 1, dtype=np.int64), i_values, b_values, p)
