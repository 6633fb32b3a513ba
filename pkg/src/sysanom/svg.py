"""Minimal deterministic SVG line charts for index curves.

Fixed viewport, fixed tick policy, fixed number formatting: rendering the
same curve twice produces byte-identical files, with no plotting dependency.
"""

from __future__ import annotations

import math

import numpy as np

from .indices import IndexCurve

__all__ = ["curve_svg", "write_curve_svg"]

_WIDTH = 720
_PANEL_HEIGHT = 300
_GAP = 34
_LEFT = 64
_RIGHT = 18
_TOP = 30
_BOTTOM = 36


def _nice_step(span: float, target: int) -> float:
    raw = span / max(target, 1)
    magnitude = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if raw <= mult * magnitude:
            return mult * magnitude
    return 10.0 * magnitude


def _ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    step = _nice_step(hi - lo, target)
    first = math.ceil(lo / step - 1e-9)
    last = math.floor(hi / step + 1e-9)
    return [k * step for k in range(int(first), int(last) + 1)]


def _label(value: float) -> str:
    return format(value, ".6g")


def _coord(value: float) -> str:
    return format(value, ".2f")


class _Panel:
    def __init__(self, top: float, x_lo: float, x_hi: float, y_lo: float, y_hi: float):
        self.top = top
        self.x_lo, self.x_hi = x_lo, x_hi
        self.y_lo, self.y_hi = y_lo, y_hi

    def px(self, x: float) -> float:
        frac = (x - self.x_lo) / (self.x_hi - self.x_lo)
        return _LEFT + frac * (_WIDTH - _LEFT - _RIGHT)

    def py(self, y: float) -> float:
        frac = (y - self.y_lo) / (self.y_hi - self.y_lo)
        return self.top + (1.0 - frac) * _PANEL_HEIGHT

    def render(self, parts: list[str], segments: list[list[tuple[float, float]]],
               x_ticks: list[float], y_ticks: list[float], label: str,
               ref_y: float | None = None) -> None:
        left, right = self.px(self.x_lo), self.px(self.x_hi)
        top, bottom = self.py(self.y_hi), self.py(self.y_lo)
        parts.append(
            f'<rect x="{_coord(left)}" y="{_coord(top)}" width="{_coord(right - left)}" '
            f'height="{_coord(bottom - top)}" fill="none" stroke="#333333" stroke-width="1"/>'
        )
        for t in x_ticks:
            x = self.px(t)
            parts.append(
                f'<line x1="{_coord(x)}" y1="{_coord(bottom)}" x2="{_coord(x)}" y2="{_coord(bottom + 5)}" '
                f'stroke="#333333" stroke-width="1"/>'
            )
            parts.append(
                f'<text x="{_coord(x)}" y="{_coord(bottom + 18)}" font-family="monospace" font-size="11" '
                f'text-anchor="middle" fill="#333333">{_label(t)}</text>'
            )
        for t in y_ticks:
            y = self.py(t)
            parts.append(
                f'<line x1="{_coord(left - 5)}" y1="{_coord(y)}" x2="{_coord(left)}" y2="{_coord(y)}" '
                f'stroke="#333333" stroke-width="1"/>'
            )
            parts.append(
                f'<text x="{_coord(left - 8)}" y="{_coord(y + 4)}" font-family="monospace" font-size="11" '
                f'text-anchor="end" fill="#333333">{_label(t)}</text>'
            )
        parts.append(
            f'<text x="{_coord(left)}" y="{_coord(top - 8)}" font-family="monospace" font-size="12" '
            f'fill="#333333">{label}</text>'
        )
        if ref_y is not None:
            y = self.py(ref_y)
            parts.append(
                f'<line x1="{_coord(left)}" y1="{_coord(y)}" x2="{_coord(right)}" y2="{_coord(y)}" '
                f'stroke="#888888" stroke-width="1" stroke-dasharray="5,4"/>'
            )
        for segment in segments:
            if len(segment) == 1:
                x, y = segment[0]
                parts.append(
                    f'<circle cx="{_coord(self.px(x))}" cy="{_coord(self.py(y))}" r="1.5" fill="#1f5fa8"/>'
                )
                continue
            points = " ".join(f"{_coord(self.px(x))},{_coord(self.py(y))}" for x, y in segment)
            parts.append(f'<polyline points="{points}" fill="none" stroke="#1f5fa8" stroke-width="1.5"/>')


def _defined_segments(ns: np.ndarray, values: np.ndarray) -> list[list[tuple[float, float]]]:
    segments: list[list[tuple[float, float]]] = []
    current: list[tuple[float, float]] = []
    for n, v in zip(ns, values):
        if math.isnan(v):
            if current:
                segments.append(current)
                current = []
        else:
            current.append((float(n), float(v)))
    if current:
        segments.append(current)
    return segments


def curve_svg(curve: IndexCurve) -> str:
    """Render the two index charts (upward index with a 1/2 reference, scaled variation) stacked."""
    ns = curve.n_values.astype(np.float64)
    x_lo, x_hi = float(ns[0]), float(ns[-1])
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    x_ticks = _ticks(x_lo, x_hi)

    height = 2 * (_TOP + _PANEL_HEIGHT + _BOTTOM) + _GAP
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{height}" '
        f'viewBox="0 0 {_WIDTH} {height}">',
        f'<rect x="0" y="0" width="{_WIDTH}" height="{height}" fill="#ffffff"/>',
    ]

    i_panel = _Panel(_TOP, x_lo, x_hi, 0.0, 1.0)
    i_panel.render(
        parts,
        _defined_segments(ns, curve.i_values),
        x_ticks,
        [0.0, 0.25, 0.5, 0.75, 1.0],
        "upward-variation index I_n (reference 1/2)",
        ref_y=0.5,
    )

    b_hi = float(np.max(curve.b_values))
    if b_hi <= 0.0:
        b_hi = 1.0
    b_panel = _Panel(_TOP + _PANEL_HEIGHT + _BOTTOM + _GAP + _TOP, x_lo, x_hi, 0.0, b_hi)
    b_panel.render(
        parts,
        _defined_segments(ns, curve.b_values),
        x_ticks,
        _ticks(0.0, b_hi),
        f"scaled total variation B_n (p={curve.p:g})",
    )

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_curve_svg(curve: IndexCurve, path) -> None:
    """Write ``curve_svg`` output; repeated calls are byte identical."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(curve_svg(curve))
