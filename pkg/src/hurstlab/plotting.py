"""Minimal deterministic SVG rendering for curves and histograms.

Hand-rolled on purpose: the output is a pure function of the input data
(no timestamps, font probing or library version drift), so plots can be
diffed and counted structurally. Curve markers are <circle> elements,
the fitted line is a single <line class="fit">, histogram bars are
<rect class="bar"> elements.
"""

from __future__ import annotations

import math

from .errors import DataError

_WIDTH, _HEIGHT = 640, 440
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 70, 20, 20, 50


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _axis_ticks(lo: float, hi: float, count: int = 6) -> list[float]:
    if hi <= lo:
        return [lo]
    step = (hi - lo) / (count - 1)
    return [lo + i * step for i in range(count)]


class _Canvas:
    def __init__(self, x_range, y_range, x_label, y_label):
        self.x_lo, self.x_hi = x_range
        self.y_lo, self.y_hi = y_range
        self.parts: list[str] = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" '
            f'height="{_HEIGHT}" viewBox="0 0 {_WIDTH} {_HEIGHT}">',
            f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        ]
        self._axes(x_label, y_label)

    def x_px(self, x: float) -> float:
        span = self.x_hi - self.x_lo or 1.0
        return _MARGIN_L + (x - self.x_lo) / span * (_WIDTH - _MARGIN_L - _MARGIN_R)

    def y_px(self, y: float) -> float:
        span = self.y_hi - self.y_lo or 1.0
        return _HEIGHT - _MARGIN_B - (y - self.y_lo) / span * (_HEIGHT - _MARGIN_T - _MARGIN_B)

    def _axes(self, x_label: str, y_label: str) -> None:
        x0, y0 = _MARGIN_L, _HEIGHT - _MARGIN_B
        x1, y1 = _WIDTH - _MARGIN_R, _MARGIN_T
        self.parts.append(
            f'<line class="axis" x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>'
        )
        self.parts.append(
            f'<line class="axis" x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>'
        )
        for tx in _axis_ticks(self.x_lo, self.x_hi):
            px = self.x_px(tx)
            self.parts.append(
                f'<line class="tick" x1="{_fmt(px)}" y1="{y0}" x2="{_fmt(px)}" y2="{y0 + 5}" stroke="black"/>'
            )
            self.parts.append(
                f'<text class="ticklabel" x="{_fmt(px)}" y="{y0 + 18}" font-size="11" '
                f'text-anchor="middle">{_fmt(tx)}</text>'
            )
        for ty in _axis_ticks(self.y_lo, self.y_hi):
            py = self.y_px(ty)
            self.parts.append(
                f'<line class="tick" x1="{x0 - 5}" y1="{_fmt(py)}" x2="{x0}" y2="{_fmt(py)}" stroke="black"/>'
            )
            self.parts.append(
                f'<text class="ticklabel" x="{x0 - 8}" y="{_fmt(py + 4)}" font-size="11" '
                f'text-anchor="end">{_fmt(ty)}</text>'
            )
        self.parts.append(
            f'<text class="xlabel" x="{(x0 + x1) / 2}" y="{_HEIGHT - 12}" font-size="13" '
            f'text-anchor="middle">{x_label}</text>'
        )
        self.parts.append(
            f'<text class="ylabel" x="16" y="{(y0 + y1) / 2}" font-size="13" '
            f'text-anchor="middle" transform="rotate(-90 16 {(y0 + y1) / 2})">{y_label}</text>'
        )

    def render(self) -> str:
        return "\n".join(self.parts + ["</svg>"]) + "\n"


def render_curve_svg(points: list[tuple[float, float]], slope: float, intercept: float,
                     title: str = "") -> str:
    """Log2-log2 fluctuation plot: one circle per point plus the fitted line."""
    if not points:
        raise DataError("no curve points to plot")
    if any(s <= 0 or f <= 0 for s, f in points):
        raise DataError("curve points must be strictly positive for a log-log plot")
    xs = [math.log2(s) for s, _ in points]
    ys = [math.log2(f) for _, f in points]
    pad_x = 0.05 * ((max(xs) - min(xs)) or 1.0)
    fit_lo = slope * min(xs) + intercept
    fit_hi = slope * max(xs) + intercept
    y_all = ys + [fit_lo, fit_hi]
    pad_y = 0.05 * ((max(y_all) - min(y_all)) or 1.0)
    canvas = _Canvas(
        (min(xs) - pad_x, max(xs) + pad_x),
        (min(y_all) - pad_y, max(y_all) + pad_y),
        "log2 s", "log2 F(s)",
    )
    canvas.parts.append(
        f'<line class="fit" x1="{_fmt(canvas.x_px(min(xs)))}" y1="{_fmt(canvas.y_px(fit_lo))}" '
        f'x2="{_fmt(canvas.x_px(max(xs)))}" y2="{_fmt(canvas.y_px(fit_hi))}" '
        f'stroke="#d62728" stroke-width="1.5"/>'
    )
    for x, y in zip(xs, ys):
        canvas.parts.append(
            f'<circle class="pt" cx="{_fmt(canvas.x_px(x))}" cy="{_fmt(canvas.y_px(y))}" '
            f'r="4" fill="#1f77b4"/>'
        )
    if title:
        canvas.parts.append(
            f'<text class="title" x="{_WIDTH / 2}" y="14" font-size="13" '
            f'text-anchor="middle">{title}</text>'
        )
    return canvas.render()


def render_histogram_svg(centers: list[float], counts: list[int], bin_width: float,
                         title: str = "") -> str:
    """Histogram bars, one <rect> per bin."""
    if not centers or len(centers) != len(counts):
        raise DataError("histogram needs matching non-empty centers and counts")
    width = bin_width if bin_width > 0 else 0.05
    x_lo = min(centers) - width
    x_hi = max(centers) + width
    y_hi = max(max(counts), 1) * 1.05
    canvas = _Canvas((x_lo, x_hi), (0.0, y_hi), "Hurst exponent", "count")
    base = canvas.y_px(0.0)
    for center, count in zip(centers, counts):
        left = canvas.x_px(center - width / 2)
        right = canvas.x_px(center + width / 2)
        top = canvas.y_px(count)
        canvas.parts.append(
            f'<rect class="bar" x="{_fmt(left)}" y="{_fmt(top)}" '
            f'width="{_fmt(max(right - left - 1, 1))}" height="{_fmt(max(base - top, 0))}" '
            f'fill="#1f77b4" stroke="white"/>'
        )
    if title:
        canvas.parts.append(
            f'<text class="title" x="{_WIDTH / 2}" y="14" font-size="13" '
            f'text-anchor="middle">{title}</text>'
        )
    return canvas.render()
