"""Deterministic SVG line charts for sweep results.

Charts are plain hand-assembled SVG text with fixed formatting, so a
re-render from identical data is byte-identical. One chart per metric:
EM vs k, prompt tokens vs k, throughput vs k, EM vs corpus fraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

_WIDTH = 640
_HEIGHT = 400
_MARGIN_LEFT = 70
_MARGIN_RIGHT = 25
_MARGIN_TOP = 40
_MARGIN_BOTTOM = 55
_TICKS = 5


@dataclass(frozen=True)
class ChartSeries:
    name: str  # output file stem
    title: str
    x_label: str
    y_label: str
    points: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        if len(self.points) < 2:
            raise ValueError(f"chart {self.name!r} needs at least 2 points, got {len(self.points)}")


def emit_charts(series: list[ChartSeries], out_dir: str | Path) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for chart in series:
        path = out_dir / f"{chart.name}.svg"
        path.write_text(render_line_chart(chart), encoding="utf-8", newline="\n")
        written.append(path)
    return written


def render_line_chart(chart: ChartSeries) -> str:
    xs = [p[0] for p in chart.points]
    ys = [p[1] for p in chart.points]
    x_lo, x_hi = _padded_range(min(xs), max(xs))
    y_lo, y_hi = _padded_range(min(ys), max(ys))

    plot_w = _WIDTH - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = _HEIGHT - _MARGIN_TOP - _MARGIN_BOTTOM

    def sx(x: float) -> float:
        return _MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w

    def sy(y: float) -> float:
        return _MARGIN_TOP + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="#ffffff"/>',
        f'<text x="{_WIDTH / 2:.2f}" y="22" text-anchor="middle" font-family="sans-serif" '
        f'font-size="15" fill="#111111">{_esc(chart.title)}</text>',
    ]

    for i in range(_TICKS + 1):
        frac = i / _TICKS
        gx = _MARGIN_LEFT + frac * plot_w
        gy = _MARGIN_TOP + plot_h - frac * plot_h
        x_val = x_lo + frac * (x_hi - x_lo)
        y_val = y_lo + frac * (y_hi - y_lo)
        parts.append(
            f'<line x1="{gx:.2f}" y1="{_MARGIN_TOP}" x2="{gx:.2f}" '
            f'y2="{_MARGIN_TOP + plot_h}" stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<line x1="{_MARGIN_LEFT}" y1="{gy:.2f}" x2="{_MARGIN_LEFT + plot_w}" '
            f'y2="{gy:.2f}" stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{gx:.2f}" y="{_MARGIN_TOP + plot_h + 18}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11" fill="#333333">{_fmt(x_val)}</text>'
        )
        parts.append(
            f'<text x="{_MARGIN_LEFT - 8}" y="{gy + 4:.2f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11" fill="#333333">{_fmt(y_val)}</text>'
        )

    parts.append(
        f'<rect x="{_MARGIN_LEFT}" y="{_MARGIN_TOP}" width="{plot_w}" height="{plot_h}" '
        f'fill="none" stroke="#888888" stroke-width="1"/>'
    )

    coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in chart.points)
    parts.append(f'<polyline points="{coords}" fill="none" stroke="#2563eb" stroke-width="2"/>')
    for x, y in chart.points:
        parts.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="3.5" fill="#2563eb"/>')

    parts.append(
        f'<text x="{_MARGIN_LEFT + plot_w / 2:.2f}" y="{_HEIGHT - 12}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13" fill="#111111">{_esc(chart.x_label)}</text>'
    )
    parts.append(
        f'<text x="18" y="{_MARGIN_TOP + plot_h / 2:.2f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13" fill="#111111" '
        f'transform="rotate(-90 18 {_MARGIN_TOP + plot_h / 2:.2f})">{_esc(chart.y_label)}</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _padded_range(lo: float, hi: float) -> tuple[float, float]:
    if lo == hi:
        pad = abs(lo) * 0.1 or 1.0
        return lo - pad, hi + pad
    pad = (hi - lo) * 0.05
    return lo - pad, hi + pad


def _fmt(value: float) -> str:
    return f"{value:.4g}"


def _esc(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
