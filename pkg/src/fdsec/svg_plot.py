"""Self-contained SVG line plots of sweep results.

Rendered by hand so the output stays dependency-free and byte-reproducible:
one polyline per scheme, a log10 SOP axis clamped to [1e-6, 1], and a legend.
SOP estimates of exactly 0 are drawn on the 1e-6 floor.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

from .experiments import OutputRow

_WIDTH, _HEIGHT = 720, 480
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 70, 20, 20, 50
_Y_FLOOR = 1e-6

_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd",
            "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"]

_AXIS_TITLES = {"gamma_rr_db": "average residual LI SNR (dB)",
                "alpha": "power allocation ratio"}


def _esc(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;")
            .replace(">", "&gt;").replace('"', "&quot;"))


def render_svg(rows: Sequence[OutputRow], metadata: Optional[dict] = None) -> str:
    """Render sweep rows to an SVG document string."""
    if not rows:
        raise ValueError("cannot plot an empty row list")
    x_names = {r.x_name for r in rows}
    if len(x_names) > 1:
        raise ValueError(f"rows mix swept variables: {sorted(x_names)}")
    x_name = rows[0].x_name

    xs = sorted({r.x_value for r in rows})
    x_lo, x_hi = xs[0], xs[-1]
    span = (x_hi - x_lo) or 1.0
    plot_w = _WIDTH - _MARGIN_L - _MARGIN_R
    plot_h = _HEIGHT - _MARGIN_T - _MARGIN_B

    def px(x: float) -> float:
        return _MARGIN_L + (x - x_lo) / span * plot_w

    def py(p: float) -> float:
        logp = math.log10(min(max(p, _Y_FLOOR), 1.0))
        # log10 in [-6, 0] maps to [bottom, top]
        return _MARGIN_T + (-logp / 6.0) * plot_h

    schemes: list[str] = []
    for r in rows:
        if r.scheme not in schemes:
            schemes.append(r.scheme)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" '
           f'height="{_HEIGHT}" viewBox="0 0 {_WIDTH} {_HEIGHT}">']
    if metadata:
        meta = " ".join(f"{k}={v}" for k, v in sorted(metadata.items()))
        out.append(f"  <desc>{_esc(meta)}</desc>")
    out.append(f'  <rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>')

    # Gridlines and y ticks at each decade.
    for k in range(0, 7):
        y = py(10.0 ** -k)
        out.append(f'  <line x1="{_MARGIN_L}" y1="{y:.2f}" x2="{_WIDTH - _MARGIN_R}" '
                   f'y2="{y:.2f}" stroke="#dddddd" stroke-width="1"/>')
        out.append(f'  <text x="{_MARGIN_L - 8}" y="{y + 4:.2f}" text-anchor="end" '
                   f'font-family="sans-serif" font-size="12">1e-{k}</text>')

    # X ticks on the grid values (thinned to at most 12 labels).
    step = max(1, (len(xs) + 11) // 12)
    for x in xs[::step]:
        x_px = px(x)
        y0 = _HEIGHT - _MARGIN_B
        out.append(f'  <line x1="{x_px:.2f}" y1="{y0}" x2="{x_px:.2f}" '
                   f'y2="{y0 + 5}" stroke="#333333" stroke-width="1"/>')
        out.append(f'  <text x="{x_px:.2f}" y="{y0 + 20}" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="12">{x:g}</text>')

    out.append(f'  <rect x="{_MARGIN_L}" y="{_MARGIN_T}" width="{plot_w}" '
               f'height="{plot_h}" fill="none" stroke="#333333"/>')
    out.append(f'  <text x="{_MARGIN_L + plot_w / 2:.0f}" y="{_HEIGHT - 10}" '
               f'text-anchor="middle" font-family="sans-serif" font-size="13">'
               f'{_esc(_AXIS_TITLES.get(x_name, x_name))}</text>')
    out.append(f'  <text x="16" y="{_MARGIN_T + plot_h / 2:.0f}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="13" '
               f'transform="rotate(-90 16 {_MARGIN_T + plot_h / 2:.0f})">'
               f'secrecy outage probability</text>')

    for i, scheme in enumerate(schemes):
        color = _PALETTE[i % len(_PALETTE)]
        pts = sorted(((r.x_value, r.p_hat) for r in rows if r.scheme == scheme))
        path = " ".join(f"{px(x):.2f},{py(p):.2f}" for x, p in pts)
        out.append(f'  <polyline points="{path}" fill="none" stroke="{color}" '
                   f'stroke-width="2"/>')
        # Legend entry.
        ly = _MARGIN_T + 16 + 18 * i
        lx = _MARGIN_L + plot_w - 190
        out.append(f'  <line x1="{lx}" y1="{ly}" x2="{lx + 24}" y2="{ly}" '
                   f'stroke="{color}" stroke-width="2"/>')
        out.append(f'  <text x="{lx + 30}" y="{ly + 4}" font-family="sans-serif" '
                   f'font-size="12">{_esc(scheme)}</text>')

    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg(rows: Sequence[OutputRow], destination,
             metadata: Optional[dict] = None) -> None:
    """Write the rendered SVG to a path or text file object."""
    text = render_svg(rows, metadata)
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        with open(destination, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
