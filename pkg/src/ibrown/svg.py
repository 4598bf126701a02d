"""Minimal SVG emission for the two-panel result figure: region boundary on
top, density section below. No plotting dependency; static paths only."""

from __future__ import annotations

import numpy as np

_W, _H = 640, 720
_PANEL_H = 310
_MARGIN = 52


def _scale(vals, lo, hi, out_lo, out_hi):
    vals = np.asarray(vals, dtype=float)
    if hi <= lo:
        hi = lo + 1.0
    return out_lo + (vals - lo) * (out_hi - out_lo) / (hi - lo)


def _polyline(xs, ys, color, width=1.3):
    pts = " ".join("%.2f,%.2f" % (x, y) for x, y in zip(xs, ys))
    return f'<polyline fill="none" stroke="{color}" stroke-width="{width}" points="{pts}"/>'


def _axis_box(x0, y0, x1, y1, label):
    return (
        f'<rect x="{x0}" y="{y0}" width="{x1 - x0}" height="{y1 - y0}" '
        'fill="none" stroke="#888" stroke-width="0.8"/>'
        f'<text x="{x0 + 4}" y="{y0 + 14}" font-size="12" fill="#444">{label}</text>'
    )


def render_profile_svg(profile, title: str, cloud=None) -> str:
    """Two stacked panels: boundary curves +-b_t(a) (with optional eigenvalue
    cloud) and the density section w_t(a)."""
    a_lo = min(iv[0] for iv in profile.omega_intervals)
    a_hi = max(iv[1] for iv in profile.omega_intervals)
    pad = 0.08 * (a_hi - a_lo + 1e-9)
    a_lo, a_hi = a_lo - pad, a_hi + pad
    bmax = float(profile.halfheight.max()) * 1.15 + 1e-9
    wmax = float(profile.density.max()) * 1.1 + 1e-12

    top0, top1 = _MARGIN, _MARGIN + _PANEL_H
    bot0, bot1 = top1 + 46, top1 + 46 + _PANEL_H
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}"><rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_MARGIN}" y="26" font-size="14" fill="#111">{title}</text>',
        _axis_box(_MARGIN, top0, _W - _MARGIN, top1, "region boundary"),
        _axis_box(_MARGIN, bot0, _W - _MARGIN, bot1, "density w_t(a)"),
    ]

    if cloud is not None:
        xs = _scale(cloud.real, a_lo, a_hi, _MARGIN, _W - _MARGIN)
        ys = _scale(cloud.imag, -bmax, bmax, top1, top0)
        keep = (xs >= _MARGIN) & (xs <= _W - _MARGIN) & (ys >= top0) & (ys <= top1)
        parts.extend(
            f'<circle cx="{x:.2f}" cy="{y:.2f}" r="1.1" fill="#3a6" fill-opacity="0.45"/>'
            for x, y in zip(xs[keep], ys[keep])
        )

    for sl in profile.blocks():
        a = profile.grid[sl]
        b = profile.halfheight[sl]
        w = profile.density[sl]
        xs = _scale(a, a_lo, a_hi, _MARGIN, _W - _MARGIN)
        for sign, color in ((1.0, "#125"), (-1.0, "#125")):
            ys = _scale(sign * b, -bmax, bmax, top1, top0)
            parts.append(_polyline(xs, ys, color))
        ys = _scale(w, 0.0, wmax, bot1, bot0)
        parts.append(_polyline(xs, ys, "#a31"))

    # zero axis of the top panel
    y0 = _scale(np.array([0.0]), -bmax, bmax, top1, top0)[0]
    parts.append(_polyline([_MARGIN, _W - _MARGIN], [y0, y0], "#ccc", 0.7))
    parts.append("</svg>")
    return "".join(parts)
