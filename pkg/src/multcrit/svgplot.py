"""Deterministic SVG rendering: escape-time raster of the parameter window
[-2.1, 0.7] x [-1.3, 1.3] with critical-point markers on top.

Plain text SVG keeps the output dependency-free and byte-stable, so plots
can be hashed in tests. The raster is run-length encoded per row into rect
elements; with the small gray palette this stays around a megabyte.
"""

from __future__ import annotations

import numpy as np

from .analysis import mandelbrot_member

X_MIN, X_MAX = -2.1, 0.7
Y_MIN, Y_MAX = -1.3, 1.3
_PX = 0.005  # parameter-plane units per pixel
_RASTER_ITERS = 96

# grayscale bands, slowest escape last; index len(_BANDS) is interior black
_BANDS = (2, 3, 4, 6, 9, 14, 24, 48, _RASTER_ITERS)
_SHADES = (
    "#ffffff",
    "#f2f2f2",
    "#e4e4e4",
    "#d4d4d4",
    "#c2c2c2",
    "#adadad",
    "#949494",
    "#757575",
    "#4f4f4f",
    "#000000",
)


def _escape_counts(width: int, height: int) -> np.ndarray:
    """Iterations to escape radius 2 per pixel; bounded pixels get
    _RASTER_ITERS + 1 so they cannot collide with a last-step escape."""
    xs = X_MIN + _PX * (np.arange(width) + 0.5)
    ys = Y_MAX - _PX * (np.arange(height) + 0.5)
    c = xs[None, :] + 1j * ys[:, None]
    z = np.zeros_like(c)
    counts = np.full(c.shape, _RASTER_ITERS + 1, dtype=np.int32)
    active = np.ones(c.shape, dtype=bool)
    for it in range(1, _RASTER_ITERS + 1):
        z[active] = z[active] ** 2 + c[active]
        escaped = active & (z.real**2 + z.imag**2 > 4.0)
        counts[escaped] = it
        active &= ~escaped
        if not active.any():
            break
    return counts


def _raster_rects(counts: np.ndarray) -> list[str]:
    height, width = counts.shape
    shades = np.searchsorted(np.asarray(_BANDS), counts, side="left")
    out = []
    for row in range(height):
        line = shades[row]
        start = 0
        for col in range(1, width + 1):
            if col == width or line[col] != line[start]:
                shade = _SHADES[line[start]]
                out.append(
                    f'<rect x="{start}" y="{row}" width="{col - start}" '
                    f'height="1" fill="{shade}"/>'
                )
                start = col
    return out


def _to_px(c: complex) -> tuple[float, float]:
    return ((c.real - X_MIN) / _PX, (Y_MAX - c.imag) / _PX)


def render_svg(doc) -> str:
    """Scatter of the document's c-values over the escape-time raster.

    Inside-the-set points are filled circles, outside points are crosses;
    records without a stored membership flag are classified on the fly.
    The output is a pure function of the document contents.
    """
    width = round((X_MAX - X_MIN) / _PX)
    height = round((Y_MAX - Y_MIN) / _PX)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="#ffffff"/>',
        "<g>",
    ]
    parts.extend(_raster_rects(_escape_counts(width, height)))
    parts.append("</g>")
    parts.append('<g stroke-width="1.6">')
    for r in doc.records:
        inside = r.inside_mandelbrot
        if inside is None:
            inside = mandelbrot_member(r.c).inside
        x, y = _to_px(r.c)
        if not (0.0 <= x <= width and 0.0 <= y <= height):
            continue
        if inside:
            parts.append(
                f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3.2" fill="#d62728" '
                f'stroke="#ffffff" stroke-width="0.8"/>'
            )
        else:
            a = 3.0
            parts.append(
                f'<path d="M {x - a:.2f} {y - a:.2f} L {x + a:.2f} {y + a:.2f} '
                f'M {x - a:.2f} {y + a:.2f} L {x + a:.2f} {y - a:.2f}" '
                f'stroke="#1f77b4" fill="none"/>'
            )
    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_svg(doc, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_svg(doc))
