"""Deterministic SVG rendering of 2-dimensional images and path overlays."""

from __future__ import annotations

from typing import Sequence

from .lattice import DigitalImage
from .paths import FinitePath

_SCALE = 40
_RADIUS = 14
_MARGIN = 40
_STROKES = ("#c22", "#26c", "#2a2", "#849")


def emit_figure(image: DigitalImage, overlays: Sequence[FinitePath] = ()) -> str:
    """Lattice points drawn as diamonds, overlays as polylines through them."""
    if image.dim != 2:
        raise ValueError("figures are drawn for dimension 2 only")
    if not image.points:
        raise ValueError("cannot draw an empty image")
    for ov in overlays:
        if ov.image != image:
            raise ValueError("overlay paths must live in the drawn image")

    xs = [p[0] for p in image.points]
    ys = [p[1] for p in image.points]
    x0, y1 = min(xs), max(ys)

    def at(p: tuple[int, ...]) -> tuple[int, int]:
        return (
            _MARGIN + (p[0] - x0) * _SCALE,
            _MARGIN + (y1 - p[1]) * _SCALE,
        )

    width = _MARGIN * 2 + (max(xs) - x0) * _SCALE
    height = _MARGIN * 2 + (y1 - min(ys)) * _SCALE
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">'
    ]
    for p in image.points:
        cx, cy = at(p)
        pts = f"{cx},{cy - _RADIUS} {cx + _RADIUS},{cy} {cx},{cy + _RADIUS} {cx - _RADIUS},{cy}"
        parts.append(f'<polygon points="{pts}" fill="white" stroke="black" stroke-width="2"/>')
    for k, ov in enumerate(overlays):
        coords = " ".join(f"{at(v)[0]},{at(v)[1]}" for v in ov.values)
        stroke = _STROKES[k % len(_STROKES)]
        parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{stroke}" '
            f'stroke-width="3" stroke-dasharray="{4 + 3 * (k % len(_STROKES))}"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
