import math
from dataclasses import dataclass
from typing import List, Sequence

from .disk_layout import FaceLayout

CIRCLE_COLORS = ("#1f77b4", "#d62728", "#2ca02c")


@dataclass(frozen=True)
class SvgOptions:
    panel_size: int = 400
    columns: int = 3
    stroke_width: float = 1.5
    dual_stroke_width: float = 1.0
    point_radius: float = 3.0
    margin: float = 0.05
    show_labels: bool = True


def _fmt(value: float) -> str:
    text = f"{value:.6f}".rstrip("0").rstrip(".")
    return "0" if text in ("-0", "") else text


def render_svg(layouts: Sequence[FaceLayout], options: SvgOptions = SvgOptions(), titles: Sequence[str] = ()) -> str:
    """
    Draws each layout in its own panel: unit disk, the three generalized
    circles clipped to the closed disk, the dashed dual circle and the tangent
    points. With no layouts a single empty disk panel is drawn.
    """
    panels = max(1, len(layouts))
    columns = max(1, min(options.columns, panels))
    rows = math.ceil(panels / columns)
    size = options.panel_size
    # disk coordinates [-1-m, 1+m] map onto one panel; y points up
    unit = size / (2.0 * (1.0 + options.margin))
    stroke = options.stroke_width / unit
    dual_stroke = options.dual_stroke_width / unit

    lines: List[str] = []
    lines.append('<?xml version="1.0" encoding="UTF-8" standalone="no"?>\n')
    lines.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{columns * size}" height="{rows * size}" '
        f'viewBox="0 0 {columns * size} {rows * size}">\n'
    )
    lines.append("<defs>\n")
    lines.append('<clipPath id="unit-disk"><circle cx="0" cy="0" r="1"/></clipPath>\n')
    lines.append("</defs>\n")
    lines.append(f'<rect x="0" y="0" width="{columns * size}" height="{rows * size}" fill="white"/>\n')

    for index in range(panels):
        col, row = index % columns, index // columns
        ox = col * size + size / 2.0
        oy = row * size + size / 2.0
        lines.append(
            f'<g transform="translate({_fmt(ox)},{_fmt(oy)}) scale({_fmt(unit)},{_fmt(-unit)})">\n'
        )
        lines.append(
            f'<circle cx="0" cy="0" r="1" fill="#f7f7f7" stroke="black" stroke-width="{_fmt(stroke)}"/>\n'
        )
        if index < len(layouts):
            lines.extend(_face_elements(layouts[index], stroke, dual_stroke, options.point_radius / unit))
        lines.append("</g>\n")
        if options.show_labels and index < len(titles):
            lines.append(
                f'<text x="{_fmt(col * size + 8)}" y="{_fmt(row * size + 18)}" '
                f'font-family="sans-serif" font-size="14">{titles[index]}</text>\n'
            )

    lines.append("</svg>\n")
    return "".join(lines)


def _face_elements(layout: FaceLayout, stroke: float, dual_stroke: float, point_radius: float) -> List[str]:
    out = ['<g clip-path="url(#unit-disk)">\n']
    for slot, circle in enumerate(layout.circles):
        cx, cy = circle.center
        out.append(
            f'<circle class="{circle.kind}" cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(circle.radius)}" '
            f'fill="none" stroke="{CIRCLE_COLORS[slot]}" stroke-width="{_fmt(stroke)}"/>\n'
        )
    out.append("</g>\n")
    dual = layout.dual
    out.append(
        f'<circle class="dual" cx="0" cy="0" r="{_fmt(dual.radius)}" fill="none" stroke="gray" '
        f'stroke-width="{_fmt(dual_stroke)}" stroke-dasharray="{_fmt(4 * dual_stroke)},{_fmt(3 * dual_stroke)}"/>\n'
    )
    for px, py in layout.tangent_points:
        out.append(f'<circle class="tangent" cx="{_fmt(px)}" cy="{_fmt(py)}" r="{_fmt(point_radius)}" fill="black"/>\n')
    return out
