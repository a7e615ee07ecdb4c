"""Standalone SVG rendering of scenes.

Output is a pure function of (scene, theme): no timestamps, no randomness,
fixed element order, so identical inputs give byte-identical documents.
Element ids follow a stable scheme (tier-k, seg-k-j, marker-e, curve-j,
rline-e, overall-timeline, media-box) for downstream tooling and tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape, quoteattr

from .errors import ChronoError
from .layout import (
    OKABE_ITO,
    OPAQUE_LABELED,
    RELATION_LINE_COLOR,
    CURVE_FILL_OPACITY,
    TRANSLUCENT_MARKER_OPACITY,
    Scene,
    Tier,
    color_of,
)

MARKER_REF_SIZE = 10.0  # marker box edge at a 1000 px wide canvas


@dataclass(frozen=True)
class Theme:
    palette: tuple[str, ...] = OKABE_ITO
    font_family: str = "Helvetica, Arial, sans-serif"
    background: str = "#FFFFFF"
    marker_stroke_width: float = 1.0

    def __post_init__(self) -> None:
        if len(self.palette) < 1:
            raise ChronoError("E_BAD_THEME", "palette needs at least one colour")


def _fmt(value: float) -> str:
    text = f"{value:.3f}".rstrip("0").rstrip(".")
    return text if text not in ("-0", "") else "0"


Point = tuple[float, float]


def _monotone_cubics(points: list[Point]) -> list[tuple[Point, Point, Point, Point]]:
    """Cubic Bezier segments through points with strictly increasing y.

    Tangents use the clamped three-point rule, so x stays monotone between
    control points and the curve cannot bulge past a tier.
    """
    n = len(points)
    if n < 2:
        return []
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    slopes = [(xs[i + 1] - xs[i]) / (ys[i + 1] - ys[i]) for i in range(n - 1)]
    tangents = [slopes[0]] + [0.0] * (n - 2) + [slopes[-1]]
    for i in range(1, n - 1):
        if slopes[i - 1] * slopes[i] <= 0:
            tangents[i] = 0.0
        else:
            mean = (slopes[i - 1] + slopes[i]) / 2.0
            cap = 3.0 * min(abs(slopes[i - 1]), abs(slopes[i]))
            tangents[i] = max(-cap, min(cap, mean))
    segments = []
    for i in range(n - 1):
        h = ys[i + 1] - ys[i]
        c1 = (xs[i] + tangents[i] * h / 3.0, ys[i] + h / 3.0)
        c2 = (xs[i + 1] - tangents[i + 1] * h / 3.0, ys[i + 1] - h / 3.0)
        segments.append((points[i], c1, c2, points[i + 1]))
    return segments


def _tag(name: str, self_close: bool = True, **attrs: object) -> str:
    parts = [f"<{name}"]
    for key, val in attrs.items():
        if val is None:
            continue
        parts.append(f" {key.replace('_', '-')}={quoteattr(str(val))}")
    parts.append("/>" if self_close else ">")
    return "".join(parts)


def _text(x: float, y: float, content: str, size: float, theme: Theme, *,
          anchor: str = "middle", weight: str | None = None, fill: str = "#000000",
          opacity: float | None = None) -> str:
    attrs = {
        "x": _fmt(x), "y": _fmt(y), "font-size": _fmt(size),
        "font-family": theme.font_family, "text-anchor": anchor, "fill": fill,
    }
    if weight:
        attrs["font-weight"] = weight
    if opacity is not None and opacity != 1.0:
        attrs["opacity"] = _fmt(opacity)
    open_tag = _tag("text", self_close=False, **attrs)
    return f"{open_tag}{escape(content)}</text>"


def _render_tier(tier: Tier, scene: Scene, theme: Theme, out: list[str]) -> None:
    vp = scene.viewport
    scale = vp.width / 1000.0
    marker_size = MARKER_REF_SIZE * scale
    font = 14.0 * scale
    key = tier.period_index_of_largest

    group_attrs = {"id": f"tier-{key}"}
    if tier.opacity != 1.0:
        group_attrs["opacity"] = _fmt(tier.opacity)
    out.append(_tag("g", self_close=False, **group_attrs))

    for seg in tier.segments:
        out.append(_tag(
            "rect", id=f"seg-{key}-{seg.period_index}",
            x=_fmt(min(seg.x_start, seg.x_end)), y=_fmt(tier.y - 3.0 * scale),
            width=_fmt(abs(seg.x_end - seg.x_start)), height=_fmt(6.0 * scale),
            fill=color_of(seg.period_index, theme.palette),
        ))

    if tier.title_text:
        out.append(_text(vp.margin_left - 10.0 * scale, tier.y + font / 3.0,
                         tier.title_text, font, theme, anchor="end"))

    labeled = sorted((m for m in tier.markers if m.style == OPAQUE_LABELED), key=lambda m: m.x)
    label_row = {m.event_index: i % 2 for i, m in enumerate(labeled)}

    for marker in tier.markers:
        opaque = marker.style == OPAQUE_LABELED
        marker_id = f"marker-{marker.event_index}" if opaque else f"marker-{marker.event_index}-shadow"
        fill_opacity = marker.opacity * (1.0 if opaque else TRANSLUCENT_MARKER_OPACITY)
        out.append(_tag(
            "rect", id=marker_id,
            x=_fmt(marker.x - marker_size / 2.0), y=_fmt(tier.y - marker_size / 2.0),
            width=_fmt(marker_size), height=_fmt(marker_size),
            rx=_fmt(2.0 * scale), fill="#000000",
            fill_opacity=None if fill_opacity == 1.0 else _fmt(fill_opacity),
            stroke="#000000", stroke_width=_fmt(theme.marker_stroke_width),
        ))
        if marker.label_lines:
            row = label_row.get(marker.event_index, 0)
            base = tier.y - marker_size - (2.0 + row * 2.4) * font / 2.0
            for i, line in enumerate(reversed(marker.label_lines)):
                out.append(_text(marker.x, base - i * font * 1.1, line, font, theme,
                                 opacity=marker.opacity))
            if marker.highlighted:
                width = max(len(line) for line in marker.label_lines) * font * 0.62 + font
                height = len(marker.label_lines) * font * 1.1 + font * 0.8
                out.append(_tag(
                    "rect", id=f"highlight-{marker.event_index}",
                    x=_fmt(marker.x - width / 2.0),
                    y=_fmt(base - (len(marker.label_lines) - 1) * font * 1.1 - font),
                    width=_fmt(width), height=_fmt(height), rx=_fmt(4.0 * scale),
                    fill="none", stroke="#000000", stroke_width=_fmt(2.0 * scale),
                ))
    out.append("</g>")


def render_svg(scene: Scene, theme: Theme = Theme()) -> str:
    """Render a scene into a standalone SVG 1.1 document."""
    if not scene.tiers or scene.revealed < 1:
        raise ChronoError("E_SCENE_INVALID", "scene has no tiers or no revealed events")
    vp = scene.viewport
    if vp.width <= 0 or vp.height <= 0:
        raise ChronoError("E_SCENE_INVALID", "viewport has non-positive size")

    scale = vp.width / 1000.0
    font = 14.0 * scale
    out: list[str] = []
    out.append('<?xml version="1.0" encoding="UTF-8"?>')
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width={quoteattr(_fmt(vp.width))} height={quoteattr(_fmt(vp.height))} '
        f'viewBox={quoteattr(f"0 0 {_fmt(vp.width)} {_fmt(vp.height)}")}>'
    )
    out.append(_tag("rect", x="0", y="0", width=_fmt(vp.width), height=_fmt(vp.height),
                    fill=theme.background))

    out.append(_text(vp.width / 2.0, vp.margin_top + 2.0 * font, scene.title,
                     2.0 * font, theme, weight="bold"))
    if scene.subtitle:
        out.append(_text(vp.width / 2.0, vp.margin_top + 3.4 * font, scene.subtitle,
                         1.2 * font, theme))

    # Overall timeline: neutral base line, coloured span, highlight marker.
    tl = scene.overall_timeline
    out.append(_tag("g", self_close=False, id="overall-timeline"))
    out.append(_tag("rect", x=_fmt(vp.margin_left), y=_fmt(tl.y - 2.0 * scale),
                    width=_fmt(vp.inner_width), height=_fmt(4.0 * scale), fill="#DDDDDD"))
    for seg in tl.segments:
        out.append(_tag(
            "rect", id=f"tlseg-{seg.period_index}",
            x=_fmt(min(seg.x_start, seg.x_end)), y=_fmt(tl.y - 3.0 * scale),
            width=_fmt(abs(seg.x_end - seg.x_start)), height=_fmt(6.0 * scale),
            fill=color_of(seg.period_index, theme.palette),
        ))
    marker_size = MARKER_REF_SIZE * scale
    out.append(_tag("rect", id="tl-marker",
                    x=_fmt(tl.marker_x - marker_size / 2.0), y=_fmt(tl.y - marker_size / 2.0),
                    width=_fmt(marker_size), height=_fmt(marker_size), rx=_fmt(2.0 * scale),
                    fill="#000000"))
    out.append(_text(tl.marker_x, tl.y - marker_size, tl.marker_label, font, theme))
    out.append(_text(vp.margin_left, tl.y + marker_size + font, tl.left_label, font, theme,
                     anchor="start"))
    out.append(_text(vp.margin_left + vp.inner_width, tl.y + marker_size + font,
                     tl.right_label, font, theme, anchor="end"))
    out.append("</g>")

    # Relation curves render as ribbons between consecutive tiers. Each
    # boundary is a monotone cubic through the segment endpoints, so the
    # curve never overshoots a tier.
    tier_by_key = {t.period_index_of_largest: t for t in scene.tiers}
    for curve in scene.relation_curves:
        left = [(p.x, p.y) for p in curve.points]
        right = []
        for p in curve.points:
            seg = next(s for s in tier_by_key[p.tier].segments
                       if s.period_index == curve.period_index)
            right.append((seg.x_end, p.y))
        path = ["M" + _fmt(left[0][0]) + " " + _fmt(left[0][1])]
        for p0, c1, c2, p1 in _monotone_cubics(left):
            path.append(f"C{_fmt(c1[0])} {_fmt(c1[1])} {_fmt(c2[0])} {_fmt(c2[1])} "
                        f"{_fmt(p1[0])} {_fmt(p1[1])}")
        path.append("L" + _fmt(right[-1][0]) + " " + _fmt(right[-1][1]))
        for p0, c1, c2, p1 in reversed(_monotone_cubics(right)):
            path.append(f"C{_fmt(c2[0])} {_fmt(c2[1])} {_fmt(c1[0])} {_fmt(c1[1])} "
                        f"{_fmt(p0[0])} {_fmt(p0[1])}")
        path.append("Z")
        opacity = CURVE_FILL_OPACITY * curve.opacity
        fill = color_of(curve.period_index, theme.palette)
        out.append(_tag("path", id=f"curve-{curve.period_index}", d=" ".join(path),
                        fill=fill, fill_opacity=_fmt(opacity), stroke="none"))

    for line in scene.relation_lines:
        out.append(_tag(
            "line", id=f"rline-{line.event_index}",
            x1=_fmt(line.upper.x), y1=_fmt(line.upper.y),
            x2=_fmt(line.lower.x), y2=_fmt(line.lower.y),
            stroke=RELATION_LINE_COLOR, stroke_width=_fmt(1.5 * scale),
            opacity=None if line.opacity == 1.0 else _fmt(line.opacity),
        ))

    for tier in scene.tiers:
        _render_tier(tier, scene, theme, out)

    # Media box for the highlighted event.
    mb = scene.media_box
    box_top = vp.tiers_band[1] + 30.0 * scale
    box_height = vp.height - vp.margin_bottom - 60.0 * scale - box_top
    out.append(_tag("g", self_close=False, id="media-box"))
    out.append(_tag("rect", x=_fmt(vp.margin_left), y=_fmt(box_top),
                    width=_fmt(vp.inner_width), height=_fmt(box_height),
                    fill="#F5F5F5", stroke="#CCCCCC", stroke_width=_fmt(scale)))
    text_x = vp.margin_left + 16.0 * scale
    out.append(_text(text_x, box_top + 2.0 * font, mb.name, 1.6 * font, theme,
                     anchor="start", weight="bold"))
    out.append(_text(text_x, box_top + 3.6 * font, mb.measure_text, 1.2 * font, theme,
                     anchor="start", fill="#444444"))
    if mb.description:
        out.append(_text(text_x, box_top + 5.2 * font, mb.description, font, theme,
                         anchor="start"))
    if mb.image_ref:
        image_w = min(vp.inner_width * 0.25, box_height * 1.4)
        out.append(_tag("image", href=mb.image_ref,
                        x=_fmt(vp.margin_left + vp.inner_width - image_w - 8.0 * scale),
                        y=_fmt(box_top + 8.0 * scale),
                        width=_fmt(image_w), height=_fmt(box_height - 16.0 * scale),
                        preserveAspectRatio="xMidYMid meet"))
    out.append("</g>")

    # Button bar.
    bb = scene.button_bar
    buttons = [
        ("explore", "Explore the Past", bb.explore_enabled),
        ("revisit", "Revisit Events", bb.revisit_enabled),
        ("reset", "Reset to Today", bb.reset_enabled),
    ]
    if bb.let_me_interact_visible:
        buttons.append(("let_me_interact", "Let Me Interact!", True))
    btn_y = vp.height - vp.margin_bottom - 44.0 * scale
    btn_w = (vp.inner_width - 20.0 * scale * (len(buttons) - 1)) / len(buttons)
    out.append(_tag("g", self_close=False, id="button-bar"))
    for i, (bid, label, enabled) in enumerate(buttons):
        x = vp.margin_left + i * (btn_w + 20.0 * scale)
        pressed = bb.pressed == bid
        out.append(_tag(
            "rect", id=f"button-{bid}",
            x=_fmt(x), y=_fmt(btn_y), width=_fmt(btn_w), height=_fmt(40.0 * scale),
            rx=_fmt(6.0 * scale),
            fill="#2D6CB5" if pressed else "#4A90D9",
            opacity=None if enabled else "0.4",
            stroke="#1C4766", stroke_width=_fmt(scale),
        ))
        out.append(_text(x + btn_w / 2.0, btn_y + 26.0 * scale, label, 1.3 * font, theme,
                         fill="#FFFFFF"))
    out.append("</g>")

    out.append("</svg>")
    return "\n".join(out) + "\n"
