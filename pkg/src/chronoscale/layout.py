"""Pure scene geometry for the tiered multiscale timeline.

A scene is the fully resolved picture for one interaction state: an active
tier plus archived snapshot tiers, the relation curves and lines joining
them, the linear overall timeline, and the media box for the highlighted
event. Horizontal position within a tier is linear in the tier's own extent,
most ancient at the left edge and present day at the right.

Scenes carry measure-space data (tier extents, marker measures, segment
bounds) alongside resolved x positions so that clients can re-derive
positions while animating extents without another round trip.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from typing import TYPE_CHECKING

from .errors import ChronoError
from .model import Dataset, period_of

if TYPE_CHECKING:  # pragma: no cover
    from .choreographer import ExhibitState

# Okabe-Ito colourblind-safe palette; periods cycle through it.
OKABE_ITO = ("#E69F00", "#56B4E9", "#009E73", "#F0E442",
             "#0072B2", "#D55E00", "#CC79A7", "#999999")

RELATION_LINE_COLOR = "#BBBBBB"
CURVE_FILL_OPACITY = 0.35
TRANSLUCENT_MARKER_OPACITY = 0.3

OPAQUE_LABELED = "opaque_labeled"
TRANSLUCENT_UNLABELED = "translucent_unlabeled"


@dataclass(frozen=True)
class Viewport:
    width: float = 1920.0
    height: float = 1080.0
    margin_left: float = 80.0
    margin_right: float = 80.0
    margin_top: float = 40.0
    margin_bottom: float = 40.0
    tiers_band: tuple[float, float] = (260.0, 760.0)
    timeline_band: tuple[float, float] = (150.0, 210.0)

    def __post_init__(self) -> None:
        if self.inner_width <= 0:
            raise ChronoError("E_BAD_VIEWPORT", "margins leave no inner width")
        for band in (self.tiers_band, self.timeline_band):
            if band[0] >= band[1]:
                raise ChronoError("E_BAD_VIEWPORT", f"band {band} has no height")
        lo, hi = sorted((self.tiers_band, self.timeline_band))
        if lo[1] > hi[0]:
            raise ChronoError("E_BAD_VIEWPORT", "tier and timeline bands overlap")

    @property
    def inner_width(self) -> float:
        return self.width - self.margin_left - self.margin_right

    @classmethod
    def sized(cls, width: float, height: float) -> "Viewport":
        """A viewport scaled from the 1920x1080 default layout."""
        sx, sy = width / 1920.0, height / 1080.0
        return cls(
            width=width, height=height,
            margin_left=80.0 * sx, margin_right=80.0 * sx,
            margin_top=40.0 * sy, margin_bottom=40.0 * sy,
            tiers_band=(260.0 * sy, 760.0 * sy),
            timeline_band=(150.0 * sy, 210.0 * sy),
        )


@dataclass(frozen=True)
class Segment:
    period_index: int
    x_start: float
    x_end: float
    color_index: int
    # Measure-space bounds backing the x values; older_visual is clipped to
    # the tier extent for the leftmost segment.
    older_visual: float
    newer_bound: float


@dataclass(frozen=True)
class Marker:
    event_index: int
    x: float
    measure: float
    style: str
    label_lines: tuple[str, ...] = ()
    highlighted: bool = False
    opacity: float = 1.0


@dataclass(frozen=True)
class Tier:
    period_index_of_largest: int
    extent: float
    y: float
    segments: tuple[Segment, ...]
    markers: tuple[Marker, ...]
    title_text: str | None = None
    opacity: float = 1.0


@dataclass(frozen=True)
class CurvePoint:
    tier: int  # period_index_of_largest of the tier the point sits on
    x: float
    y: float


@dataclass(frozen=True)
class RelationCurve:
    period_index: int
    points: tuple[CurvePoint, ...]  # active tier first, home tier last
    fill: str
    opacity: float = 1.0


@dataclass(frozen=True)
class RelationLine:
    event_index: int
    upper: CurvePoint  # translucent copy, tier above
    lower: CurvePoint  # opaque marker, tier below
    opacity: float = 1.0


@dataclass(frozen=True)
class OverallTimeline:
    extent: float
    colored_until_measure: float
    marker_x: float
    marker_label: str
    left_label: str
    right_label: str
    y: float
    segments: tuple[Segment, ...]


@dataclass(frozen=True)
class MediaBox:
    name: str
    description: str
    image_ref: str | None
    measure_text: str


@dataclass(frozen=True)
class ButtonBar:
    explore_enabled: bool
    revisit_enabled: bool
    reset_enabled: bool
    let_me_interact_visible: bool
    pressed: str | None = None


@dataclass(frozen=True)
class Scene:
    title: str
    subtitle: str | None
    viewport: Viewport
    revealed: int
    highlight: int
    tiers: tuple[Tier, ...]  # active first
    relation_curves: tuple[RelationCurve, ...]
    relation_lines: tuple[RelationLine, ...]
    overall_timeline: OverallTimeline
    media_box: MediaBox
    button_bar: ButtonBar

    @property
    def active_tier(self) -> Tier:
        return self.tiers[0]

    def with_pressed(self, pressed: str | None) -> "Scene":
        return replace(self, button_bar=replace(self.button_bar, pressed=pressed))


def color_of(period_index: int, palette: tuple[str, ...] = OKABE_ITO) -> str:
    return palette[period_index % len(palette)]


def x_position(measure: float, extent: float, viewport: Viewport = Viewport()) -> float:
    """Map a measure onto a tier of the given extent.

    The most ancient end (measure == extent) lands on the left edge and
    present day (measure == 0) on the right edge.
    """
    if extent <= 0:
        raise ChronoError("E_EXTENT_NONPOSITIVE", f"extent {extent} must be positive")
    return viewport.margin_left + viewport.inner_width * (1.0 - measure / extent)


def format_measure(measure: float) -> str:
    """Render a measure as reader-friendly text, switching to words past a million."""
    if measure < 1:
        raise ChronoError("E_TOO_RECENT", f"measure {measure} is below one year")
    if measure < 1e6:
        return f"{int(round(measure)):,} years ago"
    if measure < 1e9:
        scaled, word = measure / 1e6, "million"
    else:
        scaled, word = measure / 1e9, "billion"
    text = f"{scaled:.1f}"
    if text.endswith(".0"):
        text = text[:-2]
    return f"{text} {word} years ago"


def tier_vertical_layout(extents: list[float], band: tuple[float, float]) -> list[float]:
    """Vertical tier centers: gaps proportional to the log of the extent ratio.

    Equal decade jumps between tiers therefore give equal spacing. A single
    tier sits at the top of the band.
    """
    for i in range(1, len(extents)):
        if extents[i] >= extents[i - 1]:
            raise ChronoError("E_NONDECREASING_EXTENTS", "tier extents must strictly decrease")
    if not extents:
        raise ChronoError("E_NONDECREASING_EXTENTS", "at least one tier required")
    top, bottom = band
    if len(extents) == 1:
        return [top]
    gaps = [math.log10(extents[i] / extents[i + 1]) for i in range(len(extents) - 1)]
    total = sum(gaps)
    ys = [top]
    for gap in gaps:
        ys.append(ys[-1] + (bottom - top) * gap / total)
    return ys


def _tier_markers(dataset: Dataset, largest: int, extent: float, revealed: int,
                  highlight_index: int, is_active: bool, viewport: Viewport,
                  event_periods: list[int]) -> tuple[Marker, ...]:
    markers = []
    for event in dataset.events:
        period = event_periods[event.index]
        if period == largest:
            if is_active and event.index >= revealed:
                continue
            lines = [event.name]
            if is_active:
                lines.append(format_measure(event.measure))
            markers.append(Marker(
                event_index=event.index,
                x=x_position(event.measure, extent, viewport),
                measure=event.measure,
                style=OPAQUE_LABELED,
                label_lines=tuple(lines),
                highlighted=event.index == highlight_index,
            ))
        elif period == largest - 1:
            markers.append(Marker(
                event_index=event.index,
                x=x_position(event.measure, extent, viewport),
                measure=event.measure,
                style=TRANSLUCENT_UNLABELED,
            ))
    return tuple(markers)


def _tier_segments(dataset: Dataset, largest: int, extent: float, viewport: Viewport) -> tuple[Segment, ...]:
    segments = []
    for j in range(largest, -1, -1):
        period = dataset.periods[j]
        older_visual = min(period.older_bound, extent)
        segments.append(Segment(
            period_index=j,
            x_start=x_position(older_visual, extent, viewport),
            x_end=x_position(period.newer_bound, extent, viewport),
            color_index=period.color_index,
            older_visual=older_visual,
            newer_bound=period.newer_bound,
        ))
    return tuple(segments)


def compute_scene(dataset: Dataset, state: "ExhibitState", viewport: Viewport = Viewport()) -> Scene:
    """Resolve the full scene geometry for one exhibit state."""
    n = len(dataset.events)
    revealed, highlight = state.revealed, state.highlight
    if not 1 <= revealed <= n:
        raise ChronoError("OUT_OF_BOUNDS", f"revealed {revealed} outside 1..{n}")
    if not 1 <= highlight <= revealed:
        raise ChronoError("OUT_OF_BOUNDS", f"highlight {highlight} outside 1..{revealed}")

    event_periods = [period_of(dataset, i) for i in range(n)]
    highlight_event = dataset.events[highlight - 1]
    active_period = event_periods[revealed - 1]
    active_extent = dataset.events[revealed - 1].measure

    tier_keys = [active_period] + list(range(active_period - 1, -1, -1))
    extents = [active_extent] + [dataset.periods[k].older_bound for k in tier_keys[1:]]
    ys = tier_vertical_layout(extents, viewport.tiers_band)

    tiers = []
    for pos, (key, extent) in enumerate(zip(tier_keys, extents)):
        is_active = pos == 0
        title_text = None
        if not is_active:
            period = dataset.periods[key]
            anchor = next(e for e in dataset.events if e.is_anchor and e.measure == period.older_bound)
            title_text = period.title or f"{anchor.name} ({format_measure(anchor.measure)})"
        tiers.append(Tier(
            period_index_of_largest=key,
            extent=extent,
            y=ys[pos],
            segments=_tier_segments(dataset, key, extent, viewport),
            markers=_tier_markers(dataset, key, extent, revealed, highlight - 1,
                                  is_active, viewport, event_periods),
            title_text=title_text,
        ))

    tier_by_key = {t.period_index_of_largest: t for t in tiers}
    curves = []
    for j in range(active_period):
        points = []
        for tier in tiers:  # active first; every tier with key >= j shows period j
            if tier.period_index_of_largest < j:
                continue
            seg = next(s for s in tier.segments if s.period_index == j)
            points.append(CurvePoint(tier=tier.period_index_of_largest, x=seg.x_start, y=tier.y))
        curves.append(RelationCurve(period_index=j, points=tuple(points), fill=color_of(j)))

    lines = []
    for event in dataset.events:
        j = event_periods[event.index]
        if j >= active_period:
            continue
        upper_tier = tier_by_key[j + 1] if j + 1 in tier_by_key else tiers[0]
        lower_tier = tier_by_key[j]
        lines.append(RelationLine(
            event_index=event.index,
            upper=CurvePoint(tier=upper_tier.period_index_of_largest,
                             x=x_position(event.measure, upper_tier.extent, viewport),
                             y=upper_tier.y),
            lower=CurvePoint(tier=lower_tier.period_index_of_largest,
                             x=x_position(event.measure, lower_tier.extent, viewport),
                             y=lower_tier.y),
        ))

    global_extent = dataset.max_measure
    timeline_segments = []
    for j in range(len(dataset.periods) - 1, -1, -1):
        period = dataset.periods[j]
        if period.newer_bound >= active_extent:
            continue
        older_visual = min(period.older_bound, active_extent)
        timeline_segments.append(Segment(
            period_index=j,
            x_start=x_position(older_visual, global_extent, viewport),
            x_end=x_position(period.newer_bound, global_extent, viewport),
            color_index=period.color_index,
            older_visual=older_visual,
            newer_bound=period.newer_bound,
        ))
    overall = OverallTimeline(
        extent=global_extent,
        colored_until_measure=active_extent,
        marker_x=x_position(highlight_event.measure, global_extent, viewport),
        marker_label="You are here",
        left_label=format_measure(global_extent),
        right_label="Today",
        y=(viewport.timeline_band[0] + viewport.timeline_band[1]) / 2.0,
        segments=tuple(timeline_segments),
    )

    mode = getattr(state, "mode", None)
    mode_name = getattr(mode, "value", mode)
    button_bar = ButtonBar(
        explore_enabled=not (revealed == n and highlight == revealed),
        revisit_enabled=highlight > 1,
        reset_enabled=revealed > 1,
        let_me_interact_visible=bool(mode_name == "dynamic" and getattr(state, "auto_running", False)),
    )
    media_box = MediaBox(
        name=highlight_event.name,
        description=highlight_event.description,
        image_ref=highlight_event.image_ref,
        measure_text=format_measure(highlight_event.measure),
    )

    return Scene(
        title=dataset.title,
        subtitle=dataset.subtitle,
        viewport=viewport,
        revealed=revealed,
        highlight=highlight,
        tiers=tuple(tiers),
        relation_curves=tuple(curves),
        relation_lines=tuple(lines),
        overall_timeline=overall,
        media_box=media_box,
        button_bar=button_bar,
    )


def _r9(value: float) -> float:
    return round(value, 9)


def _segment_dict(s: Segment) -> dict:
    return {
        "period_index": s.period_index,
        "x_start": _r9(s.x_start),
        "x_end": _r9(s.x_end),
        "color_index": s.color_index,
        "older_visual": _r9(s.older_visual),
        "newer_bound": _r9(s.newer_bound),
    }


def _point_dict(p: CurvePoint) -> dict:
    return {"tier": p.tier, "x": _r9(p.x), "y": _r9(p.y)}


def scene_to_dict(scene: Scene) -> dict:
    """Canonical dict form of a scene: stable field order, rounded numbers."""
    vp = scene.viewport
    return {
        "title": scene.title,
        "subtitle": scene.subtitle,
        "viewport": {
            "width": _r9(vp.width), "height": _r9(vp.height),
            "margin_left": _r9(vp.margin_left), "margin_right": _r9(vp.margin_right),
            "margin_top": _r9(vp.margin_top), "margin_bottom": _r9(vp.margin_bottom),
            "tiers_band": [_r9(vp.tiers_band[0]), _r9(vp.tiers_band[1])],
            "timeline_band": [_r9(vp.timeline_band[0]), _r9(vp.timeline_band[1])],
        },
        "revealed": scene.revealed,
        "highlight": scene.highlight,
        "tiers": [
            {
                "period_index_of_largest": t.period_index_of_largest,
                "extent": _r9(t.extent),
                "y": _r9(t.y),
                "title_text": t.title_text,
                "opacity": _r9(t.opacity),
                "segments": [_segment_dict(s) for s in t.segments],
                "markers": [
                    {
                        "event_index": m.event_index,
                        "x": _r9(m.x),
                        "measure": _r9(m.measure),
                        "style": m.style,
                        "label_lines": list(m.label_lines),
                        "highlighted": m.highlighted,
                        "opacity": _r9(m.opacity),
                    }
                    for m in t.markers
                ],
            }
            for t in scene.tiers
        ],
        "relation_curves": [
            {
                "period_index": c.period_index,
                "points": [_point_dict(p) for p in c.points],
                "fill": c.fill,
                "opacity": _r9(c.opacity),
            }
            for c in scene.relation_curves
        ],
        "relation_lines": [
            {
                "event_index": l.event_index,
                "upper": _point_dict(l.upper),
                "lower": _point_dict(l.lower),
                "opacity": _r9(l.opacity),
            }
            for l in scene.relation_lines
        ],
        "overall_timeline": {
            "extent": _r9(scene.overall_timeline.extent),
            "colored_until_measure": _r9(scene.overall_timeline.colored_until_measure),
            "marker_x": _r9(scene.overall_timeline.marker_x),
            "marker_label": scene.overall_timeline.marker_label,
            "left_label": scene.overall_timeline.left_label,
            "right_label": scene.overall_timeline.right_label,
            "y": _r9(scene.overall_timeline.y),
            "segments": [_segment_dict(s) for s in scene.overall_timeline.segments],
        },
        "media_box": {
            "name": scene.media_box.name,
            "description": scene.media_box.description,
            "image_ref": scene.media_box.image_ref,
            "measure_text": scene.media_box.measure_text,
        },
        "button_bar": {
            "explore_enabled": scene.button_bar.explore_enabled,
            "revisit_enabled": scene.button_bar.revisit_enabled,
            "reset_enabled": scene.button_bar.reset_enabled,
            "let_me_interact_visible": scene.button_bar.let_me_interact_visible,
            "pressed": scene.button_bar.pressed,
        },
    }


def scene_to_json(scene: Scene) -> str:
    return json.dumps(scene_to_dict(scene), ensure_ascii=False)
