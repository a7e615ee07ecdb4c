"""Exhibit state machine and scene-to-scene animation.

All functions are pure: inputs and clock ticks map one immutable state to
the next plus a transition plan describing how to animate between the two
scenes. Timers are driven entirely through TICK inputs so tests can run on
a simulated clock.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

from .errors import ChronoError
from .layout import (
    OPAQUE_LABELED,
    TRANSLUCENT_MARKER_OPACITY,
    TRANSLUCENT_UNLABELED,
    CurvePoint,
    OverallTimeline,
    Scene,
    Segment,
    x_position,
)
from .model import Dataset, period_of


class Mode(enum.Enum):
    INTERACTIVE = "interactive"
    ANIMATED = "animated"
    DYNAMIC = "dynamic"


class InputKind(enum.Enum):
    EXPLORE_PAST = "explore_past"
    REVISIT = "revisit"
    RESET_TODAY = "reset_today"
    TAP_MARKER = "tap_marker"
    TAP_BACKGROUND = "tap_background"
    LET_ME_INTERACT = "let_me_interact"
    TICK = "tick"


class PlanKind(enum.Enum):
    ADVANCE = "advance"
    OVERFLOW = "overflow"
    HIGHLIGHT_ONLY = "highlight_only"
    RESET = "reset"
    NONE = "none"


@dataclass(frozen=True)
class TimingSettings:
    idle_timeout_s: float = 60.0
    auto_interval_s: float = 2.0
    advance_anim_ms: float = 750.0
    overflow_anim_ms: float = 1500.0

    def __post_init__(self) -> None:
        for name in ("idle_timeout_s", "auto_interval_s", "advance_anim_ms", "overflow_anim_ms"):
            if getattr(self, name) <= 0:
                raise ChronoError("E_BAD_PARAMS", f"{name} must be positive")


@dataclass(frozen=True)
class ExhibitState:
    revealed: int = 1
    highlight: int = 1
    mode: Mode = Mode.INTERACTIVE
    auto_running: bool = False
    idle_elapsed: float = 0.0
    auto_elapsed: float = 0.0
    settings: TimingSettings = TimingSettings()


@dataclass(frozen=True)
class InputEvent:
    kind: InputKind
    event_index: int | None = None  # TAP_MARKER: 1-based revealed-event ordinal
    dt_s: float = 0.0  # TICK


@dataclass(frozen=True)
class Phase:
    name: str
    start: float
    end: float


# Overflow sub-phases as fractions of the whole transition; they overlap and
# together cover [0, 1].
OVERFLOW_PHASES = (
    Phase("grow_new_segment", 0.0, 1.0),
    Phase("fade_labels", 0.0, 0.4),
    Phase("archive_descends", 0.0, 1.0),
    Phase("curve_and_lines_appear", 0.6, 1.0),
)


@dataclass(frozen=True)
class TransitionPlan:
    kind: PlanKind
    duration_ms: float
    pressed_button: str | None = None
    phases: tuple[Phase, ...] = ()


NO_PLAN = TransitionPlan(PlanKind.NONE, 0.0)


def initial_state(mode: Mode = Mode.INTERACTIVE, settings: TimingSettings = TimingSettings()) -> ExhibitState:
    return ExhibitState(mode=mode, auto_running=mode is Mode.ANIMATED, settings=settings)


def apply(dataset: Dataset, state: ExhibitState, event: InputEvent) -> tuple[ExhibitState, TransitionPlan]:
    """Advance the state machine by one input; total over all inputs."""
    if event.kind is InputKind.TICK:
        return _tick(dataset, state, event.dt_s)

    if event.kind is InputKind.LET_ME_INTERACT:
        if state.mode is Mode.DYNAMIC:
            return replace(state, auto_running=False, idle_elapsed=0.0, auto_elapsed=0.0), NO_PLAN
        return state, NO_PLAN

    state = replace(
        state,
        idle_elapsed=0.0,
        auto_elapsed=0.0,
        auto_running=state.mode is Mode.ANIMATED,
    )
    s = state.settings

    if event.kind in (InputKind.EXPLORE_PAST, InputKind.TAP_BACKGROUND):
        pressed = "explore" if event.kind is InputKind.TAP_BACKGROUND else None
        return _advance(dataset, state, pressed)
    if event.kind is InputKind.REVISIT:
        new = replace(state, highlight=max(1, state.highlight - 1))
        return new, TransitionPlan(PlanKind.HIGHLIGHT_ONLY, s.advance_anim_ms)
    if event.kind is InputKind.RESET_TODAY:
        return replace(state, revealed=1, highlight=1), TransitionPlan(PlanKind.RESET, s.advance_anim_ms)
    if event.kind is InputKind.TAP_MARKER:
        target = min(max(1, event.event_index or 1), state.revealed)
        return replace(state, highlight=target), TransitionPlan(PlanKind.HIGHLIGHT_ONLY, s.advance_anim_ms)
    raise ChronoError("E_BAD_INPUT", f"unknown input kind {event.kind}")


def _advance(dataset: Dataset, state: ExhibitState,
             pressed: str | None = None) -> tuple[ExhibitState, TransitionPlan]:
    s = state.settings
    n = len(dataset.events)
    if state.highlight < state.revealed:
        # Re-advancing through previously revisited events only moves the
        # highlight until it catches up with the frontier.
        new = replace(state, highlight=state.highlight + 1)
        return new, TransitionPlan(PlanKind.HIGHLIGHT_ONLY, s.advance_anim_ms, pressed)
    if state.revealed < n:
        new_revealed = state.revealed + 1
        stays = period_of(dataset, new_revealed - 1) == period_of(dataset, state.revealed - 1)
        new = replace(state, revealed=new_revealed, highlight=new_revealed)
        if stays:
            return new, TransitionPlan(PlanKind.ADVANCE, s.advance_anim_ms, pressed)
        return new, TransitionPlan(PlanKind.OVERFLOW, s.overflow_anim_ms, pressed, OVERFLOW_PHASES)
    return state, TransitionPlan(PlanKind.NONE, 0.0, pressed)


def _auto_advance(dataset: Dataset, state: ExhibitState) -> tuple[ExhibitState, TransitionPlan]:
    n = len(dataset.events)
    if state.revealed == n and state.highlight == n:
        # Unattended progression loops: one extra interval, then start over.
        new = replace(state, revealed=1, highlight=1)
        return new, TransitionPlan(PlanKind.RESET, state.settings.advance_anim_ms)
    return _advance(dataset, state)


def _tick(dataset: Dataset, state: ExhibitState, dt: float) -> tuple[ExhibitState, TransitionPlan]:
    s = state.settings
    idle = state.idle_elapsed + dt

    if state.mode is Mode.INTERACTIVE:
        return replace(state, idle_elapsed=idle), NO_PLAN

    if state.mode is Mode.ANIMATED:
        acc = state.auto_elapsed + dt
        if acc >= s.auto_interval_s:
            return _auto_advance(dataset, replace(state, idle_elapsed=idle,
                                                  auto_elapsed=acc - s.auto_interval_s))
        return replace(state, idle_elapsed=idle, auto_elapsed=acc), NO_PLAN

    # DYNAMIC
    if not state.auto_running:
        if idle >= s.idle_timeout_s:
            armed = replace(state, idle_elapsed=idle, auto_running=True,
                            auto_elapsed=idle - s.idle_timeout_s)
            return _auto_advance(dataset, armed)
        return replace(state, idle_elapsed=idle), NO_PLAN
    acc = state.auto_elapsed + dt
    if acc >= s.auto_interval_s:
        return _auto_advance(dataset, replace(state, idle_elapsed=idle,
                                              auto_elapsed=acc - s.auto_interval_s))
    return replace(state, idle_elapsed=idle, auto_elapsed=acc), NO_PLAN


def ease_in_out_cubic(t: float) -> float:
    if t < 0.5:
        return 4.0 * t * t * t
    u = -2.0 * t + 2.0
    return 1.0 - u * u * u / 2.0


def linear(t: float) -> float:
    return t


def _lerp(a: float, b: float, t: float) -> float:
    return a + (b - a) * t


def _clamp01(v: float) -> float:
    return 0.0 if v < 0.0 else 1.0 if v > 1.0 else v


def _phase_progress(plan: TransitionPlan, name: str, t: float, default: float) -> float:
    for phase in plan.phases:
        if phase.name == name:
            return _clamp01((t - phase.start) / (phase.end - phase.start))
    return default


def _tier_keys(scene: Scene) -> list[int]:
    return [t.period_index_of_largest for t in scene.tiers]


def _reclip_segments(segments: tuple[Segment, ...], extent: float, scene: Scene) -> tuple[Segment, ...]:
    vp = scene.viewport
    out = []
    for seg in segments:
        if seg.newer_bound >= extent:
            continue  # entirely off the left edge of a shrinking tier
        older_visual = min(seg.older_visual, extent)
        out.append(replace(
            seg,
            older_visual=older_visual,
            x_start=x_position(older_visual, extent, vp),
            x_end=x_position(seg.newer_bound, extent, vp),
        ))
    return tuple(out)


def _interp_timeline(a: OverallTimeline, b: OverallTimeline, e: float, scene_b: Scene) -> OverallTimeline:
    vp = scene_b.viewport
    colored = _lerp(a.colored_until_measure, b.colored_until_measure, e)
    source = b.segments if len(b.segments) >= len(a.segments) else a.segments
    segments = []
    for seg in source:
        if seg.newer_bound >= colored:
            continue
        older_visual = min(seg.older_visual, colored)
        segments.append(replace(
            seg,
            older_visual=older_visual,
            x_start=x_position(older_visual, b.extent, vp),
            x_end=x_position(seg.newer_bound, b.extent, vp),
        ))
    return replace(b, colored_until_measure=colored, marker_x=_lerp(a.marker_x, b.marker_x, e),
                   segments=tuple(segments))


def interpolate(scene_a: Scene, scene_b: Scene, plan: TransitionPlan, t: float,
                easing=None) -> Scene:
    """A scene part-way through a transition.

    Exactly ``scene_a`` at t=0 and ``scene_b`` at t=1. In between, positions
    are re-derived from measures against eased tier extents rather than by
    interpolating raw x, so the picture stays metrically truthful while it
    rescales. Transient opacities mark elements fading in or out.
    """
    if scene_a.viewport != scene_b.viewport:
        raise ChronoError("E_PLAN_MISMATCH", "scenes use different viewports")
    keys_a, keys_b = _tier_keys(scene_a), _tier_keys(scene_b)
    kind = plan.kind
    if kind is PlanKind.NONE or kind is PlanKind.HIGHLIGHT_ONLY:
        if keys_a != keys_b:
            raise ChronoError("E_PLAN_MISMATCH", f"{kind.value} between different tier stacks")
    elif kind is PlanKind.ADVANCE:
        if keys_a != keys_b or scene_b.revealed != scene_a.revealed + 1:
            raise ChronoError("E_PLAN_MISMATCH", "advance must add one event within the tier stack")
    elif kind is PlanKind.OVERFLOW:
        if keys_b != [keys_a[0] + 1] + keys_a:
            raise ChronoError("E_PLAN_MISMATCH", "overflow must add one tier")
    elif kind is PlanKind.RESET:
        if len(keys_b) != 1 or scene_b.revealed != 1:
            raise ChronoError("E_PLAN_MISMATCH", "reset must land on a single tier")

    if t <= 0.0:
        return scene_a
    if t >= 1.0:
        return scene_b
    e = (easing or ease_in_out_cubic)(t)

    if kind is PlanKind.NONE:
        return scene_b
    if kind is PlanKind.HIGHLIGHT_ONLY:
        base = scene_a if t < 0.5 else scene_b
        return base.with_pressed(plan.pressed_button)
    if kind is PlanKind.RESET:
        return _interp_reset(scene_a, scene_b, plan, t, e)
    return _interp_rescale(scene_a, scene_b, plan, t, e)


def _interp_rescale(scene_a: Scene, scene_b: Scene, plan: TransitionPlan, t: float, e: float) -> Scene:
    """Shared path for ADVANCE and OVERFLOW: scene_b structure, eased extents."""
    vp = scene_b.viewport
    overflow = plan.kind is PlanKind.OVERFLOW
    a_active, b_active = scene_a.active_tier, scene_b.active_tier
    fade_p = _phase_progress(plan, "fade_labels", t, e)
    appear_p = _phase_progress(plan, "curve_and_lines_appear", t, e)

    a_by_key = {x.period_index_of_largest: x for x in scene_a.tiers}
    a_markers = {m.event_index: m for m in a_active.markers}
    active_extent = _lerp(a_active.extent, b_active.extent, e)

    tiers = []
    for tier in scene_b.tiers:
        key = tier.period_index_of_largest
        if tier is b_active:
            markers = []
            for m in tier.markers:
                prev = a_markers.get(m.event_index)
                x = x_position(m.measure, active_extent, vp)
                if prev is None:
                    markers.append(replace(m, x=x, opacity=e))
                elif prev.style == OPAQUE_LABELED and m.style == TRANSLUCENT_UNLABELED and fade_p < 1.0:
                    markers.append(replace(
                        prev, x=x,
                        opacity=_lerp(1.0, TRANSLUCENT_MARKER_OPACITY, fade_p),
                        highlighted=False,
                    ))
                else:
                    markers.append(replace(m, x=x))
            tiers.append(replace(
                tier,
                extent=active_extent,
                segments=_reclip_segments(tier.segments, active_extent, scene_b),
                markers=tuple(markers),
            ))
        elif overflow and key == a_active.period_index_of_largest:
            # The frozen copy of the old active tier descending into place.
            tiers.append(replace(tier, y=_lerp(a_active.y, tier.y, e)))
        else:
            prev_tier = a_by_key[key]
            tiers.append(replace(tier, y=_lerp(prev_tier.y, tier.y, e)))

    tier_by_key = {x.period_index_of_largest: x for x in tiers}
    a_curve_keys = {c.period_index for c in scene_a.relation_curves}
    curves = []
    for curve in scene_b.relation_curves:
        points = []
        for p in curve.points:
            tier = tier_by_key[p.tier]
            if p.tier == b_active.period_index_of_largest:
                seg = next(s for s in tier.segments if s.period_index == curve.period_index)
                points.append(CurvePoint(tier=p.tier, x=seg.x_start, y=tier.y))
            else:
                points.append(CurvePoint(tier=p.tier, x=p.x, y=tier.y))
        opacity = 1.0 if curve.period_index in a_curve_keys else appear_p
        curves.append(replace(curve, points=tuple(points), opacity=opacity))

    marker_measure = {m.event_index: m.measure for tier in scene_b.tiers for m in tier.markers}
    a_line_keys = {l.event_index for l in scene_a.relation_lines}
    lines = []
    for line in scene_b.relation_lines:
        upper, lower = line.upper, line.lower
        upper_tier, lower_tier = tier_by_key[upper.tier], tier_by_key[lower.tier]
        ux = upper.x
        if upper.tier == b_active.period_index_of_largest:
            ux = x_position(marker_measure[line.event_index], active_extent, vp)
        opacity = 1.0 if line.event_index in a_line_keys else appear_p
        lines.append(replace(
            line,
            upper=CurvePoint(tier=upper.tier, x=ux, y=upper_tier.y),
            lower=CurvePoint(tier=lower.tier, x=lower.x, y=lower_tier.y),
            opacity=opacity,
        ))

    late = t >= 0.5
    return replace(
        scene_b,
        highlight=scene_b.highlight if late else scene_a.highlight,
        tiers=tuple(tiers),
        relation_curves=tuple(curves),
        relation_lines=tuple(lines),
        overall_timeline=_interp_timeline(scene_a.overall_timeline, scene_b.overall_timeline, e, scene_b),
        media_box=scene_b.media_box if late else scene_a.media_box,
        button_bar=replace(scene_b.button_bar, pressed=plan.pressed_button),
    )


def _interp_reset(scene_a: Scene, scene_b: Scene, plan: TransitionPlan, t: float, e: float) -> Scene:
    """Collapse back to the single starting tier: archives and old markers fade out."""
    vp = scene_b.viewport
    a_active, b_active = scene_a.active_tier, scene_b.active_tier
    active_extent = _lerp(a_active.extent, b_active.extent, e)
    keep = {m.event_index for m in b_active.markers}

    markers = []
    for m in a_active.markers:
        x = x_position(m.measure, active_extent, vp)
        opacity = 1.0 if m.event_index in keep else 1.0 - e
        markers.append(replace(m, x=x, opacity=opacity, highlighted=False))
    tiers = [replace(
        a_active,
        extent=active_extent,
        segments=_reclip_segments(a_active.segments, active_extent, scene_a),
        markers=tuple(markers),
    )]
    for tier in scene_a.tiers[1:]:
        tiers.append(replace(tier, opacity=1.0 - e))

    curves = tuple(replace(c, opacity=1.0 - e) for c in scene_a.relation_curves)
    lines = tuple(replace(l, opacity=1.0 - e) for l in scene_a.relation_lines)

    late = t >= 0.5
    return replace(
        scene_b,
        revealed=scene_b.revealed if late else scene_a.revealed,
        highlight=scene_b.highlight if late else scene_a.highlight,
        tiers=tuple(tiers),
        relation_curves=curves,
        relation_lines=lines,
        overall_timeline=_interp_timeline(scene_a.overall_timeline, scene_b.overall_timeline, e, scene_b),
        media_box=scene_b.media_box if late else scene_a.media_box,
        button_bar=replace(scene_b.button_bar, pressed=plan.pressed_button),
    )
