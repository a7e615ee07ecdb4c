import { MarkerJson, SceneJson, SegmentJson, TierJson } from "./types.js";

// Scene keyframes come from the server; the only geometry the kiosk derives
// itself is the in-between frame, recomputed in extent space so the picture
// stays metrically truthful while a tier rescales.

export type PlanKind = "advance" | "overflow" | "highlight_only" | "reset" | "none";

export function classifyPlan(prev: SceneJson | null, next: SceneJson): PlanKind {
  if (prev === null) return "none";
  if (next.revealed === 1 && prev.revealed > 1) return "reset";
  if (next.tiers.length > prev.tiers.length) return "overflow";
  if (next.revealed > prev.revealed) return "advance";
  if (next.highlight !== prev.highlight) return "highlight_only";
  return "none";
}

export function easeInOutCubic(t: number): number {
  if (t < 0.5) return 4 * t * t * t;
  const u = -2 * t + 2;
  return 1 - (u * u * u) / 2;
}

function lerp(a: number, b: number, t: number): number {
  return a + (b - a) * t;
}

function xPosition(measure: number, extent: number, scene: SceneJson): number {
  const vp = scene.viewport;
  const inner = vp.width - vp.margin_left - vp.margin_right;
  return vp.margin_left + inner * (1 - measure / extent);
}

function reclipSegments(segments: SegmentJson[], extent: number, scene: SceneJson): SegmentJson[] {
  return segments
    .filter((s) => s.newer_bound < extent)
    .map((s) => {
      const olderVisual = Math.min(s.older_visual, extent);
      return {
        ...s,
        older_visual: olderVisual,
        x_start: xPosition(olderVisual, extent, scene),
        x_end: xPosition(s.newer_bound, extent, scene),
      };
    });
}

function morphMarkers(
  prevMarkers: MarkerJson[],
  nextMarkers: MarkerJson[],
  extent: number,
  e: number,
  scene: SceneJson,
): MarkerJson[] {
  const before = new Map(prevMarkers.map((m) => [m.event_index, m]));
  return nextMarkers.map((m) => {
    const x = xPosition(m.measure, extent, scene);
    const prev = before.get(m.event_index);
    if (prev === undefined) {
      return { ...m, x, opacity: e };
    }
    if (prev.style === "opaque_labeled" && m.style === "translucent_unlabeled" && e < 1) {
      // demoted markers keep their labels while they fade
      return { ...prev, x, opacity: lerp(1, 0.3, e), highlighted: false };
    }
    return { ...m, x };
  });
}

/** A frame part-way between two server scenes; exact endpoints at t=0 and t=1. */
export function interpolateScene(
  a: SceneJson,
  b: SceneJson,
  plan: PlanKind,
  t: number,
): SceneJson {
  if (t <= 0) return a;
  if (t >= 1 || plan === "none") return b;
  if (plan === "highlight_only") return t < 0.5 ? a : b;
  const e = easeInOutCubic(t);

  const prevByKey = new Map(a.tiers.map((tier) => [tier.period_index_of_largest, tier]));
  const aActive = a.tiers[0];
  const bActive = b.tiers[0];

  if (plan === "reset") {
    const extent = lerp(aActive.extent, bActive.extent, e);
    const keep = new Set(bActive.markers.map((m) => m.event_index));
    const active: TierJson = {
      ...aActive,
      extent,
      segments: reclipSegments(aActive.segments, extent, a),
      markers: aActive.markers.map((m) => ({
        ...m,
        x: xPosition(m.measure, extent, a),
        opacity: keep.has(m.event_index) ? 1 : 1 - e,
        highlighted: false,
      })),
    };
    const fading = a.tiers.slice(1).map((tier) => ({ ...tier, opacity: 1 - e }));
    return {
      ...b,
      tiers: [active, ...fading],
      relation_curves: a.relation_curves.map((c) => ({ ...c, opacity: 1 - e })),
      relation_lines: a.relation_lines.map((l) => ({ ...l, opacity: 1 - e })),
      media_box: t < 0.5 ? a.media_box : b.media_box,
      highlight: t < 0.5 ? a.highlight : b.highlight,
    };
  }

  // advance and overflow share the rescale path
  const activeExtent = lerp(aActive.extent, bActive.extent, e);
  const tiers = b.tiers.map((tier) => {
    if (tier === bActive) {
      return {
        ...tier,
        extent: activeExtent,
        segments: reclipSegments(tier.segments, activeExtent, b),
        markers: morphMarkers(aActive.markers, tier.markers, activeExtent, e, b),
      };
    }
    const prev =
      plan === "overflow" && tier.period_index_of_largest === aActive.period_index_of_largest
        ? aActive
        : prevByKey.get(tier.period_index_of_largest);
    return prev === undefined ? tier : { ...tier, y: lerp(prev.y, tier.y, e) };
  });

  const tierByKey = new Map(tiers.map((tier) => [tier.period_index_of_largest, tier]));
  const prevCurves = new Set(a.relation_curves.map((c) => c.period_index));
  const curves = b.relation_curves.map((curve) => ({
    ...curve,
    opacity: prevCurves.has(curve.period_index) ? 1 : Math.max(0, (t - 0.6) / 0.4),
    points: curve.points.map((p) => {
      const tier = tierByKey.get(p.tier);
      if (tier === undefined) return p;
      if (p.tier === bActive.period_index_of_largest) {
        const seg = tier.segments.find((s) => s.period_index === curve.period_index);
        return { ...p, x: seg ? seg.x_start : p.x, y: tier.y };
      }
      return { ...p, y: tier.y };
    }),
  }));

  const measures = new Map(
    b.tiers.flatMap((tier) => tier.markers.map((m) => [m.event_index, m.measure] as const)),
  );
  const prevLines = new Set(a.relation_lines.map((l) => l.event_index));
  const lines = b.relation_lines.map((line) => {
    const upperTier = tierByKey.get(line.upper.tier);
    const lowerTier = tierByKey.get(line.lower.tier);
    const measure = measures.get(line.event_index);
    const upperX =
      line.upper.tier === bActive.period_index_of_largest && measure !== undefined
        ? xPosition(measure, activeExtent, b)
        : line.upper.x;
    return {
      ...line,
      opacity: prevLines.has(line.event_index) ? 1 : Math.max(0, (t - 0.6) / 0.4),
      upper: { ...line.upper, x: upperX, y: upperTier ? upperTier.y : line.upper.y },
      lower: { ...line.lower, y: lowerTier ? lowerTier.y : line.lower.y },
    };
  });

  const colored = lerp(
    a.overall_timeline.colored_until_measure,
    b.overall_timeline.colored_until_measure,
    e,
  );
  return {
    ...b,
    tiers,
    relation_curves: curves,
    relation_lines: lines,
    overall_timeline: {
      ...b.overall_timeline,
      colored_until_measure: colored,
      marker_x: lerp(a.overall_timeline.marker_x, b.overall_timeline.marker_x, e),
      segments: b.overall_timeline.segments.map((s) => ({
        ...s,
        older_visual: Math.min(s.older_visual, colored),
        x_start: xPosition(Math.min(s.older_visual, colored), b.overall_timeline.extent, b),
      })),
    },
    media_box: t < 0.5 ? a.media_box : b.media_box,
    highlight: t < 0.5 ? a.highlight : b.highlight,
  };
}
