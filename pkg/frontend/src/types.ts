// Wire types mirroring the exhibit service JSON contracts.

export interface SegmentJson {
  period_index: number;
  x_start: number;
  x_end: number;
  color_index: number;
  older_visual: number;
  newer_bound: number;
}

export interface MarkerJson {
  event_index: number;
  x: number;
  measure: number;
  style: "opaque_labeled" | "translucent_unlabeled";
  label_lines: string[];
  highlighted: boolean;
  opacity: number;
}

export interface TierJson {
  period_index_of_largest: number;
  extent: number;
  y: number;
  title_text: string | null;
  opacity: number;
  segments: SegmentJson[];
  markers: MarkerJson[];
}

export interface CurvePointJson {
  tier: number;
  x: number;
  y: number;
}

export interface RelationCurveJson {
  period_index: number;
  points: CurvePointJson[];
  fill: string;
  opacity: number;
}

export interface RelationLineJson {
  event_index: number;
  upper: CurvePointJson;
  lower: CurvePointJson;
  opacity: number;
}

export interface OverallTimelineJson {
  extent: number;
  colored_until_measure: number;
  marker_x: number;
  marker_label: string;
  left_label: string;
  right_label: string;
  y: number;
  segments: SegmentJson[];
}

export interface MediaBoxJson {
  name: string;
  description: string;
  image_ref: string | null;
  measure_text: string;
}

export interface ButtonBarJson {
  explore_enabled: boolean;
  revisit_enabled: boolean;
  reset_enabled: boolean;
  let_me_interact_visible: boolean;
  pressed: string | null;
}

export interface ViewportJson {
  width: number;
  height: number;
  margin_left: number;
  margin_right: number;
  margin_top: number;
  margin_bottom: number;
  tiers_band: [number, number];
  timeline_band: [number, number];
}

export interface SceneJson {
  title: string;
  subtitle: string | null;
  viewport: ViewportJson;
  revealed: number;
  highlight: number;
  tiers: TierJson[];
  relation_curves: RelationCurveJson[];
  relation_lines: RelationLineJson[];
  overall_timeline: OverallTimelineJson;
  media_box: MediaBoxJson;
  button_bar: ButtonBarJson;
}

export interface EventJson {
  index: number;
  name: string;
  description: string;
  image_ref: string | null;
  measure: number;
  is_anchor: boolean;
  period_title: string | null;
}

export interface DatasetJson {
  title: string;
  subtitle: string | null;
  events: EventJson[];
  periods: {
    index: number;
    newer_bound: number;
    older_bound: number;
    title: string | null;
    color_index: number;
  }[];
}

export type LogKind = "button_press" | "auto_prompt" | "auto_start" | "auto_advance";

export type ButtonId =
  | "explore"
  | "revisit"
  | "reset"
  | "let_me_interact"
  | "tap_marker"
  | "tap_background";

export interface LogEntryWire {
  deployment_id: string;
  timestamp: number;
  kind: LogKind;
  button: ButtonId | null;
  revealed: number;
  highlight: number;
  mode: string;
}
