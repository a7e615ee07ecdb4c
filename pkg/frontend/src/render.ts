import { ButtonId, SceneJson } from "./types.js";

// DOM rendering of a server scene. Marker positions are taken verbatim from
// the scene JSON (each marker element also exposes them as data attributes),
// so tests can assert the kiosk adds no geometry of its own.

const SVG_NS = "http://www.w3.org/2000/svg";

export interface RenderHandlers {
  onMarkerTap?: (eventIndex: number) => void;
  onBackgroundTap?: () => void;
  onButton?: (button: ButtonId) => void;
}

function el<K extends keyof SVGElementTagNameMap>(
  name: K,
  attrs: Record<string, string>,
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, name);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  return node;
}

function markerSize(scene: SceneJson): number {
  return (scene.viewport.width / 1000) * 10;
}

type Point = [number, number];

// Clamped monotone tangents keep the interpolant from bulging past a tier.
function monotoneCubicPath(points: Point[]): string {
  if (points.length === 0) return "";
  if (points.length === 1) return `M${points[0][0]} ${points[0][1]}`;
  const n = points.length;
  const slopes: number[] = [];
  for (let i = 0; i < n - 1; i++) {
    slopes.push((points[i + 1][0] - points[i][0]) / (points[i + 1][1] - points[i][1]));
  }
  const tangents = [slopes[0]];
  for (let i = 1; i < n - 1; i++) {
    if (slopes[i - 1] * slopes[i] <= 0) {
      tangents.push(0);
    } else {
      const mean = (slopes[i - 1] + slopes[i]) / 2;
      const cap = 3 * Math.min(Math.abs(slopes[i - 1]), Math.abs(slopes[i]));
      tangents.push(Math.max(-cap, Math.min(cap, mean)));
    }
  }
  tangents.push(slopes[n - 2]);
  const parts = [`M${points[0][0]} ${points[0][1]}`];
  for (let i = 0; i < n - 1; i++) {
    const h = points[i + 1][1] - points[i][1];
    const c1x = points[i][0] + (tangents[i] * h) / 3;
    const c2x = points[i + 1][0] - (tangents[i + 1] * h) / 3;
    parts.push(
      `C${c1x} ${points[i][1] + h / 3} ${c2x} ${points[i + 1][1] - h / 3} ` +
        `${points[i + 1][0]} ${points[i + 1][1]}`,
    );
  }
  return parts.join(" ");
}

export function renderScene(
  root: HTMLElement,
  scene: SceneJson,
  handlers: RenderHandlers = {},
): void {
  root.replaceChildren();
  const vp = scene.viewport;

  const header = document.createElement("header");
  header.className = "kiosk-header";
  const title = document.createElement("h1");
  title.textContent = scene.title;
  header.appendChild(title);
  if (scene.subtitle) {
    const subtitle = document.createElement("p");
    subtitle.className = "kiosk-subtitle";
    subtitle.textContent = scene.subtitle;
    header.appendChild(subtitle);
  }
  root.appendChild(header);

  // Anywhere that is not a marker, a label, or a button counts as background;
  // those controls stop propagation before the tap bubbles this far.
  const background = () => {
    if (handlers.onBackgroundTap) handlers.onBackgroundTap();
  };
  header.addEventListener("pointerdown", background);

  const svg = el("svg", {
    class: "kiosk-scene",
    viewBox: `0 0 ${vp.width} ${vp.height}`,
    width: String(vp.width),
    height: String(vp.height),
  });
  svg.addEventListener("pointerdown", background);

  const size = markerSize(scene);

  // overall timeline
  const timeline = el("g", { id: "overall-timeline" });
  const tl = scene.overall_timeline;
  const inner = vp.width - vp.margin_left - vp.margin_right;
  timeline.appendChild(el("rect", {
    x: String(vp.margin_left), y: String(tl.y - 2),
    width: String(inner), height: "4", fill: "#DDDDDD",
  }));
  for (const seg of tl.segments) {
    timeline.appendChild(el("rect", {
      "data-period": String(seg.period_index),
      x: String(Math.min(seg.x_start, seg.x_end)), y: String(tl.y - 3),
      width: String(Math.abs(seg.x_end - seg.x_start)), height: "6",
      fill: "currentColor", class: `period-${seg.color_index}`,
    }));
  }
  timeline.appendChild(el("rect", {
    id: "tl-marker", x: String(tl.marker_x - size / 2), y: String(tl.y - size / 2),
    width: String(size), height: String(size), rx: "2", fill: "#000000",
  }));
  svg.appendChild(timeline);

  // relation curves and lines under the tiers
  for (const curve of scene.relation_curves) {
    const d = monotoneCubicPath(curve.points.map((p) => [p.x, p.y] as Point));
    svg.appendChild(el("path", {
      id: `curve-${curve.period_index}`, d,
      fill: "none", stroke: curve.fill, "stroke-width": "2",
      opacity: String(0.35 * curve.opacity),
    }));
  }
  for (const line of scene.relation_lines) {
    svg.appendChild(el("line", {
      id: `rline-${line.event_index}`,
      x1: String(line.upper.x), y1: String(line.upper.y),
      x2: String(line.lower.x), y2: String(line.lower.y),
      stroke: "#BBBBBB", opacity: String(line.opacity),
    }));
  }

  for (const tier of scene.tiers) {
    const group = el("g", {
      id: `tier-${tier.period_index_of_largest}`,
      class: "tier",
      opacity: String(tier.opacity),
    });
    for (const seg of tier.segments) {
      group.appendChild(el("rect", {
        id: `seg-${tier.period_index_of_largest}-${seg.period_index}`,
        x: String(Math.min(seg.x_start, seg.x_end)), y: String(tier.y - 3),
        width: String(Math.max(0, Math.abs(seg.x_end - seg.x_start))), height: "6",
        fill: "currentColor", class: `period-${seg.color_index}`,
      }));
    }
    for (const marker of tier.markers) {
      const opaque = marker.style === "opaque_labeled";
      const rect = el("rect", {
        class: `marker ${opaque ? "marker-opaque" : "marker-translucent"}` +
          (marker.highlighted ? " marker-highlighted" : ""),
        "data-event-index": String(marker.event_index),
        "data-x": String(marker.x),
        "data-measure": String(marker.measure),
        x: String(marker.x - size / 2), y: String(tier.y - size / 2),
        width: String(size), height: String(size), rx: "2",
        fill: "#000000",
        "fill-opacity": String(marker.opacity * (opaque ? 1 : 0.3)),
      });
      rect.addEventListener("pointerdown", (event) => {
        event.stopPropagation();
        if (handlers.onMarkerTap) handlers.onMarkerTap(marker.event_index);
      });
      group.appendChild(rect);
      marker.label_lines.forEach((line, i) => {
        const label = el("text", {
          class: "marker-label",
          "data-event-index": String(marker.event_index),
          x: String(marker.x),
          y: String(tier.y - size - 6 - (marker.label_lines.length - 1 - i) * 16),
          "text-anchor": "middle",
          opacity: String(marker.opacity),
        });
        label.textContent = line;
        label.addEventListener("pointerdown", (event) => {
          event.stopPropagation();
          if (handlers.onMarkerTap) handlers.onMarkerTap(marker.event_index);
        });
        group.appendChild(label);
      });
    }
    if (tier.title_text) {
      const titleText = el("text", {
        class: "tier-title",
        x: String(vp.margin_left - 10), y: String(tier.y + 5),
        "text-anchor": "end",
      });
      titleText.textContent = tier.title_text;
      group.appendChild(titleText);
    }
    svg.appendChild(group);
  }
  root.appendChild(svg);

  // media box
  const media = document.createElement("section");
  media.id = "media-box";
  media.addEventListener("pointerdown", background);
  const name = document.createElement("h2");
  name.textContent = scene.media_box.name;
  const measure = document.createElement("p");
  measure.className = "media-measure";
  measure.textContent = scene.media_box.measure_text;
  media.append(name, measure);
  if (scene.media_box.description) {
    const description = document.createElement("p");
    description.className = "media-description";
    description.textContent = scene.media_box.description;
    media.appendChild(description);
  }
  if (scene.media_box.image_ref) {
    const image = document.createElement("img");
    image.src = scene.media_box.image_ref;
    image.alt = scene.media_box.name;
    media.appendChild(image);
  }
  root.appendChild(media);

  // button bar
  const bar = document.createElement("nav");
  bar.id = "button-bar";
  const buttons: [ButtonId, string, boolean][] = [
    ["explore", "Explore the Past", scene.button_bar.explore_enabled],
    ["revisit", "Revisit Events", scene.button_bar.revisit_enabled],
    ["reset", "Reset to Today", scene.button_bar.reset_enabled],
  ];
  if (scene.button_bar.let_me_interact_visible) {
    buttons.push(["let_me_interact", "Let Me Interact!", true]);
  }
  for (const [id, label, enabled] of buttons) {
    const button = document.createElement("button");
    button.id = `button-${id}`;
    button.textContent = label;
    button.disabled = !enabled;
    if (scene.button_bar.pressed === id) button.classList.add("pressed");
    button.addEventListener("pointerdown", (event) => {
      event.stopPropagation();
      if (handlers.onButton) handlers.onButton(id);
    });
    bar.appendChild(button);
  }
  root.appendChild(bar);
}

/** Briefly add the pressed style to a button, as if the visitor tapped it. */
export function pressButtonVisual(root: HTMLElement, button: ButtonId, durationMs = 180): void {
  const node = root.querySelector<HTMLButtonElement>(`#button-${button}`);
  if (!node) return;
  node.classList.add("pressed");
  setTimeout(() => node.classList.remove("pressed"), durationMs);
}
