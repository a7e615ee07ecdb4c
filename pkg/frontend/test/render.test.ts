import { describe, expect, it } from "vitest";

import { renderScene } from "../src/render.js";
import { SceneJson } from "../src/types.js";
import scenes from "./fixtures/scenes.json";

const sceneFixtures = scenes as unknown as Record<string, SceneJson>;

function mount(scene: SceneJson): HTMLElement {
  const root = document.createElement("main");
  document.body.replaceChildren(root);
  renderScene(root, scene);
  return root;
}

describe("scene rendering", () => {
  it("places every marker exactly at its scene JSON position", () => {
    const scene = sceneFixtures["6"];
    const root = mount(scene);
    for (const tier of scene.tiers) {
      const group = root.querySelector(`#tier-${tier.period_index_of_largest}`);
      expect(group).not.toBeNull();
      for (const marker of tier.markers) {
        const node = group!.querySelector<SVGRectElement>(
          `rect.marker[data-event-index="${marker.event_index}"]`,
        );
        expect(node).not.toBeNull();
        expect(Number(node!.dataset.x)).toBe(marker.x);
        const size = (scene.viewport.width / 1000) * 10;
        expect(Number(node!.getAttribute("x"))).toBeCloseTo(marker.x - size / 2, 9);
      }
    }
  });

  it("renders one tier group per scene tier and all connective elements", () => {
    const scene = sceneFixtures["6"];
    const root = mount(scene);
    expect(root.querySelectorAll("g.tier").length).toBe(scene.tiers.length);
    expect(root.querySelectorAll("[id^=curve-]").length).toBe(scene.relation_curves.length);
    expect(root.querySelectorAll("[id^=rline-]").length).toBe(scene.relation_lines.length);
  });

  it("shows the highlighted event in the media box", () => {
    const scene = sceneFixtures["3"];
    const root = mount(scene);
    expect(root.querySelector("#media-box h2")!.textContent).toBe(scene.media_box.name);
    expect(root.querySelector(".media-measure")!.textContent).toBe(scene.media_box.measure_text);
  });

  it("disables buttons according to the scene button bar", () => {
    const first = mount(sceneFixtures["1"]);
    expect(first.querySelector<HTMLButtonElement>("#button-revisit")!.disabled).toBe(true);
    expect(first.querySelector<HTMLButtonElement>("#button-explore")!.disabled).toBe(false);
    const last = mount(sceneFixtures["6"]);
    expect(last.querySelector<HTMLButtonElement>("#button-explore")!.disabled).toBe(true);
  });

  it("styles translucent markers apart from opaque ones", () => {
    const scene = sceneFixtures["6"];
    const root = mount(scene);
    const translucent = root.querySelectorAll(".marker-translucent");
    const opaque = root.querySelectorAll(".marker-opaque");
    const expectTranslucent = scene.tiers.reduce(
      (n, t) => n + t.markers.filter((m) => m.style === "translucent_unlabeled").length,
      0,
    );
    expect(translucent.length).toBe(expectTranslucent); // 4 on the six-event fixture
    expect(opaque.length).toBe(scene.tiers.reduce(
      (n, t) => n + t.markers.filter((m) => m.style === "opaque_labeled").length, 0));
  });
});
