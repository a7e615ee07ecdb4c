import { ExhibitApi } from "./api.js";
import { KioskConfig } from "./config.js";
import { classifyPlan, interpolateScene, PlanKind } from "./interpolate.js";
import { pressButtonVisual, renderScene } from "./render.js";
import { TelemetryQueue } from "./telemetry.js";
import { ButtonId, LogKind, SceneJson } from "./types.js";

export interface KioskOptions {
  /** Disable frame-by-frame animation (tests render keyframes directly). */
  animate?: boolean;
}

// The visitor-facing interaction loop. All geometry arrives as server scene
// keyframes; this class owns only the interaction counters, the timers, and
// the telemetry side effects.
export class Kiosk {
  private revealed = 1;
  private highlight = 1;
  private autoRunning = false;
  private eventCount = 0;
  private scene: SceneJson | null = null;
  private idleTimer: ReturnType<typeof setTimeout> | null = null;
  private autoTimer: ReturnType<typeof setInterval> | null = null;
  private readonly animate: boolean;

  constructor(
    private readonly root: HTMLElement,
    private readonly config: KioskConfig,
    private readonly api: ExhibitApi,
    private readonly telemetry: TelemetryQueue,
    options: KioskOptions = {},
  ) {
    this.animate = options.animate ?? true;
  }

  async start(): Promise<void> {
    const dataset = await this.api.dataset();
    this.eventCount = dataset.events.length;
    this.scene = await this.api.scene(1, 1);
    this.revealed = 1;
    this.highlight = 1;
    this.render();
    if (this.config.mode === "animated") {
      this.startAutomation(false);
    } else if (this.config.mode === "dynamic") {
      this.armIdleTimer();
    }
  }

  stop(): void {
    this.clearTimers();
  }

  get state(): { revealed: number; highlight: number; autoRunning: boolean } {
    return { revealed: this.revealed, highlight: this.highlight, autoRunning: this.autoRunning };
  }

  // --- visitor gestures -------------------------------------------------

  async explore(): Promise<void> {
    this.recordGesture("explore");
    await this.advance();
  }

  async revisit(): Promise<void> {
    this.recordGesture("revisit");
    await this.setHighlight(Math.max(1, this.highlight - 1));
  }

  async resetToToday(): Promise<void> {
    this.recordGesture("reset");
    await this.goToStep(1, 1);
  }

  async tapMarker(eventIndex: number): Promise<void> {
    this.recordGesture("tap_marker");
    const target = Math.min(Math.max(1, eventIndex + 1), this.revealed);
    await this.setHighlight(target);
  }

  async tapBackground(): Promise<void> {
    // anywhere that is not a control acts as the explore button, and the
    // button visibly depresses as if tapped directly
    this.recordGesture("tap_background");
    pressButtonVisual(this.root, "explore");
    await this.advance();
  }

  letMeInteract(): void {
    this.recordGesture("let_me_interact");
  }

  // --- internals ----------------------------------------------------------

  private recordGesture(button: ButtonId): void {
    const seq = this.telemetry.newSequence();
    this.telemetry.enqueue(seq, this.entry("button_press", button));
    this.humanActivity();
  }

  private entry(kind: LogKind, button: ButtonId | null = null) {
    return {
      deployment_id: this.config.deploymentId,
      timestamp: Date.now(),
      kind,
      button,
      revealed: this.revealed,
      highlight: this.highlight,
      mode: this.config.mode,
    };
  }

  private humanActivity(): void {
    if (this.config.mode !== "dynamic") return;
    if (this.autoRunning) {
      this.autoRunning = false;
      if (this.autoTimer !== null) clearInterval(this.autoTimer);
      this.autoTimer = null;
      this.render();
    }
    this.armIdleTimer();
  }

  private armIdleTimer(): void {
    if (this.idleTimer !== null) clearTimeout(this.idleTimer);
    this.idleTimer = setTimeout(() => {
      this.startAutomation(true);
    }, this.config.idleTimeoutS * 1000);
  }

  private startAutomation(fromIdle: boolean): void {
    this.autoRunning = true;
    if (fromIdle) {
      this.telemetry.enqueue(this.telemetry.newSequence(), this.entry("auto_prompt"));
      this.telemetry.enqueue(this.telemetry.newSequence(), this.entry("auto_start"));
      void this.autoAdvance(); // the first advance fires at the timeout itself
    }
    this.render();
    this.autoTimer = setInterval(() => {
      void this.autoAdvance();
    }, this.config.autoIntervalS * 1000);
  }

  private async autoAdvance(): Promise<void> {
    if (this.revealed === this.eventCount && this.highlight === this.eventCount) {
      // unattended progression loops back to the start
      this.telemetry.enqueue(this.telemetry.newSequence(), this.entry("auto_advance"));
      await this.goToStep(1, 1);
      return;
    }
    this.telemetry.enqueue(this.telemetry.newSequence(), this.entry("auto_advance"));
    await this.advance();
  }

  private async advance(): Promise<void> {
    if (this.highlight < this.revealed) {
      await this.setHighlight(this.highlight + 1);
      return;
    }
    if (this.revealed < this.eventCount) {
      await this.goToStep(this.revealed + 1, this.revealed + 1);
    }
  }

  private async setHighlight(target: number): Promise<void> {
    if (target === this.highlight) return;
    await this.goToStep(this.revealed, target);
  }

  private async goToStep(step: number, highlight: number): Promise<void> {
    const next = await this.api.scene(step, highlight);
    const plan = classifyPlan(this.scene, next);
    const previous = this.scene;
    this.revealed = step;
    this.highlight = highlight;
    this.scene = next;
    if (this.animate && previous !== null && plan !== "none") {
      await this.playTransition(previous, next, plan);
    }
    this.render();
  }

  private planDurationMs(plan: PlanKind): number {
    return plan === "overflow" ? this.config.overflowAnimMs : this.config.advanceAnimMs;
  }

  private async playTransition(a: SceneJson, b: SceneJson, plan: PlanKind): Promise<void> {
    const raf = globalThis.requestAnimationFrame;
    if (typeof raf !== "function") return; // no display clock: land on the keyframe
    const duration = this.planDurationMs(plan);
    const started = performance.now();
    await new Promise<void>((resolve) => {
      const frame = (nowMs: number) => {
        const t = Math.min(1, (nowMs - started) / duration);
        renderScene(this.root, interpolateScene(a, b, plan, t), this.handlers());
        if (t < 1) raf(frame);
        else resolve();
      };
      raf(frame);
    });
  }

  private handlers() {
    return {
      onMarkerTap: (eventIndex: number) => void this.tapMarker(eventIndex),
      onBackgroundTap: () => void this.tapBackground(),
      onButton: (button: ButtonId) => {
        if (button === "explore") void this.explore();
        else if (button === "revisit") void this.revisit();
        else if (button === "reset") void this.resetToToday();
        else if (button === "let_me_interact") this.letMeInteract();
      },
    };
  }

  private render(): void {
    if (this.scene === null) return;
    const scene: SceneJson = {
      ...this.scene,
      button_bar: {
        ...this.scene.button_bar,
        let_me_interact_visible: this.config.mode === "dynamic" && this.autoRunning,
      },
    };
    renderScene(this.root, scene, this.handlers());
  }

  private clearTimers(): void {
    if (this.idleTimer !== null) clearTimeout(this.idleTimer);
    if (this.autoTimer !== null) clearInterval(this.autoTimer);
    this.idleTimer = null;
    this.autoTimer = null;
  }
}
