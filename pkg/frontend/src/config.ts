// Kiosk configuration rides entirely in URL query parameters, so a URL
// fully captures one exhibit instance and survives reloads.

export type KioskMode = "interactive" | "animated" | "dynamic";

export interface KioskConfig {
  mode: KioskMode;
  idleTimeoutS: number;
  autoIntervalS: number;
  advanceAnimMs: number;
  overflowAnimMs: number;
  subtitle: string | null;
  deploymentId: string;
  datasetSource: string | null;
}

export const DEFAULT_CONFIG: KioskConfig = {
  mode: "dynamic",
  idleTimeoutS: 60,
  autoIntervalS: 2,
  advanceAnimMs: 750,
  overflowAnimMs: 1500,
  subtitle: null,
  deploymentId: "default",
  datasetSource: null,
};

const MODES: KioskMode[] = ["interactive", "animated", "dynamic"];

function positive(value: string | null, fallback: number): number {
  if (value === null) return fallback;
  const parsed = Number(value);
  return Number.isFinite(parsed) && parsed > 0 ? parsed : fallback;
}

export function configFromSearch(search: string): KioskConfig {
  const params = new URLSearchParams(search);
  const mode = params.get("mode");
  return {
    mode: MODES.includes(mode as KioskMode) ? (mode as KioskMode) : DEFAULT_CONFIG.mode,
    idleTimeoutS: positive(params.get("idle"), DEFAULT_CONFIG.idleTimeoutS),
    autoIntervalS: positive(params.get("interval"), DEFAULT_CONFIG.autoIntervalS),
    advanceAnimMs: positive(params.get("advance_ms"), DEFAULT_CONFIG.advanceAnimMs),
    overflowAnimMs: positive(params.get("overflow_ms"), DEFAULT_CONFIG.overflowAnimMs),
    subtitle: params.get("subtitle"),
    deploymentId: params.get("deployment") ?? DEFAULT_CONFIG.deploymentId,
    datasetSource: params.get("dataset"),
  };
}

export function configToSearch(config: KioskConfig): string {
  const params = new URLSearchParams();
  params.set("mode", config.mode);
  params.set("idle", String(config.idleTimeoutS));
  params.set("interval", String(config.autoIntervalS));
  params.set("advance_ms", String(config.advanceAnimMs));
  params.set("overflow_ms", String(config.overflowAnimMs));
  if (config.subtitle !== null) params.set("subtitle", config.subtitle);
  params.set("deployment", config.deploymentId);
  if (config.datasetSource !== null) params.set("dataset", config.datasetSource);
  return params.toString();
}
