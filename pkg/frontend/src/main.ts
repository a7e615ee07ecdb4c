import { HttpExhibitApi } from "./api.js";
import { configFromSearch, configToSearch, DEFAULT_CONFIG } from "./config.js";
import { Kiosk } from "./kiosk.js";
import { TelemetryQueue } from "./telemetry.js";

function welcomeView(root: HTMLElement): void {
  root.replaceChildren();
  const heading = document.createElement("h1");
  heading.textContent = "Deep Time Exhibit";
  const intro = document.createElement("p");
  intro.textContent = "Step through events across vastly different magnitudes of time.";

  const sample = document.createElement("a");
  sample.id = "start-sample";
  sample.href = `/?${configToSearch(DEFAULT_CONFIG)}`;
  sample.textContent = "Start the sample exhibit";

  const form = document.createElement("form");
  form.id = "custom-config";
  form.method = "get";
  form.action = "/";
  form.innerHTML = `
    <label>Dataset <input name="dataset" placeholder="URL or server path"></label>
    <label>Mode <select name="mode">
      <option value="dynamic">dynamic</option>
      <option value="interactive">interactive</option>
      <option value="animated">animated</option>
    </select></label>
    <label>Idle timeout (s) <input name="idle" value="60"></label>
    <label>Auto interval (s) <input name="interval" value="2"></label>
    <label>Subtitle <input name="subtitle"></label>
    <label>Deployment id <input name="deployment" value="default"></label>
    <button type="submit">Start</button>
  `;

  root.append(heading, intro, sample, form);
}

function retryView(root: HTMLElement, error: unknown, onRetry: () => void): void {
  root.replaceChildren();
  const heading = document.createElement("h1");
  heading.textContent = "Exhibit unavailable";
  const detail = document.createElement("p");
  detail.textContent = error instanceof Error ? error.message : String(error);
  const retry = document.createElement("button");
  retry.id = "retry";
  retry.textContent = "Try again";
  retry.addEventListener("click", onRetry);
  root.append(heading, detail, retry);
}

export async function boot(root: HTMLElement, search: string = window.location.search): Promise<void> {
  if (!search || search === "?") {
    welcomeView(root);
    return;
  }
  const config = configFromSearch(search);
  const api = new HttpExhibitApi();
  const telemetry = new TelemetryQueue("/api/logs");
  const kiosk = new Kiosk(root, config, api, telemetry);
  try {
    await kiosk.start();
  } catch (error) {
    kiosk.stop();
    retryView(root, error, () => void boot(root, search));
  }
}

const appRoot = typeof document !== "undefined" ? document.getElementById("app") : null;
if (appRoot instanceof HTMLElement) {
  void boot(appRoot);
}
