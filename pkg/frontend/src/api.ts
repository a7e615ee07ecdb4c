import { DatasetJson, SceneJson } from "./types.js";

// The kiosk never computes geometry itself; every scene comes from the
// service and is rendered as delivered (interpolation aside).
export interface ExhibitApi {
  dataset(): Promise<DatasetJson>;
  scene(step: number, highlight: number): Promise<SceneJson>;
}

export class HttpExhibitApi implements ExhibitApi {
  constructor(
    private readonly base: string = "",
    private readonly fetchFn: typeof fetch = fetch.bind(globalThis),
  ) {}

  async dataset(): Promise<DatasetJson> {
    return this.getJson(`${this.base}/api/dataset`);
  }

  async scene(step: number, highlight: number): Promise<SceneJson> {
    return this.getJson(`${this.base}/api/scene?step=${step}&highlight=${highlight}`);
  }

  private async getJson<T>(url: string): Promise<T> {
    const resp = await this.fetchFn(url);
    if (!resp.ok) {
      throw new Error(`GET ${url} failed: ${resp.status}`);
    }
    return (await resp.json()) as T;
  }
}
