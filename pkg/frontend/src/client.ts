/** HTTP client for the session API, plus the latest-wins scene fetcher
 * and the client-side action log. */

import type { ActionDoc, DatasetMetaDoc, PresetEntry, SceneDoc, SessionStateDoc } from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

async function raise(response: Response): Promise<never> {
  let detail = response.statusText;
  try {
    const body = (await response.json()) as { detail?: string };
    if (body.detail) detail = body.detail;
  } catch {
    // keep the status text
  }
  throw new ApiError(response.status, detail);
}

export interface SessionOptions {
  preset?: string;
  design?: unknown;
  central?: [string, number];
}

export class ApiClient {
  constructor(private readonly baseUrl: string) {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  async meta(): Promise<DatasetMetaDoc> {
    const response = await fetch(this.url("/dataset/meta"));
    if (!response.ok) await raise(response);
    return (await response.json()) as DatasetMetaDoc;
  }

  async presets(): Promise<PresetEntry[]> {
    const response = await fetch(this.url("/presets"));
    if (!response.ok) await raise(response);
    const doc = (await response.json()) as { presets: PresetEntry[] };
    return doc.presets;
  }

  async createSession(options: SessionOptions = {}): Promise<string> {
    const response = await fetch(this.url("/session"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(options),
    });
    if (!response.ok) await raise(response);
    const doc = (await response.json()) as { id: string };
    return doc.id;
  }

  async postAction(sessionId: string, action: ActionDoc): Promise<string[]> {
    const response = await fetch(this.url(`/session/${sessionId}/action`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(action),
    });
    if (!response.ok) await raise(response);
    const doc = (await response.json()) as { changed: string[] };
    return doc.changed;
  }

  /** Raw bytes-as-text, for byte-level replay comparison. */
  async sceneText(sessionId: string): Promise<string> {
    const response = await fetch(this.url(`/session/${sessionId}/scene`));
    if (!response.ok) await raise(response);
    return response.text();
  }

  async scene(sessionId: string): Promise<SceneDoc> {
    return JSON.parse(await this.sceneText(sessionId)) as SceneDoc;
  }

  async state(sessionId: string): Promise<SessionStateDoc> {
    const response = await fetch(this.url(`/session/${sessionId}/state`));
    if (!response.ok) await raise(response);
    return (await response.json()) as SessionStateDoc;
  }
}

export interface SceneSource {
  scene(sessionId: string): Promise<SceneDoc>;
}

/** At most one applied scene refresh at a time: responses that were
 * overtaken by a newer request are dropped, never applied out of order. */
export class SceneFetcher {
  private generation = 0;

  constructor(
    private readonly client: SceneSource,
    private readonly onScene: (scene: SceneDoc) => void
  ) {}

  async refresh(sessionId: string): Promise<boolean> {
    const ticket = ++this.generation;
    const scene = await this.client.scene(sessionId);
    if (ticket !== this.generation) return false; // a newer request won
    this.onScene(scene);
    return true;
  }
}

/** Every action the UI successfully dispatched, in order; replaying it
 * into a fresh session must reproduce the scene bytes. */
export class ActionLog {
  private readonly entries: ActionDoc[] = [];

  record(action: ActionDoc): void {
    this.entries.push(action);
  }

  get actions(): readonly ActionDoc[] {
    return this.entries;
  }

  async replay(client: ApiClient, options: SessionOptions = {}): Promise<string> {
    const sessionId = await client.createSession(options);
    for (const action of this.entries) {
      await client.postAction(sessionId, action);
    }
    return client.sceneText(sessionId);
  }
}
