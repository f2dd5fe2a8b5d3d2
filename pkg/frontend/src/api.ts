import type { Meta, MsfState, SaveResult, WindowResponse } from "./types.js";
import type { Interval } from "./msf.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

async function fail(response: Response, what: string): Promise<never> {
  let detail = `${response.status}`;
  try {
    const body = await response.json();
    if (body && typeof body.detail === "string") detail = body.detail;
  } catch {
    // non-JSON error body, keep the status code
  }
  throw new Error(`${what}: ${detail}`);
}

/** Thin client over the annotation endpoints. Conflicts on save are an
 * expected outcome and come back as a value, not an exception. */
export class ApiClient {
  constructor(private readonly base: string = "",
              private readonly fetchFn: FetchLike = (u, i) => fetch(u, i)) {}

  async meta(): Promise<Meta> {
    const r = await this.fetchFn(`${this.base}/meta`);
    if (!r.ok) return fail(r, "loading metadata");
    return r.json();
  }

  async window(start: number, length: number, channels?: string[],
               bins?: number): Promise<WindowResponse> {
    const q = new URLSearchParams({ start: String(start), length: String(length) });
    if (channels && channels.length) q.set("channels", channels.join(","));
    if (bins !== undefined) q.set("bins", String(bins));
    const r = await this.fetchFn(`${this.base}/window?${q}`);
    if (!r.ok) return fail(r, "loading signal window");
    return r.json();
  }

  async loadMsf(): Promise<MsfState> {
    const r = await this.fetchFn(`${this.base}/msf`);
    if (!r.ok) return fail(r, "loading marks");
    return r.json();
  }

  async saveMsf(intervals: readonly Interval[], length: number,
                sampleRate: number, revision: number): Promise<SaveResult> {
    const r = await this.fetchFn(`${this.base}/msf`, {
      method: "PUT",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({
        length,
        sample_rate: sampleRate,
        intervals: intervals.map(([s, e]) => [s, e]),
        revision,
      }),
    });
    if (r.status === 409) {
      const body = await r.json();
      return { kind: "conflict", revision: body.revision, detail: body.detail };
    }
    if (!r.ok) {
      let detail = `${r.status}`;
      try {
        detail = (await r.json()).detail ?? detail;
      } catch {
        // keep the status code
      }
      return { kind: "rejected", detail };
    }
    return { kind: "saved", state: await r.json() };
  }
}
