/** Controller for the annotation editor.
 *
 * All state lives here; the DOM shell implements UiPort and forwards raw
 * pointer positions. Marks are edited locally in seconds and only the
 * save path talks sample indices with the server, quoting the revision it
 * loaded so a concurrent writer turns into a conflict dialog instead of a
 * lost update.
 */
import { ApiClient } from "./api.js";
import { applyDrag, addInterval, normalize, toSamples, toSeconds } from "./msf.js";
import type { Interval } from "./msf.js";
import { buildScene, clampViewport, xToTime } from "./view.js";
import type { Scene, Viewport } from "./view.js";
import type { Meta, WindowResponse } from "./types.js";

export interface AppStatus {
  revision: number;
  dirty: boolean;
  intervalCount: number;
  markedSeconds: number;
}

export interface UiPort {
  render(scene: Scene): void;
  setStatus(status: AppStatus): void;
  showConflict(detail: string): void;
  hideConflict(): void;
  /** Fetch-failure banner; null clears it. */
  showError(message: string | null): void;
}

const INITIAL_WINDOW_S = 20;

export class AnnotationApp {
  meta: Meta | null = null;
  marksS: Interval[] = [];
  revision = 0;
  dirty = false;
  vp: Viewport = { startS: 0, lenS: INITIAL_WINDOW_S };
  visibleChannels: string[] = [];
  plotWidthPx = 800;

  private windowData: WindowResponse | null = null;
  private dragAnchorS: number | null = null;
  private dragCursorS: number | null = null;
  private conflictPending = false;

  constructor(private readonly api: ApiClient, private readonly ui: UiPort) {}

  get totalS(): number {
    return this.meta ? this.meta.sample_count / this.meta.sample_rate : 0;
  }

  async start(): Promise<void> {
    try {
      this.meta = await this.api.meta();
      const msf = await this.api.loadMsf();
      this.marksS = toSeconds(msf.intervals, this.meta.sample_rate);
      this.revision = msf.revision;
      this.dirty = false;
      this.visibleChannels = this.meta.suggested_channels.length
        ? [...this.meta.suggested_channels]
        : [...this.meta.channel_labels];
      this.vp = clampViewport({ startS: 0, lenS: INITIAL_WINDOW_S }, this.totalS);
      this.ui.showError(null);
    } catch (err) {
      this.ui.showError(`could not load session: ${(err as Error).message}`);
      return;
    }
    await this.refresh();
  }

  /** Refetch the display window; marks and edits survive a failure. */
  async refresh(): Promise<void> {
    if (!this.meta) return;
    const rate = this.meta.sample_rate;
    const start = Math.max(0, Math.floor(this.vp.startS * rate));
    const length = Math.min(Math.ceil(this.vp.lenS * rate),
                            this.meta.sample_count - start);
    try {
      this.windowData = await this.api.window(start, length, this.visibleChannels);
      this.ui.showError(null);
    } catch (err) {
      this.ui.showError(`window fetch failed, showing stale traces: ` +
                        `${(err as Error).message}`);
    }
    this.renderNow();
  }

  renderNow(): void {
    if (!this.meta || !this.windowData) return;
    const drag: Interval | null =
      this.dragAnchorS !== null && this.dragCursorS !== null
        ? [this.dragAnchorS, this.dragCursorS]
        : null;
    this.ui.render(buildScene(this.meta, this.windowData, this.marksS, this.vp,
                              this.plotWidthPx, drag));
    this.ui.setStatus({
      revision: this.revision,
      dirty: this.dirty,
      intervalCount: this.marksS.length,
      markedSeconds: this.marksS.reduce((acc, [s, e]) => acc + (e - s), 0),
    });
  }

  private clampTime(t: number): number {
    return Math.min(Math.max(t, 0), this.totalS);
  }

  pointerDown(xPx: number): void {
    if (!this.meta) return;
    this.dragAnchorS = this.clampTime(xToTime(xPx, this.vp, this.plotWidthPx));
    this.dragCursorS = this.dragAnchorS;
  }

  pointerMove(xPx: number): void {
    if (this.dragAnchorS === null) return;
    this.dragCursorS = this.clampTime(xToTime(xPx, this.vp, this.plotWidthPx));
    this.renderNow();
  }

  pointerUp(xPx: number): void {
    if (this.dragAnchorS === null) return;
    const a = this.dragAnchorS;
    const b = this.clampTime(xToTime(xPx, this.vp, this.plotWidthPx));
    this.dragAnchorS = null;
    this.dragCursorS = null;
    const next = applyDrag(this.marksS, [a, b]);
    if (next.length !== this.marksS.length ||
        next.some((iv, i) => iv[0] !== this.marksS[i]![0] || iv[1] !== this.marksS[i]![1])) {
      this.marksS = next;
      this.dirty = true;
    }
    this.renderNow();
  }

  async pan(fractionOfWindow: number): Promise<void> {
    this.vp = clampViewport(
      { startS: this.vp.startS + fractionOfWindow * this.vp.lenS, lenS: this.vp.lenS },
      this.totalS);
    await this.refresh();
  }

  async zoom(factor: number): Promise<void> {
    const center = this.vp.startS + this.vp.lenS / 2;
    const lenS = this.vp.lenS * factor;
    this.vp = clampViewport({ startS: center - lenS / 2, lenS }, this.totalS);
    await this.refresh();
  }

  /** Jump so the window is centered at a session fraction (overview click). */
  async goTo(fraction: number): Promise<void> {
    const center = fraction * this.totalS;
    this.vp = clampViewport(
      { startS: center - this.vp.lenS / 2, lenS: this.vp.lenS }, this.totalS);
    await this.refresh();
  }

  async setChannels(labels: string[]): Promise<void> {
    if (!this.meta) return;
    const eog = this.meta.eog_index !== null
      ? this.meta.channel_labels[this.meta.eog_index]! : null;
    const picked = labels.filter((l) => this.meta!.channel_labels.includes(l));
    // the EOG trace is the reference being marked against; always shown
    if (eog && !picked.includes(eog)) picked.unshift(eog);
    this.visibleChannels = picked;
    await this.refresh();
  }

  async save(): Promise<void> {
    if (!this.meta) return;
    const rate = this.meta.sample_rate;
    const result = await this.api
      .saveMsf(toSamples(this.marksS, rate), this.meta.sample_count, rate,
               this.revision)
      .catch((err): { kind: "rejected"; detail: string } =>
        ({ kind: "rejected", detail: (err as Error).message }));
    if (result.kind === "saved") {
      this.marksS = toSeconds(result.state.intervals, rate);
      this.revision = result.state.revision;
      this.dirty = false;
      this.conflictPending = false;
      this.ui.hideConflict();
      this.ui.showError(null);
    } else if (result.kind === "conflict") {
      this.conflictPending = true;
      this.ui.showConflict(result.detail);
    } else {
      // network or validation failure: edits stay, dirty flag stays
      this.ui.showError(`save failed: ${result.detail}`);
    }
    this.renderNow();
  }

  get hasOpenConflict(): boolean {
    return this.conflictPending;
  }

  /** Conflict resolution: take the server's marks, or union ours into
   * them. Either way we adopt the server's revision; merge leaves the
   * result dirty so the analyst re-saves it under the new revision. */
  async resolveConflict(choice: "theirs" | "merge"): Promise<void> {
    if (!this.meta) return;
    let server;
    try {
      server = await this.api.loadMsf();
    } catch (err) {
      this.ui.showError(`could not fetch current marks: ${(err as Error).message}`);
      return;
    }
    const serverMarks = toSeconds(server.intervals, this.meta.sample_rate);
    if (choice === "theirs") {
      this.marksS = serverMarks;
      this.dirty = false;
    } else {
      this.marksS = this.marksS.reduce((acc, iv) => addInterval(acc, iv),
                                       normalize(serverMarks));
      this.dirty = true;
    }
    this.revision = server.revision;
    this.conflictPending = false;
    this.ui.hideConflict();
    this.renderNow();
  }
}
