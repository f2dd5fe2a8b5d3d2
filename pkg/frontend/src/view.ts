/** Scene geometry and canvas drawing for the trace viewer.
 *
 * Scene assembly is pure (viewport plus server data in, pixel geometry
 * out) so the interaction tests can run without a canvas; only
 * renderScene touches the 2D context.
 */
import type { Meta, WindowResponse } from "./types.js";
import type { Interval } from "./msf.js";

export interface Viewport {
  startS: number;
  lenS: number;
}

export interface LaneGeometry {
  label: string;
  /** One x per display bin plus the min/max envelope in lane-local [0, 1]. */
  xs: number[];
  lo: number[];
  hi: number[];
}

export interface Scene {
  widthPx: number;
  lanes: LaneGeometry[];
  /** Shaded marking spans, clipped to the viewport, in px. */
  shading: { x0: number; x1: number }[];
  /** Vertical trial boundary lines inside the viewport, in px. */
  trialLines: number[];
  /** Whole-session strip: trial spans and the viewport, as [0, 1] fractions. */
  overview: {
    trials: { f0: number; f1: number }[];
    marks: { f0: number; f1: number }[];
    view: { f0: number; f1: number };
  };
  dragPreview: { x0: number; x1: number } | null;
}

export function timeToX(t: number, vp: Viewport, widthPx: number): number {
  return ((t - vp.startS) / vp.lenS) * widthPx;
}

export function xToTime(x: number, vp: Viewport, widthPx: number): number {
  return vp.startS + (x / widthPx) * vp.lenS;
}

export function clampViewport(vp: Viewport, totalS: number): Viewport {
  const lenS = Math.min(Math.max(vp.lenS, 0.25), totalS);
  const startS = Math.min(Math.max(vp.startS, 0), totalS - lenS);
  return { startS, lenS };
}

function clippedSpans(spans: readonly Interval[], vp: Viewport,
                      widthPx: number): { x0: number; x1: number }[] {
  const out = [];
  const endS = vp.startS + vp.lenS;
  for (const [s, e] of spans) {
    if (e <= vp.startS || s >= endS) continue;
    out.push({
      x0: timeToX(Math.max(s, vp.startS), vp, widthPx),
      x1: timeToX(Math.min(e, endS), vp, widthPx),
    });
  }
  return out;
}

export function buildScene(meta: Meta, win: WindowResponse,
                           marksS: readonly Interval[], vp: Viewport,
                           widthPx: number,
                           dragS: Interval | null): Scene {
  const rate = meta.sample_rate;
  const totalS = meta.sample_count / rate;
  const winStartS = win.start / rate;
  const winLenS = win.length / rate;

  const lanes: LaneGeometry[] = win.channels.map((trace) => {
    const lo = trace.min;
    const hi = trace.max;
    let vMin = Infinity;
    let vMax = -Infinity;
    for (let i = 0; i < lo.length; i++) {
      vMin = Math.min(vMin, lo[i]!);
      vMax = Math.max(vMax, hi[i]!);
    }
    const span = vMax - vMin || 1;
    const xs = lo.map((_, i) =>
      timeToX(winStartS + ((i + 0.5) / lo.length) * winLenS, vp, widthPx));
    return {
      label: trace.label,
      xs,
      lo: lo.map((v) => (v - vMin) / span),
      hi: hi.map((v) => (v - vMin) / span),
    };
  });

  const boundariesS = meta.trial_bounds.flat().map((b) => b / rate);
  const endS = vp.startS + vp.lenS;
  const trialLines = boundariesS
    .filter((t) => t >= vp.startS && t <= endS)
    .map((t) => timeToX(t, vp, widthPx));

  let dragPreview = null;
  if (dragS) {
    const lo = Math.min(dragS[0], dragS[1]);
    const hi = Math.max(dragS[0], dragS[1]);
    if (hi > lo) {
      const [span] = clippedSpans([[lo, hi]], vp, widthPx);
      dragPreview = span ?? null;
    }
  }

  return {
    widthPx,
    lanes,
    shading: clippedSpans(marksS, vp, widthPx),
    trialLines,
    overview: {
      trials: meta.trial_bounds.map(([s, e]) =>
        ({ f0: s / rate / totalS, f1: e / rate / totalS })),
      marks: marksS.map(([s, e]) => ({ f0: s / totalS, f1: e / totalS })),
      view: { f0: vp.startS / totalS, f1: endS / totalS },
    },
    dragPreview,
  };
}

const SHADE = "rgba(214, 69, 65, 0.25)";
const DRAG = "rgba(214, 69, 65, 0.45)";
const TRIAL = "#7f8c8d";
const TRACE = "#2c3e50";
const EOG_TRACE = "#1a6fb0";

export function renderScene(ctx: CanvasRenderingContext2D, scene: Scene,
                            heightPx: number, eogLabel: string | null): void {
  const { widthPx, lanes } = scene;
  const overviewH = 26;
  const plotH = heightPx - overviewH - 8;
  ctx.clearRect(0, 0, widthPx, heightPx);

  for (const rect of scene.shading) {
    ctx.fillStyle = SHADE;
    ctx.fillRect(rect.x0, 0, rect.x1 - rect.x0, plotH);
  }
  if (scene.dragPreview) {
    ctx.fillStyle = DRAG;
    ctx.fillRect(scene.dragPreview.x0, 0,
                 scene.dragPreview.x1 - scene.dragPreview.x0, plotH);
  }

  ctx.strokeStyle = TRIAL;
  ctx.setLineDash([4, 4]);
  for (const x of scene.trialLines) {
    ctx.beginPath();
    ctx.moveTo(x, 0);
    ctx.lineTo(x, plotH);
    ctx.stroke();
  }
  ctx.setLineDash([]);

  const laneH = lanes.length ? plotH / lanes.length : plotH;
  lanes.forEach((lane, li) => {
    const top = li * laneH + 4;
    const innerH = laneH - 8;
    const y = (v: number) => top + (1 - v) * innerH;
    ctx.strokeStyle = lane.label === eogLabel ? EOG_TRACE : TRACE;
    ctx.lineWidth = 1;
    ctx.beginPath();
    for (let i = 0; i < lane.xs.length; i++) {
      // envelope as a vertical tick per bin; reads as a line when dense
      ctx.moveTo(lane.xs[i]!, y(lane.lo[i]!));
      ctx.lineTo(lane.xs[i]!, y(Math.max(lane.hi[i]!, lane.lo[i]! + 0.004)));
    }
    ctx.stroke();
    ctx.fillStyle = TRACE;
    ctx.font = "11px sans-serif";
    ctx.fillText(lane.label, 4, top + 11);
  });

  const oy = heightPx - overviewH;
  ctx.fillStyle = "#ecf0f1";
  ctx.fillRect(0, oy, widthPx, overviewH);
  for (const t of scene.overview.trials) {
    ctx.fillStyle = "#d5dbdb";
    ctx.fillRect(t.f0 * widthPx, oy, Math.max((t.f1 - t.f0) * widthPx, 1), overviewH);
  }
  for (const m of scene.overview.marks) {
    ctx.fillStyle = SHADE;
    ctx.fillRect(m.f0 * widthPx, oy, Math.max((m.f1 - m.f0) * widthPx, 1), overviewH);
  }
  const v = scene.overview.view;
  ctx.strokeStyle = "#2c3e50";
  ctx.strokeRect(v.f0 * widthPx, oy + 1, Math.max((v.f1 - v.f0) * widthPx, 2),
                 overviewH - 2);
}
