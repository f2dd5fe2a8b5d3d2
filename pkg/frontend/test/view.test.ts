import { describe, expect, it } from "vitest";

import { buildScene, clampViewport, timeToX, xToTime } from "../src/view.js";
import type { Viewport } from "../src/view.js";
import { makeMeta } from "./mockserver.js";
import type { WindowResponse } from "../src/types.js";

const VP: Viewport = { startS: 10, lenS: 20 };
const W = 1000;

function windowFor(vp: Viewport, rate = 250, bins = 50): WindowResponse {
  const start = Math.floor(vp.startS * rate);
  const length = Math.floor(vp.lenS * rate);
  const vals = Array.from({ length: bins }, (_, i) => Math.sin(i / 5));
  return {
    start,
    length,
    bins,
    channels: [
      { label: "EOG", min: vals, max: vals.map((v) => v + 0.2) },
      { label: "Fp1", min: vals, max: vals.map((v) => v + 0.2) },
    ],
  };
}

describe("coordinate mapping", () => {
  it("is linear with the window edges at the plot edges", () => {
    expect(timeToX(10, VP, W)).toBe(0);
    expect(timeToX(30, VP, W)).toBe(W);
    expect(timeToX(20, VP, W)).toBe(W / 2);
  });

  it("round-trips px to time", () => {
    for (const x of [0, 137, 499.5, 1000]) {
      expect(timeToX(xToTime(x, VP, W), VP, W)).toBeCloseTo(x, 9);
    }
  });

  it("clamps the viewport to the session", () => {
    expect(clampViewport({ startS: -5, lenS: 20 }, 120))
      .toEqual({ startS: 0, lenS: 20 });
    expect(clampViewport({ startS: 115, lenS: 20 }, 120))
      .toEqual({ startS: 100, lenS: 20 });
    expect(clampViewport({ startS: 0, lenS: 500 }, 120))
      .toEqual({ startS: 0, lenS: 120 });
  });
});

describe("buildScene", () => {
  const meta = makeMeta();

  it("shades nothing for an empty marking", () => {
    const scene = buildScene(meta, windowFor(VP), [], VP, W, null);
    expect(scene.shading).toEqual([]);
  });

  it("clips a mark spanning the window edge", () => {
    const scene = buildScene(meta, windowFor(VP), [[5, 15]], VP, W, null);
    expect(scene.shading).toEqual([{ x0: 0, x1: timeToX(15, VP, W) }]);
  });

  it("skips marks entirely outside the window", () => {
    const scene = buildScene(meta, windowFor(VP), [[40, 50]], VP, W, null);
    expect(scene.shading).toEqual([]);
  });

  it("shows one overview span per trial", () => {
    const scene = buildScene(meta, windowFor(VP), [], VP, W, null);
    expect(scene.overview.trials).toHaveLength(5);
    const first = scene.overview.trials[0]!;
    expect(first.f0).toBeCloseTo(500 / 250 / 120, 12);
    expect(first.f1).toBeCloseTo(5500 / 250 / 120, 12);
  });

  it("draws trial boundary lines only inside the window", () => {
    // of the fixture's bounds only 5500 and 6000 (22 s, 24 s) fall in [10, 30]
    const scene = buildScene(meta, windowFor(VP), [], VP, W, null);
    expect(scene.trialLines).toHaveLength(2);
    expect(scene.trialLines).toEqual(
      [timeToX(22, VP, W), timeToX(24, VP, W)]);
  });

  it("normalizes each lane to its own range", () => {
    const scene = buildScene(meta, windowFor(VP), [], VP, W, null);
    for (const lane of scene.lanes) {
      expect(Math.min(...lane.lo)).toBeCloseTo(0, 12);
      expect(Math.max(...lane.hi)).toBeCloseTo(1, 12);
      expect(lane.hi.every((v, i) => v >= lane.lo[i]!)).toBe(true);
    }
  });

  it("carries a clipped drag preview", () => {
    const scene = buildScene(meta, windowFor(VP), [], VP, W, [28, 35]);
    expect(scene.dragPreview).toEqual({ x0: timeToX(28, VP, W), x1: W });
    const reversed = buildScene(meta, windowFor(VP), [], VP, W, [18, 12]);
    expect(reversed.dragPreview).toEqual(
      { x0: timeToX(12, VP, W), x1: timeToX(18, VP, W) });
  });
});
