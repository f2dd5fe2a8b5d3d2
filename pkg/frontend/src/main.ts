/** Browser entry point: binds the DOM shell to the controller. */
import { AnnotationApp } from "./app.js";
import type { AppStatus, UiPort } from "./app.js";
import { ApiClient } from "./api.js";
import { renderScene } from "./view.js";
import type { Scene } from "./view.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

const canvas = el<HTMLCanvasElement>("plot");
const statusEl = el<HTMLSpanElement>("status");
const errorEl = el<HTMLDivElement>("error-banner");
const conflictEl = el<HTMLDivElement>("conflict-dialog");
const conflictDetailEl = el<HTMLParagraphElement>("conflict-detail");
const channelsEl = el<HTMLDivElement>("channels");

let lastScene: Scene | null = null;

function paint(): void {
  if (!lastScene) return;
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const dpr = window.devicePixelRatio || 1;
  canvas.width = Math.floor(canvas.clientWidth * dpr);
  canvas.height = Math.floor(canvas.clientHeight * dpr);
  ctx.setTransform(dpr, 0, 0, dpr, 0, 0);
  const eog = app.meta && app.meta.eog_index !== null
    ? app.meta.channel_labels[app.meta.eog_index] ?? null : null;
  renderScene(ctx, lastScene, canvas.clientHeight, eog);
}

const ui: UiPort = {
  render(scene: Scene): void {
    lastScene = scene;
    paint();
  },
  setStatus(s: AppStatus): void {
    const marked = s.markedSeconds.toFixed(1);
    statusEl.textContent =
      `${s.intervalCount} excerpt${s.intervalCount === 1 ? "" : "s"}, ` +
      `${marked} s marked, rev ${s.revision}` + (s.dirty ? " (unsaved)" : "");
    statusEl.classList.toggle("dirty", s.dirty);
  },
  showConflict(detail: string): void {
    conflictDetailEl.textContent = detail;
    conflictEl.classList.remove("hidden");
  },
  hideConflict(): void {
    conflictEl.classList.add("hidden");
  },
  showError(message: string | null): void {
    errorEl.textContent = message ?? "";
    errorEl.classList.toggle("hidden", message === null);
  },
};

const app = new AnnotationApp(new ApiClient(""), ui);

function plotX(ev: PointerEvent): number {
  return ev.clientX - canvas.getBoundingClientRect().left;
}

canvas.addEventListener("pointerdown", (ev) => {
  const overviewTop = canvas.clientHeight - 26;
  if (ev.clientY - canvas.getBoundingClientRect().top >= overviewTop) {
    void app.goTo(plotX(ev) / canvas.clientWidth);
    return;
  }
  canvas.setPointerCapture(ev.pointerId);
  app.plotWidthPx = canvas.clientWidth;
  app.pointerDown(plotX(ev));
});
canvas.addEventListener("pointermove", (ev) => app.pointerMove(plotX(ev)));
canvas.addEventListener("pointerup", (ev) => app.pointerUp(plotX(ev)));

el<HTMLButtonElement>("pan-left").addEventListener("click", () => void app.pan(-0.5));
el<HTMLButtonElement>("pan-right").addEventListener("click", () => void app.pan(0.5));
el<HTMLButtonElement>("zoom-in").addEventListener("click", () => void app.zoom(0.5));
el<HTMLButtonElement>("zoom-out").addEventListener("click", () => void app.zoom(2));
el<HTMLButtonElement>("save").addEventListener("click", () => void app.save());
el<HTMLButtonElement>("conflict-theirs").addEventListener(
  "click", () => void app.resolveConflict("theirs"));
el<HTMLButtonElement>("conflict-merge").addEventListener(
  "click", () => void app.resolveConflict("merge"));

window.addEventListener("resize", () => {
  app.plotWidthPx = canvas.clientWidth;
  app.renderNow();
});
window.addEventListener("beforeunload", (ev) => {
  if (app.dirty) ev.preventDefault();
});

function buildChannelPicker(): void {
  if (!app.meta) return;
  channelsEl.replaceChildren();
  for (const label of app.meta.channel_labels) {
    if (app.meta.trigger_index !== null &&
        label === app.meta.channel_labels[app.meta.trigger_index]) continue;
    const box = document.createElement("label");
    const input = document.createElement("input");
    input.type = "checkbox";
    input.value = label;
    input.checked = app.visibleChannels.includes(label);
    input.addEventListener("change", () => {
      const picked = [...channelsEl.querySelectorAll<HTMLInputElement>("input")]
        .filter((i) => i.checked)
        .map((i) => i.value);
      void app.setChannels(picked);
    });
    box.append(input, document.createTextNode(label));
    channelsEl.append(box);
  }
}

void (async () => {
  app.plotWidthPx = canvas.clientWidth || 800;
  await app.start();
  buildChannelPicker();
})();
