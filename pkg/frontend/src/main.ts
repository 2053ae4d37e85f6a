// Operator console entry point: live map, sensor/classification panels,
// mission controls, event log, log download, and recorded-sequence replay.

import { downloadLog, saveAs } from "./download.js";
import { drawScene } from "./render.js";
import {
  applyFrame,
  initialState,
  replayFrames,
  setConnection,
  ViewState,
} from "./state.js";
import type { Frame } from "./types.js";
import { ConsoleClient } from "./ws.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const canvas = el<HTMLCanvasElement>("map");
const banner = el<HTMLDivElement>("banner");
const robotStateEl = el<HTMLSpanElement>("robot-state");
const sensorsEl = el<HTMLTableElement>("sensors");
const classEl = el<HTMLDivElement>("classification");
const eventsEl = el<HTMLUListElement>("events");
const controls = ["btn-start", "btn-stop", "btn-home", "btn-download"].map(
  (id) => el<HTMLButtonElement>(id),
);

const base = `${location.protocol}//${location.host}`;
const wsUrl = `${base.replace(/^http/, "ws")}/ws`;

let state: ViewState = initialState();

function redraw(): void {
  drawScene(canvas, state);
  banner.textContent = state.connection;
  banner.className = `banner ${state.connection}`;
  robotStateEl.textContent = state.robotState;
  for (const b of controls) {
    b.disabled = state.connection !== "connected";
  }
  if (state.sensors) {
    const s = state.sensors.sensors;
    sensorsEl.innerHTML = `
      <tr><td>VOC</td><td>${s.voc.toFixed(1)} ppb</td></tr>
      <tr><td>CO2</td><td>${s.co2.toFixed(1)} ppm</td></tr>
      <tr><td>Smoke</td><td>${s.smoke.toFixed(1)} ug/m3</td></tr>
      <tr><td>Temp</td><td>${s.temperature.toFixed(1)} C</td></tr>
      <tr><td>Humidity</td><td>${s.humidity.toFixed(1)} %</td></tr>
      <tr><td>Battery</td><td>${s.battery.toFixed(2)} V</td></tr>`;
  }
  if (state.classification) {
    const c = state.classification;
    const score = c.score === null ? "n/a" : c.score.toFixed(1);
    classEl.textContent = `${c.label} (score ${score})`;
    classEl.className = `classification ${c.label.toLowerCase()}`;
  }
  eventsEl.innerHTML = state.events
    .slice(-30)
    .reverse()
    .map((e) => `<li class="${e.level}">${e.text}</li>`)
    .join("");
}

const client = new ConsoleClient({
  url: wsUrl,
  watchdogMs: 2000,
  onFrame: (frame: Frame) => {
    state = applyFrame(state, frame);
    redraw();
  },
  onConnection: (status) => {
    state = setConnection(state, status);
    redraw();
  },
});

el<HTMLButtonElement>("btn-start").onclick = () => client.sendCommand("start");
el<HTMLButtonElement>("btn-stop").onclick = () => client.sendCommand("stop");
el<HTMLButtonElement>("btn-home").onclick = () => client.sendCommand("home");
el<HTMLButtonElement>("btn-download").onclick = async () => {
  try {
    saveAs(await downloadLog(base));
  } catch (err) {
    console.error(err);
  }
};

for (const key of ["points", "lines", "corners", "gasHeat"] as const) {
  const box = el<HTMLInputElement>(`toggle-${key}`);
  box.checked = state.overlays[key];
  box.onchange = () => {
    state = { ...state, overlays: { ...state.overlays, [key]: box.checked } };
    redraw();
  };
}

// Replay a recorded frame sequence (a JSON array of wire frames).
el<HTMLInputElement>("replay-file").onchange = async (ev) => {
  const input = ev.target as HTMLInputElement;
  const file = input.files?.[0];
  if (!file) return;
  const frames = JSON.parse(await file.text()) as Frame[];
  state = replayFrames(frames, {
    ...initialState(),
    connection: state.connection,
  });
  redraw();
};

// Pan with drag, zoom with the wheel.
let dragging = false;
let lastX = 0;
let lastY = 0;
canvas.onmousedown = (ev) => {
  dragging = true;
  lastX = ev.offsetX;
  lastY = ev.offsetY;
};
canvas.onmouseup = () => (dragging = false);
canvas.onmouseleave = () => (dragging = false);
canvas.onmousemove = (ev) => {
  if (!dragging) return;
  state = {
    ...state,
    viewport: {
      ...state.viewport,
      panX: state.viewport.panX + (ev.offsetX - lastX),
      panY: state.viewport.panY - (ev.offsetY - lastY),
    },
  };
  lastX = ev.offsetX;
  lastY = ev.offsetY;
  redraw();
};
canvas.onwheel = (ev) => {
  ev.preventDefault();
  const factor = ev.deltaY < 0 ? 1.1 : 1 / 1.1;
  state = {
    ...state,
    viewport: {
      ...state.viewport,
      zoom: Math.max(0.2, Math.min(10, state.viewport.zoom * factor)),
    },
  };
  redraw();
};

redraw();
client.connect();
