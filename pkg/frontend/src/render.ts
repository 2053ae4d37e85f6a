// Immediate-mode canvas renderer with a mm -> pixel transform. Colors follow
// the reference figures: raw points dark, regression lines blue, corners
// light blue.

import { renderModel, ViewState } from "./state.js";

const COLOR_BG = "#111418";
const COLOR_POINT = "#9aa5b1";
const COLOR_LINE = "#2196f3";     // blue wall lines
const COLOR_CORNER = "#81d4fa";   // light blue corner markers
const COLOR_ROBOT = "#ffb300";

interface Transform {
  scale: number;
  ox: number;
  oy: number;
  height: number;
}

function dataBounds(state: ViewState): [number, number, number, number] {
  const xs: number[] = [];
  const ys: number[] = [];
  for (const [x, y] of state.points) {
    xs.push(x);
    ys.push(y);
  }
  if (state.walls) {
    for (const [x, y] of state.walls.corners) {
      xs.push(x);
      ys.push(y);
    }
  }
  if (state.pose) {
    xs.push(state.pose.x);
    ys.push(state.pose.y);
  }
  if (xs.length === 0) return [0, 0, 4000, 3000];
  const pad = 200;
  return [
    Math.min(...xs) - pad,
    Math.min(...ys) - pad,
    Math.max(...xs) + pad,
    Math.max(...ys) + pad,
  ];
}

function fitTransform(state: ViewState, width: number, height: number): Transform {
  const [x0, y0, x1, y1] = dataBounds(state);
  const base = Math.min(width / (x1 - x0), height / (y1 - y0));
  const scale = base * state.viewport.zoom;
  return {
    scale,
    ox: -x0 * scale + state.viewport.panX,
    oy: -y0 * scale + state.viewport.panY,
    height,
  };
}

// y grows upward in room coordinates, downward on canvas
function toPx(t: Transform, x: number, y: number): [number, number] {
  return [x * t.scale + t.ox, t.height - (y * t.scale + t.oy)];
}

function gasColor(value: number, lo: number, hi: number): string {
  const f = hi > lo ? Math.max(0, Math.min(1, (value - lo) / (hi - lo))) : 0;
  const r = Math.round(60 + 195 * f);
  const g = Math.round(200 - 140 * f);
  return `rgba(${r},${g},80,0.8)`;
}

export function drawScene(canvas: HTMLCanvasElement, state: ViewState): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const { width, height } = canvas;
  const t = fitTransform(state, width, height);
  const model = renderModel(state);

  ctx.fillStyle = COLOR_BG;
  ctx.fillRect(0, 0, width, height);

  if (model.gas.length > 0) {
    let lo = Infinity;
    let hi = -Infinity;
    for (const g of model.gas) {
      lo = Math.min(lo, g.value);
      hi = Math.max(hi, g.value);
    }
    for (const g of model.gas) {
      const [px, py] = toPx(t, g.x, g.y);
      ctx.fillStyle = gasColor(g.value, lo, hi);
      ctx.beginPath();
      ctx.arc(px, py, 6, 0, 2 * Math.PI);
      ctx.fill();
    }
  }

  ctx.fillStyle = COLOR_POINT;
  for (const [x, y] of model.points) {
    const [px, py] = toPx(t, x, y);
    ctx.fillRect(px - 1, py - 1, 2, 2);
  }

  ctx.strokeStyle = COLOR_LINE;
  ctx.lineWidth = 2;
  for (const [x0, y0, x1, y1] of model.segments) {
    const [px0, py0] = toPx(t, x0, y0);
    const [px1, py1] = toPx(t, x1, y1);
    ctx.beginPath();
    ctx.moveTo(px0, py0);
    ctx.lineTo(px1, py1);
    ctx.stroke();
  }

  ctx.fillStyle = COLOR_CORNER;
  for (const [x, y] of model.corners) {
    const [px, py] = toPx(t, x, y);
    ctx.beginPath();
    ctx.arc(px, py, 5, 0, 2 * Math.PI);
    ctx.fill();
  }

  if (model.pose) {
    const [px, py] = toPx(t, model.pose.x, model.pose.y);
    const th = (-model.pose.heading * Math.PI) / 180; // canvas y is flipped
    ctx.fillStyle = COLOR_ROBOT;
    ctx.beginPath();
    ctx.moveTo(px + 10 * Math.cos(th), py + 10 * Math.sin(th));
    ctx.lineTo(px + 6 * Math.cos(th + 2.5), py + 6 * Math.sin(th + 2.5));
    ctx.lineTo(px + 6 * Math.cos(th - 2.5), py + 6 * Math.sin(th - 2.5));
    ctx.closePath();
    ctx.fill();
  }
}
