// ViewState and its reducer. The state is a pure function of the frame
// sequence: replaying a recorded sequence reproduces the same final state,
// which is what the replay feature and its tests rely on.

import type {
  AckPayload,
  ClassificationPayload,
  ErrorPayload,
  Frame,
  MapPayload,
  Pose,
  RobotState,
  SensorPayload,
  StatusPayload,
  WallModelPayload,
} from "./types.js";

export type ConnectionStatus = "connecting" | "connected" | "disconnected";

export interface OverlayToggles {
  points: boolean;
  lines: boolean;
  corners: boolean;
  gasHeat: boolean;
}

export interface Viewport {
  panX: number;
  panY: number;
  zoom: number;
}

export interface EventLogEntry {
  t: number;
  text: string;
  level: "info" | "error";
}

export interface GasSample {
  x: number;
  y: number;
  value: number;
}

export interface ViewState {
  connection: ConnectionStatus;
  lastSeq: number;
  staleDropped: number;
  robotState: RobotState;
  pose: Pose | null;
  sensors: SensorPayload | null;
  classification: ClassificationPayload | null;
  walls: WallModelPayload | null;
  points: [number, number][];
  gas: GasSample[];
  events: EventLogEntry[];
  overlays: OverlayToggles;
  viewport: Viewport;
  watchdogTimeoutMs: number;
}

export const MAX_EVENT_LOG = 200;

export function initialState(): ViewState {
  return {
    connection: "disconnected",
    lastSeq: -1,
    staleDropped: 0,
    robotState: "idle",
    pose: null,
    sensors: null,
    classification: null,
    walls: null,
    points: [],
    gas: [],
    events: [],
    overlays: { points: true, lines: true, corners: true, gasHeat: false },
    viewport: { panX: 0, panY: 0, zoom: 1 },
    watchdogTimeoutMs: 2000,
  };
}

function pushEvent(events: EventLogEntry[], entry: EventLogEntry): EventLogEntry[] {
  const next = events.concat(entry);
  return next.length > MAX_EVENT_LOG ? next.slice(next.length - MAX_EVENT_LOG) : next;
}

/** Apply one frame; rendered seq never decreases (stale frames are dropped). */
export function applyFrame(state: ViewState, frame: Frame): ViewState {
  if (frame.seq <= state.lastSeq) {
    return { ...state, staleDropped: state.staleDropped + 1 };
  }
  const next: ViewState = { ...state, lastSeq: frame.seq };
  switch (frame.type) {
    case "sensor": {
      const p = frame.payload as unknown as SensorPayload;
      next.sensors = p;
      next.pose = p.pose;
      next.gas = state.gas.concat({ x: p.pose.x, y: p.pose.y, value: p.sensors.co2 });
      break;
    }
    case "map": {
      const p = frame.payload as unknown as MapPayload;
      next.points = state.points.concat(p.points);
      break;
    }
    case "status": {
      const p = frame.payload as unknown as StatusPayload;
      next.robotState = p.robot_state;
      if (p.pose) next.pose = p.pose;
      if (p.watchdog_timeout_ms) next.watchdogTimeoutMs = p.watchdog_timeout_ms;
      if (p.event) {
        next.events = pushEvent(state.events, {
          t: frame.t,
          text: `event: ${p.event.kind} ${JSON.stringify(p.event.detail)}`,
          level: "info",
        });
      }
      break;
    }
    case "wall_model": {
      next.walls = frame.payload as unknown as WallModelPayload;
      next.events = pushEvent(state.events, {
        t: frame.t,
        text: `wall model: ${next.walls.corners.length} corners`,
        level: "info",
      });
      break;
    }
    case "classification": {
      next.classification = frame.payload as unknown as ClassificationPayload;
      break;
    }
    case "ack": {
      const p = frame.payload as unknown as AckPayload;
      next.events = pushEvent(state.events, {
        t: frame.t,
        text: `ack: ${p.command}${p.ok ? "" : " (rejected)"}${p.detail ? " - " + p.detail : ""}`,
        level: p.ok ? "info" : "error",
      });
      break;
    }
    case "error": {
      const p = frame.payload as unknown as ErrorPayload;
      next.events = pushEvent(state.events, {
        t: frame.t,
        text: `error: ${p.code}${p.detail ? " - " + p.detail : ""}`,
        level: "error",
      });
      break;
    }
  }
  return next;
}

export function setConnection(state: ViewState, connection: ConnectionStatus): ViewState {
  if (state.connection === connection) return state;
  return {
    ...state,
    connection,
    events: pushEvent(state.events, {
      t: Date.now(),
      text: `connection: ${connection}`,
      level: connection === "disconnected" ? "error" : "info",
    }),
  };
}

export interface RenderModel {
  points: [number, number][];
  gas: GasSample[];
  segments: [number, number, number, number][]; // wall lines, corner to corner
  corners: [number, number][];
  pose: Pose | null;
}

/** What the canvas will draw, after overlay toggles. */
export function renderModel(state: ViewState): RenderModel {
  const segments: [number, number, number, number][] = [];
  if (state.overlays.lines && state.walls) {
    const ring = state.walls.corners;
    for (let i = 0; i < ring.length; i++) {
      const [x0, y0] = ring[i];
      const [x1, y1] = ring[(i + 1) % ring.length];
      segments.push([x0, y0, x1, y1]);
    }
  }
  return {
    points: state.overlays.points ? state.points : [],
    gas: state.overlays.gasHeat ? state.gas : [],
    segments,
    corners: state.overlays.corners && state.walls ? state.walls.corners : [],
    pose: state.pose,
  };
}

/** Fold a recorded frame sequence into a final state (replay). */
export function replayFrames(frames: Frame[], start?: ViewState): ViewState {
  let state = start ?? initialState();
  for (const f of frames) {
    state = applyFrame(state, f);
  }
  return state;
}
