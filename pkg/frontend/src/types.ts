// Telemetry wire schema v1 (see ../docs/wire-schema.md).

export type FrameType =
  | "sensor"
  | "map"
  | "status"
  | "wall_model"
  | "classification"
  | "ack"
  | "error";

export type RobotState = "idle" | "sweeping" | "homing" | "halted";

export interface Pose {
  x: number;
  y: number;
  heading: number;
}

export interface SensorReadings {
  voc: number;
  co2: number;
  smoke: number;
  temperature: number;
  humidity: number;
  battery: number;
}

export interface SensorPayload {
  pose_id: number;
  pose: Pose;
  sensors: SensorReadings;
}

export interface MapPayload {
  pose_id: number;
  points: [number, number][];
}

export interface MissionEvent {
  t: number;
  kind: string;
  detail: Record<string, unknown>;
}

export interface StatusPayload {
  robot_state: RobotState;
  pose?: Pose;
  sim_t?: number;
  mission?: { frames: number; points: number; events: number };
  watchdog_timeout_ms?: number;
  event?: MissionEvent;
}

export interface WallLine {
  orientation: "vertical" | "horizontal";
  a: number;
  b: number;
  support: number;
  extent: [number, number];
}

export interface WallModelPayload {
  corners: [number, number][];
  lines: WallLine[];
  wall_lengths: number[];
}

export interface ClassificationPayload {
  pose_id: number;
  score: number | null;
  label: "Good" | "Moderate" | "Poor";
  term_strengths: Record<string, number>;
}

export interface AckPayload {
  command: string;
  ok: boolean;
  detail?: string;
  url?: string;
}

export interface ErrorPayload {
  code: string;
  detail?: string;
}

export interface Frame {
  v: number;
  type: FrameType;
  seq: number;
  t: number;
  payload: Record<string, unknown>;
}

export type CommandKind =
  | "start"
  | "stop"
  | "home"
  | "set_plan"
  | "ping"
  | "download";

export interface Command {
  kind: CommandKind;
  args?: Record<string, unknown>;
}

const FRAME_TYPES: ReadonlySet<string> = new Set([
  "sensor", "map", "status", "wall_model", "classification", "ack", "error",
]);

/** Parse one wire document; returns null for anything malformed. */
export function decodeFrame(raw: string): Frame | null {
  let doc: unknown;
  try {
    doc = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof doc !== "object" || doc === null) return null;
  const d = doc as Record<string, unknown>;
  if (d.v !== 1) return null;
  if (typeof d.type !== "string" || !FRAME_TYPES.has(d.type)) return null;
  if (typeof d.seq !== "number" || typeof d.t !== "number") return null;
  if (typeof d.payload !== "object" || d.payload === null) return null;
  return {
    v: 1,
    type: d.type as FrameType,
    seq: d.seq,
    t: d.t,
    payload: d.payload as Record<string, unknown>,
  };
}
