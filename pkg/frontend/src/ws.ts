// Socket client: subscribes to the frame stream, sends commands, pings at
// half the watchdog timeout, and reconnects with backoff. Commands are never
// sent while disconnected.

import type { Command, CommandKind, Frame } from "./types.js";
import { decodeFrame } from "./types.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: string }) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
  onerror: ((ev?: unknown) => void) | null;
}

export interface ConsoleClientOptions {
  url: string;
  watchdogMs?: number;
  onFrame?: (frame: Frame) => void;
  onConnection?: (status: "connecting" | "connected" | "disconnected") => void;
  socketFactory?: (url: string) => SocketLike;
  minBackoffMs?: number;
  maxBackoffMs?: number;
}

export class ConsoleClient {
  private opts: Required<Pick<ConsoleClientOptions, "url">> & ConsoleClientOptions;
  private socket: SocketLike | null = null;
  private pingTimer: ReturnType<typeof setInterval> | null = null;
  private reconnectTimer: ReturnType<typeof setTimeout> | null = null;
  private backoffMs: number;
  private closed = false;
  private lastFrameAt = 0;
  connected = false;

  constructor(opts: ConsoleClientOptions) {
    this.opts = opts;
    this.backoffMs = opts.minBackoffMs ?? 500;
  }

  connect(): void {
    this.closed = false;
    this.opts.onConnection?.("connecting");
    const factory =
      this.opts.socketFactory ?? ((url: string) => new WebSocket(url) as unknown as SocketLike);
    const sock = factory(this.opts.url);
    this.socket = sock;
    sock.onopen = () => {
      this.connected = true;
      this.backoffMs = this.opts.minBackoffMs ?? 500;
      this.lastFrameAt = Date.now();
      this.opts.onConnection?.("connected");
      this.startPing();
    };
    sock.onmessage = (ev) => {
      this.lastFrameAt = Date.now();
      const frame = decodeFrame(ev.data);
      if (frame) this.opts.onFrame?.(frame);
    };
    sock.onclose = () => this.handleDrop();
    sock.onerror = () => {
      // the close handler does the bookkeeping; some sockets fire both
    };
  }

  private handleDrop(): void {
    this.connected = false;
    this.stopPing();
    this.socket = null;
    this.opts.onConnection?.("disconnected");
    if (this.closed) return;
    const max = this.opts.maxBackoffMs ?? 5000;
    this.reconnectTimer = setTimeout(() => this.connect(), this.backoffMs);
    this.backoffMs = Math.min(this.backoffMs * 1.6, max);
  }

  private startPing(): void {
    this.stopPing();
    const watchdog = this.opts.watchdogMs ?? 2000;
    this.pingTimer = setInterval(() => {
      // Server heartbeats arrive well inside a watchdog period; a stream
      // that has gone silent that long is dead even without a close event.
      if (this.connected && Date.now() - this.lastFrameAt > watchdog) {
        this.socket?.close();
        this.handleDrop();
        return;
      }
      this.sendCommand("ping");
    }, watchdog / 2);
  }

  private stopPing(): void {
    if (this.pingTimer !== null) {
      clearInterval(this.pingTimer);
      this.pingTimer = null;
    }
  }

  /** Send a command; returns false (and sends nothing) when disconnected. */
  sendCommand(kind: CommandKind, args?: Record<string, unknown>): boolean {
    if (!this.connected || this.socket === null) return false;
    const cmd: Command = args ? { kind, args } : { kind };
    this.socket.send(JSON.stringify(cmd));
    return true;
  }

  close(): void {
    this.closed = true;
    this.stopPing();
    if (this.reconnectTimer !== null) clearTimeout(this.reconnectTimer);
    this.socket?.close();
    this.socket = null;
    this.connected = false;
  }
}
