// Socket client behavior with a scripted fake socket.

import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { ConsoleClient, SocketLike } from "../src/ws.js";

class FakeSocket implements SocketLike {
  sent: string[] = [];
  closed = false;
  onopen: ((ev?: unknown) => void) | null = null;
  onmessage: ((ev: { data: string }) => void) | null = null;
  onclose: ((ev?: unknown) => void) | null = null;
  onerror: ((ev?: unknown) => void) | null = null;

  send(data: string): void {
    this.sent.push(data);
  }

  close(): void {
    this.closed = true;
  }
}

describe("ConsoleClient", () => {
  let sockets: FakeSocket[];
  let client: ConsoleClient;
  const frames: unknown[] = [];
  const statuses: string[] = [];

  beforeEach(() => {
    vi.useFakeTimers();
    sockets = [];
    frames.length = 0;
    statuses.length = 0;
    client = new ConsoleClient({
      url: "ws://test/ws",
      watchdogMs: 2000,
      minBackoffMs: 100,
      onFrame: (f) => frames.push(f),
      onConnection: (s) => statuses.push(s),
      socketFactory: () => {
        const s = new FakeSocket();
        sockets.push(s);
        return s;
      },
    });
  });

  afterEach(() => {
    client.close();
    vi.useRealTimers();
  });

  it("never sends a command while disconnected", () => {
    client.connect();
    // socket exists but has not opened yet
    expect(client.sendCommand("start")).toBe(false);
    expect(sockets[0].sent).toHaveLength(0);
    sockets[0].onopen!();
    expect(client.sendCommand("start")).toBe(true);
    expect(JSON.parse(sockets[0].sent[0])).toEqual({ kind: "start" });
  });

  it("pings at half the watchdog timeout while connected", () => {
    client.connect();
    sockets[0].onopen!();
    const heartbeat = () =>
      sockets[0].onmessage!({
        data: JSON.stringify({
          v: 1, type: "status", seq: 1, t: 0,
          payload: { robot_state: "idle" },
        }),
      });
    for (let i = 0; i < 6; i++) {
      vi.advanceTimersByTime(500);
      heartbeat(); // live stream: server heartbeats keep arriving
    }
    const pings = sockets[0].sent.filter(
      (m) => JSON.parse(m).kind === "ping",
    );
    expect(pings.length).toBe(3); // at 1000, 2000, 3000 ms
  });

  it("stops pinging after a drop and reconnects with backoff", () => {
    client.connect();
    sockets[0].onopen!();
    sockets[0].onclose!();
    expect(statuses.at(-1)).toBe("disconnected");
    vi.advanceTimersByTime(99);
    expect(sockets).toHaveLength(1);
    vi.advanceTimersByTime(2);
    expect(sockets).toHaveLength(2); // reconnect attempt after minBackoff
    expect(client.sendCommand("start")).toBe(false); // still not open
    sockets[1].onopen!();
    expect(statuses.at(-1)).toBe("connected");
  });

  it("delivers decoded frames and ignores junk", () => {
    client.connect();
    sockets[0].onopen!();
    sockets[0].onmessage!({
      data: JSON.stringify({
        v: 1, type: "status", seq: 1, t: 0,
        payload: { robot_state: "idle" },
      }),
    });
    sockets[0].onmessage!({ data: "garbage" });
    expect(frames).toHaveLength(1);
  });

  it("close() is final: no reconnect afterwards", () => {
    client.connect();
    sockets[0].onopen!();
    client.close();
    vi.advanceTimersByTime(10_000);
    expect(sockets).toHaveLength(1);
  });
});

describe("silent-stream detection", () => {
  it("flags a frozen connection within one watchdog period", () => {
    vi.useFakeTimers();
    vi.setSystemTime(0);
    const sockets: FakeSocket[] = [];
    const statuses: string[] = [];
    const client = new ConsoleClient({
      url: "ws://test/ws",
      watchdogMs: 2000,
      minBackoffMs: 100,
      onConnection: (s) => statuses.push(s),
      socketFactory: () => {
        const s = new FakeSocket();
        sockets.push(s);
        return s;
      },
    });
    client.connect();
    sockets[0].onopen!();
    // heartbeats arrive for a while
    vi.advanceTimersByTime(900);
    sockets[0].onmessage!({
      data: JSON.stringify({
        v: 1, type: "status", seq: 1, t: 0,
        payload: { robot_state: "idle" },
      }),
    });
    // ... then the stream freezes without a close event
    vi.advanceTimersByTime(3100);
    expect(statuses).toContain("disconnected");
    expect(sockets[0].closed).toBe(true);
    client.close();
    vi.useRealTimers();
  });
});
