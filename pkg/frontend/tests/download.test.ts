// Download path: the saved bytes are exactly the /api/log response body.

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import {
  downloadLog,
  filenameFromDisposition,
  FetchLike,
} from "../src/download.js";

const here = dirname(fileURLToPath(import.meta.url));
const logBytes = readFileSync(join(here, "fixtures", "mission-log.json"));

function fakeFetch(bytes: Buffer, disposition: string | null): FetchLike {
  return async (url: string) => {
    expect(url).toBe("http://robot:8000/api/log");
    return {
      ok: true,
      headers: { get: (name: string) =>
        name.toLowerCase() === "content-disposition" ? disposition : null },
      arrayBuffer: async () =>
        bytes.buffer.slice(bytes.byteOffset, bytes.byteOffset + bytes.byteLength),
    };
  };
}

describe("downloadLog", () => {
  it("returns bytes byte-equal to the endpoint body", async () => {
    const result = await downloadLog(
      "http://robot:8000",
      fakeFetch(logBytes, 'attachment; filename="mission-123.json"'),
    );
    expect(Buffer.from(result.bytes).equals(logBytes)).toBe(true);
    expect(result.filename).toBe("mission-123.json");
    // the downloaded document is a parseable mission log
    const doc = JSON.parse(Buffer.from(result.bytes).toString("utf-8"));
    expect(doc.v).toBe(1);
    expect(Array.isArray(doc.frames)).toBe(true);
  });

  it("falls back to a default filename", async () => {
    const result = await downloadLog("http://robot:8000",
                                     fakeFetch(logBytes, null));
    expect(result.filename).toBe("mission.json");
  });

  it("rejects on a failed response", async () => {
    const failing: FetchLike = async () => ({
      ok: false,
      headers: { get: () => null },
      arrayBuffer: async () => new ArrayBuffer(0),
    });
    await expect(downloadLog("http://robot:8000", failing)).rejects.toThrow();
  });
});

describe("filenameFromDisposition", () => {
  it("parses the server pattern", () => {
    expect(filenameFromDisposition('attachment; filename="mission-99.json"'))
      .toBe("mission-99.json");
    expect(filenameFromDisposition(null)).toBe("mission.json");
  });
});
