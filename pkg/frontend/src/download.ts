// Mission log download: fetch /api/log and hand the exact bytes to the
// browser save path, preserving the server-provided attachment filename.

export interface DownloadResult {
  filename: string;
  bytes: ArrayBuffer;
}

export type FetchLike = (url: string) => Promise<{
  ok: boolean;
  headers: { get(name: string): string | null };
  arrayBuffer(): Promise<ArrayBuffer>;
}>;

export function filenameFromDisposition(header: string | null): string {
  if (header) {
    const m = /filename="([^"]+)"/.exec(header);
    if (m) return m[1];
  }
  return "mission.json";
}

/** Fetch the mission log; the returned bytes are exactly the response body. */
export async function downloadLog(
  baseUrl: string,
  fetchFn: FetchLike = fetch,
): Promise<DownloadResult> {
  const resp = await fetchFn(`${baseUrl}/api/log`);
  if (!resp.ok) {
    throw new Error("log download failed");
  }
  return {
    filename: filenameFromDisposition(resp.headers.get("content-disposition")),
    bytes: await resp.arrayBuffer(),
  };
}

/** Browser-side save of downloaded bytes as a file. */
export function saveAs(result: DownloadResult): void {
  const blob = new Blob([result.bytes], { type: "application/json" });
  const url = URL.createObjectURL(blob);
  const a = document.createElement("a");
  a.href = url;
  a.download = result.filename;
  a.click();
  URL.revokeObjectURL(url);
}
