/** Replay server for contract tests: serves recorded API responses and
 * flags any request that does not match a documented recording. */

import { createServer, type Server } from "node:http";
import { readFileSync } from "node:fs";
import { resolve } from "node:path";

interface Recording {
  method: string;
  path: string;
  body: unknown;
  status: number;
  response: unknown;
}

export interface FixtureServer {
  baseUrl: string;
  violations: string[];
  requests: string[];
  close: () => Promise<void>;
}

const RECORDINGS_PATH = resolve("tests/fixtures/recordings.json");

function deepEqual(a: unknown, b: unknown): boolean {
  return JSON.stringify(a) === JSON.stringify(b);
}

export async function startFixtureServer(): Promise<FixtureServer> {
  const recordings: Recording[] = JSON.parse(readFileSync(RECORDINGS_PATH, "utf-8"));
  const violations: string[] = [];
  const requests: string[] = [];

  const server: Server = createServer((req, res) => {
    const chunks: Buffer[] = [];
    req.on("data", (chunk) => chunks.push(chunk));
    req.on("end", () => {
      const raw = Buffer.concat(chunks).toString("utf-8");
      const body = raw ? JSON.parse(raw) : null;
      const method = req.method ?? "GET";
      const path = req.url ?? "/";
      requests.push(`${method} ${path}`);
      const hit = recordings.find(
        (r) =>
          r.method === method &&
          r.path === path &&
          (method === "GET" || deepEqual(r.body, body)),
      );
      if (!hit) {
        violations.push(`${method} ${path} ${raw}`);
        res.writeHead(500, { "Content-Type": "application/json" });
        res.end(JSON.stringify({ ok: false, error: { code: "Unrecorded", message: "no recording" } }));
        return;
      }
      const payload = JSON.stringify(hit.response);
      res.writeHead(hit.status, { "Content-Type": "application/json" });
      res.end(payload);
    });
  });

  await new Promise<void>((resolve) => server.listen(0, "127.0.0.1", resolve));
  const address = server.address();
  if (address === null || typeof address === "string") {
    throw new Error("fixture server failed to bind");
  }
  return {
    baseUrl: `http://127.0.0.1:${address.port}`,
    violations,
    requests,
    close: () => new Promise((resolve) => server.close(() => resolve())),
  };
}
