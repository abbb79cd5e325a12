/**
 * Minimal in-process stand-in for the screening service API, used by the
 * client/pump unit tests. Supports sessions, the events endpoint with
 * since/wait semantics, tier-order 409s, and a fault toggle that drops
 * connections to exercise reconnect behavior.
 */

import http from "node:http";

import type { Diagnosis, ServerEvent } from "../src/types.js";

export interface MockSession {
  events: ServerEvent[];
  diagnosis: Diagnosis | null;
  state: string;
}

export class MockService {
  readonly sessions = new Map<string, MockSession>();
  server: http.Server;
  /** when > 0, that many upcoming requests are destroyed mid-flight */
  dropNext = 0;
  private counter = 0;

  constructor() {
    this.server = http.createServer((req, res) => this.handle(req, res));
  }

  listen(): Promise<string> {
    return new Promise((resolve) => {
      this.server.listen(0, "127.0.0.1", () => {
        const addr = this.server.address() as { port: number };
        resolve(`http://127.0.0.1:${addr.port}`);
      });
    });
  }

  close(): void {
    this.server.close();
  }

  addSession(id?: string): string {
    const sid = id ?? `mock${++this.counter}`;
    this.sessions.set(sid, { events: [], diagnosis: null, state: "MONITORING" });
    return sid;
  }

  push(sid: string, kind: ServerEvent["kind"], payload: Record<string, unknown>): void {
    const s = this.sessions.get(sid)!;
    s.events.push({
      sequence: s.events.length + 1,
      timestamp_ms: Date.now(),
      kind,
      payload,
    });
  }

  private json(res: http.ServerResponse, code: number, body: unknown): void {
    const data = JSON.stringify(body);
    res.writeHead(code, { "Content-Type": "application/json" });
    res.end(data);
  }

  private handle(req: http.IncomingMessage, res: http.ServerResponse): void {
    if (this.dropNext > 0) {
      this.dropNext -= 1;
      res.destroy();
      return;
    }
    const url = new URL(req.url!, "http://x");
    const parts = url.pathname.split("/").filter(Boolean);
    if (req.method === "POST" && url.pathname === "/v1/sessions") {
      const sid = this.addSession();
      return this.json(res, 200, { session_id: sid, state: "MONITORING", last_seq: 0 });
    }
    const sid = parts[2] ?? "";
    const session = this.sessions.get(sid);
    if (!session) return this.json(res, 404, { error: `unknown session ${sid}` });

    if (req.method === "GET" && parts.length === 3) {
      return this.json(res, 200, {
        session_id: sid,
        state: session.state,
        last_seq: session.events.length,
        confidences: {},
        alert: null,
        diagnosis: session.diagnosis,
        tier: 1,
      });
    }
    if (req.method === "GET" && parts[3] === "events") {
      const since = Number(url.searchParams.get("since") ?? 0);
      const events = session.events.filter((e) => e.sequence > since);
      return this.json(res, 200, { events, last_seq: session.events.length });
    }
    if (req.method === "GET" && parts[3] === "diagnosis") {
      if (!session.diagnosis) return this.json(res, 409, { error: "session not diagnosed yet" });
      return this.json(res, 200, session.diagnosis);
    }
    if (req.method === "POST" && parts[3] === "capture") {
      if (session.state === "MONITORING") {
        return this.json(res, 409, { error: "no active alert; captures start at tier 2" });
      }
      const chunks: Buffer[] = [];
      req.on("data", (c) => chunks.push(c));
      req.on("end", () => {
        const size = Buffer.concat(chunks).length;
        if (size === 0) return this.json(res, 400, { error: "empty capture body" });
        this.json(res, 200, {
          session_id: sid,
          state: session.state,
          confidence: 0.75,
          last_seq: session.events.length,
        });
      });
      return;
    }
    this.json(res, 404, { error: `no route for ${req.method} ${url.pathname}` });
  }
}
