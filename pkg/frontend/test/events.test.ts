import assert from "node:assert/strict";
import { after, before, test } from "node:test";

import { ApiError, ScreeningApi } from "../src/api.js";
import { EventPump } from "../src/events.js";
import { initialView, reduceEvents, type SessionView } from "../src/state.js";
import type { ServerEvent } from "../src/types.js";
import { MockService } from "./mock_service.js";

let mock: MockService;
let base: string;

before(async () => {
  mock = new MockService();
  base = await mock.listen();
});

after(() => mock.close());

function sampleEvents(sid: string, n: number): void {
  for (let i = 0; i < n; i++) {
    mock.push(sid, "vitals", {
      sample: { timestamp_ms: 10_000 + i, systolic: 120 + i, diastolic: 80, heart_rate: 70, spo2: 98 },
    });
  }
}

async function pumpUntil(
  pump: EventPump,
  pred: () => boolean,
  timeoutMs = 5000,
): Promise<void> {
  const run = pump.run();
  const t0 = Date.now();
  while (!pred()) {
    if (Date.now() - t0 > timeoutMs) {
      pump.stop();
      await run;
      throw new Error("pump timed out");
    }
    await new Promise((r) => setTimeout(r, 20));
  }
  pump.stop();
  await run;
}

test("pump delivers all events exactly once", async () => {
  const sid = mock.addSession();
  sampleEvents(sid, 7);
  const api = new ScreeningApi(base);
  const seen: ServerEvent[] = [];
  const pump = new EventPump(api, sid, (evs) => seen.push(...evs), 0, { waitSeconds: 0 });
  await pumpUntil(pump, () => seen.length >= 7);
  assert.deepEqual(seen.map((e) => e.sequence), [1, 2, 3, 4, 5, 6, 7]);
});

test("reconnect mid-stream loses and duplicates nothing", async () => {
  const sid = mock.addSession();
  sampleEvents(sid, 5);
  const api = new ScreeningApi(base);

  // uninterrupted reference
  let reference: SessionView = initialView(sid);
  const refPump = new EventPump(api, sid, (evs) => (reference = reduceEvents(reference, evs)), 0, { waitSeconds: 0 });
  await pumpUntil(refPump, () => reference.lastSeq >= 5);

  // interrupted run: read some, stop (connection gone), resume by cursor
  let view: SessionView = initialView(sid);
  const first = new EventPump(api, sid, (evs) => (view = reduceEvents(view, evs)), 0, { waitSeconds: 0 });
  await pumpUntil(first, () => view.lastSeq >= 2);
  const resumeFrom = first.cursor;
  assert.ok(resumeFrom >= 2);

  sampleEvents(sid, 3); // more arrive while disconnected; total now 8
  let refFull: SessionView = initialView(sid);
  const refPump2 = new EventPump(api, sid, (evs) => (refFull = reduceEvents(refFull, evs)), 0, { waitSeconds: 0 });
  await pumpUntil(refPump2, () => refFull.lastSeq >= 8);

  const second = new EventPump(api, sid, (evs) => (view = reduceEvents(view, evs)), resumeFrom, { waitSeconds: 0 });
  await pumpUntil(second, () => view.lastSeq >= 8);
  assert.deepEqual(view, refFull);
});

test("pump retries through dropped connections", async () => {
  const sid = mock.addSession();
  sampleEvents(sid, 3);
  const api = new ScreeningApi(base);
  let errors = 0;
  const seen: ServerEvent[] = [];
  mock.dropNext = 2; // the first two polls die mid-flight
  const pump = new EventPump(api, sid, (evs) => seen.push(...evs), 0, {
    waitSeconds: 0,
    retryMs: 10,
    onError: () => errors++,
  });
  await pumpUntil(pump, () => seen.length >= 3);
  assert.ok(errors >= 1);
  assert.deepEqual(seen.map((e) => e.sequence), [1, 2, 3]);
});

test("client surfaces tier-order 409 as guidance", async () => {
  const sid = mock.addSession();
  const api = new ScreeningApi(base);
  await assert.rejects(
    api.capture(sid, "voice", new Uint8Array([1, 2, 3])),
    (err: unknown) => {
      assert.ok(err instanceof ApiError);
      assert.equal(err.status, 409);
      assert.ok(err.isTierOrder);
      assert.match(err.message, /alert|tier/);
      return true;
    },
  );
});

test("client maps unknown session to 404", async () => {
  const api = new ScreeningApi(base);
  await assert.rejects(api.getSession("nope"), (err: unknown) => {
    assert.ok(err instanceof ApiError && err.status === 404);
    return true;
  });
});
