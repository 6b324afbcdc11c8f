import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { RefreshRequest, RefreshResult, ServiceClient } from "../src/client";
import { InjectivityReport, Vec2 } from "../src/types";

const SQUARE: Vec2[] = [
  [0, 0],
  [1, 0],
  [1, 1],
  [0, 1],
];

function report(verdict: InjectivityReport["verdict"]): InjectivityReport {
  return {
    verdict,
    min_jacobian: verdict === "injective-evidence" ? 1.0 : -0.5,
    argmin_location: [0.5, 0.5],
    negative_sample_count: verdict === "non-injective" ? 7 : 0,
    self_intersection_pairs: [],
    samples: 100,
    resolution: [64, 64],
  };
}

interface Call {
  path: string;
  body: any;
  resolve: (body: unknown) => void;
}

/** fetch stub that parks every request until the test releases it. */
function makeFetchStub() {
  const calls: Call[] = [];
  const fetchImpl = (url: string, init: RequestInit) => {
    return new Promise<Response>((resolve) => {
      calls.push({
        path: new URL(url).pathname,
        body: JSON.parse(String(init.body)),
        resolve: (body: unknown) =>
          resolve(
            new Response(JSON.stringify(body), {
              status: 200,
              headers: { "Content-Type": "application/json" },
            }),
          ),
      });
    });
  };
  const release = (verdict: InjectivityReport["verdict"]) => {
    // answer one full round (map + field + check), in whatever order queued
    const round = calls.splice(0, 3);
    expect(round.map((c) => c.path).sort()).toEqual(["/check", "/field", "/map"]);
    for (const call of round) {
      if (call.path === "/map") call.resolve({ points: call.body.points });
      else if (call.path === "/field")
        call.resolve({ grid: [[1, 1], [1, 1]], bbox: [0, 0, 1, 1], min: 1, argmin: [0.5, 0.5] });
      else call.resolve(report(verdict));
    }
  };
  return { calls, release, fetchImpl };
}

function request(resolution: [number, number] = [64, 64]): RefreshRequest {
  return { source: SQUARE, target: SQUARE, payload: [[0.5, 0.5]], resolution };
}

describe("ServiceClient", () => {
  beforeEach(() => {
    vi.useFakeTimers();
  });
  afterEach(() => {
    vi.useRealTimers();
  });

  it("debounces rapid schedules into one round", async () => {
    const stub = makeFetchStub();
    const client = new ServiceClient("http://x", stub.fetchImpl);
    const results: RefreshResult[] = [];
    client.onResult((r) => results.push(r));

    for (let k = 0; k < 20; k++) client.scheduleRefresh(request());
    expect(stub.calls).toHaveLength(0); // still inside the debounce window
    await vi.advanceTimersByTimeAsync(client.debounceMs + 5);
    expect(stub.calls).toHaveLength(3); // exactly one round in flight
    stub.release("injective-evidence");
    await vi.advanceTimersByTimeAsync(1);
    expect(results).toHaveLength(1);
    expect(results[0].report.verdict).toBe("injective-evidence");
  });

  it("keeps at most one round in flight and replays the newest request", async () => {
    const stub = makeFetchStub();
    const client = new ServiceClient("http://x", stub.fetchImpl);
    const results: RefreshResult[] = [];
    client.onResult((r) => results.push(r));

    client.refreshNow(request([64, 64]));
    expect(client.inFlightCount).toBe(1);
    // new requests while in flight are queued, not fired
    client.refreshNow(request([200, 200]));
    client.refreshNow(request([200, 200]));
    expect(stub.calls).toHaveLength(3);

    stub.release("injective-evidence"); // finishes the first round
    await vi.advanceTimersByTimeAsync(1);
    expect(stub.calls).toHaveLength(3); // the queued round went out
    expect(stub.calls[1].body.res).toEqual([200, 200]);
    stub.release("non-injective");
    await vi.advanceTimersByTimeAsync(1);

    // the first round was superseded: only the newest response surfaced
    expect(results).toHaveLength(1);
    expect(results[0].report.verdict).toBe("non-injective");
  });

  it("drops stale responses by sequence number", async () => {
    const stub = makeFetchStub();
    const client = new ServiceClient("http://x", stub.fetchImpl);
    const results: RefreshResult[] = [];
    client.onResult((r) => results.push(r));

    client.refreshNow(request());
    client.refreshNow(request()); // queued; bumps the sequence on dispatch
    stub.release("injective-evidence");
    await vi.advanceTimersByTimeAsync(1);
    stub.release("non-injective");
    await vi.advanceTimersByTimeAsync(1);

    expect(results.map((r) => r.report.verdict)).toEqual(["non-injective"]);
  });

  it("badge flips within one debounce cycle when the cage goes concave", async () => {
    // acceptance: dragging a target vertex inward past the opposite diagonal
    // makes Q concave; the next debounced /check must flip the verdict
    const stub = makeFetchStub();
    const client = new ServiceClient("http://x", stub.fetchImpl);
    let badge: InjectivityReport["verdict"] | null = null;
    client.onResult((r) => (badge = r.report.verdict));

    client.scheduleRefresh(request());
    await vi.advanceTimersByTimeAsync(client.debounceMs + 5);
    stub.release("injective-evidence");
    await vi.advanceTimersByTimeAsync(1);
    expect(badge).toBe("injective-evidence");

    const concaveTarget: Vec2[] = [
      [0, 0],
      [1, 0],
      [0.2, 0.25],
      [0, 1],
    ];
    client.scheduleRefresh({ ...request(), target: concaveTarget });
    await vi.advanceTimersByTimeAsync(client.debounceMs + 5);
    stub.release("non-injective");
    await vi.advanceTimersByTimeAsync(1);
    expect(badge).toBe("non-injective");
  });

  it("surfaces structured service errors", async () => {
    const stub = makeFetchStub();
    const client = new ServiceClient("http://x", stub.fetchImpl);
    const errors: Error[] = [];
    client.onError((e) => errors.push(e));

    client.refreshNow(request());
    for (const call of stub.calls.splice(0, 3)) {
      call.resolve({ error: { type: "ExteriorPointError", message: "outside" } });
    }
    await vi.advanceTimersByTimeAsync(1);
    expect(errors).toHaveLength(1);
    expect(errors[0].message).toContain("ExteriorPointError");
  });
});
