import { describe, expect, it } from "vitest";

import { ConsistencyController } from "../src/consistency.js";
import { FakeService } from "./helpers.js";

function labeledService(n: number): FakeService {
  const service = new FakeService({ nImages: n });
  for (const id of service.ids) service.labels.set(id, 0);
  return service;
}

describe("consistency session", () => {
  it("walks a session and reports 88% / 0.24 for 12 of 100", async () => {
    const service = labeledService(100);
    const c = new ConsistencyController(service.client());
    await c.begin(100, 7);
    expect(c.snapshot().phase).toBe("active");
    expect(c.progressText()).toBe("0 / 100");
    for (let i = 0; i < 100; i++) {
      await c.answer(i < 12 ? 1 : 0); // first 12 disagree with the stored 0s
    }
    expect(c.snapshot().phase).toBe("finished");
    expect(c.agreementText()).toBe("88%");
    expect(c.noiseText()).toBe("0.24");
    expect(c.snapshot().state?.disagreements).toHaveLength(12);
  });

  it("reports 100% and 0.00 with no disagreements", async () => {
    const service = labeledService(10);
    const c = new ConsistencyController(service.client());
    await c.begin(10);
    for (let i = 0; i < 10; i++) await c.answer(0);
    expect(c.agreementText()).toBe("100%");
    expect(c.noiseText()).toBe("0.00");
    expect(c.snapshot().state?.disagreements).toEqual([]);
  });

  it("resumes mid-session at the service's index", async () => {
    const service = labeledService(5);
    const first = new ConsistencyController(service.client());
    await first.begin(5);
    await first.answer(0);
    await first.answer(1);
    // new controller = page reload; state must come from the service
    const second = new ConsistencyController(service.client());
    expect(await second.resume()).toBe(true);
    expect(second.progressText()).toBe("2 / 5");
    expect(second.snapshot().phase).toBe("active");
  });

  it("resume without a session reports idle", async () => {
    const service = labeledService(3);
    const c = new ConsistencyController(service.client());
    expect(await c.resume()).toBe(false);
    expect(c.snapshot().phase).toBe("idle");
  });

  it("rejects sessions larger than the labeled pool", async () => {
    const service = new FakeService({ nImages: 5 }); // nothing labeled
    const c = new ConsistencyController(service.client());
    await c.begin(5);
    expect(c.snapshot().phase).toBe("error");
    expect(c.snapshot().message).toMatch(/not enough/);
  });

  it("ignores answers once finished", async () => {
    const service = labeledService(2);
    const c = new ConsistencyController(service.client());
    await c.begin(2);
    await c.answer(0);
    await c.answer(0);
    expect(c.snapshot().phase).toBe("finished");
    await c.answer(1); // must not throw or change the result
    expect(c.agreementText()).toBe("100%");
  });

  it("arrow keys answer like the buttons", async () => {
    const service = labeledService(2);
    const c = new ConsistencyController(service.client());
    await c.begin(2);
    await c.handleKey("ArrowRight");
    await c.handleKey("ArrowLeft");
    expect(c.snapshot().phase).toBe("finished");
    expect(c.snapshot().state?.disagreements).toHaveLength(1);
  });
});
