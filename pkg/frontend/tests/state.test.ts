import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { cellKey, WorkspaceView } from "../src/state.js";
import type { EditJson, WhatIfResponse } from "../src/types.js";
import { caseStudyDoc, caseStudyReport, whatIfResponse } from "./fixtures.js";
import { makeStub, type StubOptions } from "./stubService.js";

function makeView(options: StubOptions = {}) {
  const stub = makeStub(options);
  const api = new ApiClient("", stub.fetch);
  const view = new WorkspaceView(api, caseStudyDoc(), caseStudyReport());
  return { view, stub };
}

function flushAsync(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}

describe("pending edit diff semantics", () => {
  it("replaces the pending edit for the same cell instead of stacking", async () => {
    const { view } = makeView();
    view.setCell("T1059.001", "CTL-NETSEG", "+1");
    view.setCell("T1059.001", "CTL-NETSEG", "-1");
    await flushAsync();
    expect(view.pending).toHaveLength(1);
    const edit = view.pending[0].edit;
    expect(edit.kind).toBe("set_interaction");
    expect(edit.kind === "set_interaction" && edit.value).toBe("-1");
  });

  it("drops the pending edit when a cell returns to its baseline value", async () => {
    const { view } = makeView();
    view.setCell("T1059.001", "CTL-NETSEG", "+1");
    view.setCell("T1059.001", "CTL-NETSEG", "0"); // baseline value
    await flushAsync();
    expect(view.pending).toHaveLength(0);
    expect(view.cellValue("T1059.001", "CTL-NETSEG")).toBe("0");
  });

  it("overlays pending values on reads without touching the baseline", async () => {
    const { view } = makeView();
    view.setCell("T1059.001", "CTL-NETSEG", "+1");
    expect(view.cellValue("T1059.001", "CTL-NETSEG")).toBe("+1");
    expect(view.baselineDoc.cells[0][3]).toBe("0");
    await flushAsync();
  });
});

describe("readouts come from the server, never local math", () => {
  it("returns the baseline report object when nothing is pending", () => {
    const { view } = makeView();
    expect(view.currentReport()).toBe(view.baselineReport);
  });

  it("returns the exact after-report object from the latest response", async () => {
    const { view } = makeView();
    view.setCell("T1059.001", "CTL-NETSEG", "+1");
    await flushAsync();
    expect(view.lastResponse).not.toBeNull();
    expect(view.currentReport()).toBe(view.lastResponse!.after);
  });

  it("discard returns the view to the committed baseline exactly", async () => {
    const { view } = makeView();
    view.setCell("T1059.001", "CTL-NETSEG", "+1");
    await flushAsync();
    view.discard();
    expect(view.pending).toHaveLength(0);
    expect(view.currentReport()).toBe(view.baselineReport);
    expect(view.cellValue("T1059.001", "CTL-NETSEG")).toBe("0");
  });
});

describe("single in-flight request with coalescing", () => {
  it("coalesces edits made while a request is out into one follow-up", async () => {
    const pendingResponses: ((r: Response) => void)[] = [];
    const bodies: EditJson[][] = [];
    const api = new ApiClient("", async (url, init) => {
      if (url.endsWith("/whatif")) {
        bodies.push(JSON.parse(String(init?.body)).edits);
        return new Promise<Response>((resolve) => pendingResponses.push(resolve));
      }
      throw new Error(`unexpected url ${url}`);
    });
    const view = new WorkspaceView(api, caseStudyDoc(), caseStudyReport());

    view.setCell("T1059.001", "CTL-NETSEG", "+1"); // request 1 goes out
    await flushAsync();
    view.setCell("T1059.003", "CTL-NETSEG", "+1"); // queued
    view.setCell("CTL-NETSEG", "T1059.003", "0"); // baseline value: no-op, not queued
    view.setCell("CTL-NETSEG", "T1059.001", "-1"); // queued
    expect(bodies).toHaveLength(1);

    const respond = (edits: EditJson[]) =>
      new Response(JSON.stringify(whatIfResponse(edits)), { status: 200 });
    pendingResponses[0](respond(bodies[0]));
    await flushAsync();
    expect(bodies).toHaveLength(2); // exactly one coalesced follow-up
    expect(bodies[1]).toHaveLength(3);
    pendingResponses[1](respond(bodies[1]));
    await flushAsync();
    expect(view.lastResponse?.delta.effects).toHaveLength(3);
  });

  it("a stale response never overwrites a newer pending state", async () => {
    const pendingResponses: ((r: Response) => void)[] = [];
    const bodies: EditJson[][] = [];
    const api = new ApiClient("", async (url, init) => {
      bodies.push(JSON.parse(String(init?.body)).edits);
      return new Promise<Response>((resolve) => pendingResponses.push(resolve));
    });
    const view = new WorkspaceView(api, caseStudyDoc(), caseStudyReport());
    view.setCell("T1059.001", "CTL-NETSEG", "+1");
    await flushAsync();
    view.setCell("T1059.003", "CTL-NETSEG", "+1"); // makes request 1 stale
    const stale: WhatIfResponse = whatIfResponse(bodies[0]);
    pendingResponses[0](new Response(JSON.stringify(stale), { status: 200 }));
    await flushAsync();
    // the stale single-edit response must not be shown as current
    expect(view.lastResponse === null || view.lastResponse.delta.effects.length === 2).toBe(
      true,
    );
    pendingResponses[1](
      new Response(JSON.stringify(whatIfResponse(bodies[1])), { status: 200 }),
    );
    await flushAsync();
    expect(view.lastResponse?.delta.effects).toHaveLength(2);
  });
});

describe("server rejections", () => {
  it("removes the rejected edit and keeps the reason; pending = sent - rejected", async () => {
    const { view } = makeView({
      rejectWhatIf: (edits) => {
        const bad = edits.findIndex(
          (e) => e.kind === "set_interaction" && e.target === "CTL-EDR",
        );
        return bad >= 0 ? { index: bad, reason: "simulated rejection" } : null;
      },
    });
    view.setCell("T1059.001", "CTL-NETSEG", "+1");
    view.setCell("T1059.001", "CTL-EDR", "-1");
    await flushAsync();
    await flushAsync();
    expect(view.pending).toHaveLength(1); // 2 sent, 1 rejected
    expect(view.pending[0].key).toBe(cellKey("T1059.001", "CTL-NETSEG"));
    expect(view.rejection?.reason).toBe("simulated rejection");
    expect(view.rejection?.key).toBe(cellKey("T1059.001", "CTL-EDR"));
    // the rejected cell reads back as its baseline value
    expect(view.cellValue("T1059.001", "CTL-EDR")).toBe("+1");
  });
});

describe("connectivity", () => {
  it("flags the view when the service is unreachable and recovers on retry", async () => {
    let down = true;
    const healthy = makeStub();
    const api = new ApiClient("", async (url, init) => {
      if (down) {
        throw new TypeError("fetch failed");
      }
      return healthy.fetch(url, init);
    });
    const view = new WorkspaceView(api, caseStudyDoc(), caseStudyReport());
    view.setCell("T1059.001", "CTL-NETSEG", "+1");
    await flushAsync();
    expect(view.connectionError).toContain("unreachable");
    expect(view.pending).toHaveLength(1); // nothing dropped

    down = false;
    view.retry();
    await flushAsync();
    expect(view.connectionError).toBe("");
    expect(view.lastResponse).not.toBeNull();
  });
});

describe("commit documents", () => {
  it("applies the pending diff structurally to the baseline document", async () => {
    const { view } = makeView();
    view.setCell("T1059.001", "CTL-NETSEG", "+1");
    view.setAssessment("CTL-NETSEG", { diversity: 0.5, independence: 0.9, coverage: 0.9 });
    view.setBeta(0.75);
    await flushAsync();
    const doc = view.commitDoc();
    expect(doc.cells[0][3]).toBe("+1");
    expect(doc.assessments.find((a) => a.control === "CTL-NETSEG")?.coverage).toBe(0.9);
    expect(doc.beta).toBe(0.75);
    // the baseline itself is untouched
    expect(view.baselineDoc.cells[0][3]).toBe("0");
    expect(view.baselineDoc.beta).toBe(0.5);
  });
});
