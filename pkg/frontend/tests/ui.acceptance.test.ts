/** Acceptance behaviors, run against the real planning service.
 *
 * A live server is spawned once for the file; every scenario drives the
 * controller exactly as the browser event handlers do and then checks
 * the store against a direct API read, so "server-authoritative" is a
 * tested property, not a convention.
 */

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { PlannerController } from "../src/controller.js";
import { panelModel } from "../src/overlay.js";
import { SessionStore } from "../src/store.js";
import { LABEL_CLICKS, seedSession, startServer, type LiveServer } from "./helpers.js";

let server: LiveServer;
let api: ApiClient;

beforeAll(async () => {
  server = await startServer();
  api = new ApiClient(server.baseUrl);
});

afterAll(() => {
  server?.stop();
});

async function freshController(withBoxes = true): Promise<{
  controller: PlannerController;
  store: SessionStore;
  sessionId: string;
}> {
  const store = new SessionStore();
  const controller = new PlannerController(new ApiClient(server.baseUrl), store);
  const sessionId = await seedSession(api, withBoxes);
  await controller.openSession(sessionId);
  return { controller, store, sessionId };
}

async function labelPair(controller: PlannerController, label: "L4" | "L5"): Promise<void> {
  controller.selectLabel(label);
  for (const click of LABEL_CLICKS[label]!) {
    await controller.handleLabelClick(click.view, click.u, click.v);
  }
}

describe("acceptance: label flow", () => {
  it("click inside a detected box labels it and shows a marker", async () => {
    const { controller, store } = await freshController();
    controller.selectLabel("L4");
    await controller.handleLabelClick("AP", 255, 235);

    const state = store.getState();
    expect(state.popup).toBeNull();
    expect(state.markers).toEqual([{ view: "AP", at: { u: 255, v: 235 }, label: "L4" }]);
    const labeled = state.snapshot!.labels;
    expect(labeled).toHaveLength(1);
    expect(labeled[0]!.label).toBe("L4");
    expect(labeled[0]!.box).toEqual({ x1: 180, y1: 200, x2: 330, y2: 270, confidence: 0.94 });

    const model = panelModel(state.snapshot!, "AP", state.markers);
    expect(model.labeledBoxes).toEqual([{ label: "L4", box: labeled[0]!.box }]);
    expect(model.markers).toEqual([{ u: 255, v: 235 }]);
  });

  it("click on the background shows the server's pop-up text verbatim", async () => {
    const { controller, store } = await freshController();
    controller.selectLabel("L4");
    await controller.handleLabelClick("AP", 5, 5);

    expect(store.getState().popup).toEqual({
      kind: "error",
      message: "no comparable bounding box is found",
    });
    expect(store.getState().snapshot!.labels).toHaveLength(0);
  });

  it("click with no label selected stays local", async () => {
    const { controller, store } = await freshController();
    controller.selectLabel(null);
    await controller.handleLabelClick("AP", 255, 235);
    expect(store.getState().popup?.message).toContain("select a vertebra label");
    expect(store.getState().snapshot!.labels).toHaveLength(0);
  });
});

describe("acceptance: screw drag synchronization", () => {
  it("dragging the AP entry handle moves the LP handle to the server-reported position", async () => {
    const { controller, store, sessionId } = await freshController();
    await labelPair(controller, "L4");
    await controller.addScrew("L4", "left");

    const before = store.snapshot!.screws[0]!;
    const lpBefore = before.lp.entry;

    // stream a few intermediate positions, then release
    const path = [
      { u: before.ap.entry.u + 2, v: before.ap.entry.v - 3 },
      { u: before.ap.entry.u + 4, v: before.ap.entry.v - 6 },
      { u: before.ap.entry.u + 6, v: before.ap.entry.v - 9 },
    ];
    for (const p of path) {
      controller.dragTo({ screwId: before.id, view: "AP", endpoint: "entry", ...p });
    }
    await controller.endDrag();

    const diff = await api.getSession(sessionId);
    const mine = store.snapshot!.screws[0]!;
    const theirs = diff.screws[0]!;

    // release position accepted by the server
    expect(theirs.ap.entry).toEqual(path[2]);
    // LP handle in the UI equals the server's projection, and it moved
    expect(mine.lp.entry).toEqual(theirs.lp.entry);
    expect(mine.lp.entry.v).not.toBe(lpBefore.v);
    // whole overlay equals a fresh server read (no local geometry)
    expect(panelModel(store.snapshot!, "AP")).toEqual(panelModel(diff, "AP"));
    expect(panelModel(store.snapshot!, "LP")).toEqual(panelModel(diff, "LP"));
  });

  it("a degenerate drag snaps back to the server state with a warning", async () => {
    const { controller, store, sessionId } = await freshController();
    await labelPair(controller, "L4");
    await controller.addScrew("L4", "left");

    const screw = store.snapshot!.screws[0]!;
    // collapse entry onto target in AP (x,z), then attempt the same in LP (y,z)
    controller.dragTo({
      screwId: screw.id,
      view: "AP",
      endpoint: "entry",
      u: screw.ap.target.u,
      v: screw.ap.target.v,
    });
    await controller.endDrag();
    const mid = store.snapshot!.screws[0]!;
    controller.dragTo({
      screwId: screw.id,
      view: "LP",
      endpoint: "entry",
      u: mid.lp.target.u,
      v: mid.lp.target.v,
    });
    await controller.endDrag();

    expect(store.getState().warning).toContain("entry equals target");
    const diff = await api.getSession(sessionId);
    expect(store.snapshot).toEqual(diff);
  });

  it("two screws render as two distinct silhouettes per panel", async () => {
    const { controller, store } = await freshController();
    await labelPair(controller, "L4");
    await controller.addScrew("L4", "left");
    await controller.addScrew("L4", "right");

    for (const view of ["AP", "LP"] as const) {
      const model = panelModel(store.snapshot!, view);
      expect(model.screws).toHaveLength(2);
      const ids = model.screws.map((s) => s.screwId);
      expect(new Set(ids).size).toBe(2);
      for (const overlay of model.screws) {
        expect(overlay.silhouette).not.toBeNull();
      }
    }
  });
});

describe("acceptance: orientation and export", () => {
  it("a 180 degree rotation re-renders boxes at transformed coordinates", async () => {
    const { controller, store, sessionId } = await freshController();
    const plain = store.snapshot!.ap.boxes[0]!;
    await controller.setOrientation("AP", 180, false);

    const rotated = store.snapshot!.ap.boxes[0]!;
    const width = store.snapshot!.ap.width;
    const height = store.snapshot!.ap.height;
    expect(rotated.x1).toBeCloseTo(width - plain.x2, 9);
    expect(rotated.y1).toBeCloseTo(height - plain.y2, 9);
    expect(rotated.x2).toBeCloseTo(width - plain.x1, 9);
    expect(rotated.y2).toBeCloseTo(height - plain.y1, 9);

    const diff = await api.getSession(sessionId);
    expect(panelModel(store.snapshot!, "AP")).toEqual(panelModel(diff, "AP"));
  });

  it("export downloads a spine-plan/1 document once a screw exists", async () => {
    const { controller, store } = await freshController();
    await labelPair(controller, "L4");
    expect(controller.canExport()).toBe(false);
    await controller.addScrew("L4", "left");
    expect(controller.canExport()).toBe(true);

    const download = await controller.exportPlan();
    expect(download.filename.endsWith("-plan.json")).toBe(true);
    expect(download.mediaType).toBe("application/json");
    const doc = JSON.parse(download.text);
    expect(doc.format).toBe("spine-plan/1");
    expect(doc.screws).toHaveLength(1);
    expect(store.getState().exportHint).toBeNull();
  });

  it("export is disabled and hinted while the plan is empty", async () => {
    const { controller, store } = await freshController();
    expect(controller.canExport()).toBe(false);

    const err = await controller.exportPlan().catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.code).toBe("EMPTY_PLAN");
    expect(store.getState().exportHint).toBe(err.message);
  });
});
