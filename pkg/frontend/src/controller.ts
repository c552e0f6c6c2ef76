/** Interaction logic between the panels/controls and the service. */

import { ApiClient, ApiError } from "./api.js";
import { DragQueue } from "./dragQueue.js";
import { isCatalogLabel } from "./labels.js";
import { SessionStore } from "./store.js";
import type { EndpointName, Rotation, SideName, ViewName } from "./types.js";

export interface DragPayload {
  screwId: string;
  view: ViewName;
  endpoint: EndpointName;
  u: number;
  v: number;
}

export interface PlanDownload {
  filename: string;
  text: string;
  mediaType: string;
}

export class PlannerController {
  readonly api: ApiClient;
  readonly store: SessionStore;
  readonly drags: DragQueue<DragPayload>;
  private sessionId: string | null = null;

  constructor(api: ApiClient, store: SessionStore) {
    this.api = api;
    this.store = store;
    this.drags = new DragQueue((payload) => this.sendDrag(payload));
  }

  get currentSessionId(): string {
    if (!this.sessionId) {
      throw new Error("no session loaded");
    }
    return this.sessionId;
  }

  async openSession(sessionId: string): Promise<void> {
    const snapshot = await this.api.getSession(sessionId);
    this.sessionId = snapshot.id;
    this.store.setSnapshot(snapshot);
  }

  async createSession(
    ap: { image_ref: string; width: number; height: number },
    lp: { image_ref: string; width: number; height: number },
    sessionId?: string,
  ): Promise<void> {
    const snapshot = await this.api.createSession(ap, lp, sessionId);
    this.sessionId = snapshot.id;
    this.store.setSnapshot(snapshot);
  }

  private async refresh(): Promise<void> {
    this.store.setSnapshot(await this.api.getSession(this.currentSessionId));
  }

  async runDetection(): Promise<void> {
    await this.api.detect(this.currentSessionId);
    await this.refresh();
  }

  selectLabel(label: string | null): void {
    this.store.setSelectedLabel(label);
  }

  /** Click in a panel while a catalog label is selected. */
  async handleLabelClick(view: ViewName, u: number, v: number): Promise<void> {
    const label = this.store.getState().selectedLabel;
    if (!label) {
      this.store.setPopup({ kind: "info", message: "select a vertebra label first" });
      return;
    }
    if (!isCatalogLabel(label)) {
      this.store.setPopup({ kind: "error", message: `"${label}" is not in the catalog` });
      return;
    }
    try {
      const result = await this.api.label(this.currentSessionId, view, u, v, label);
      this.store.addMarker({ view, at: result.marker, label: result.label });
      await this.refresh();
    } catch (err) {
      if (err instanceof ApiError && err.code === "NO_MATCHING_BOX") {
        // the pop-up text comes verbatim from the server payload
        this.store.setPopup({ kind: "error", message: err.message });
        return;
      }
      throw err;
    }
  }

  async addScrew(label: string, side: SideName): Promise<void> {
    const screw = await this.api.addScrew(this.currentSessionId, label, side);
    this.store.mergeScrew(screw);
    await this.refresh();
  }

  async setOrientation(view: ViewName, rotation: Rotation, flip: boolean): Promise<void> {
    const snapshot = await this.api.setOrientation(this.currentSessionId, view, rotation, flip);
    this.store.setSnapshot(snapshot);
  }

  /** Streamed while the pointer moves; serialized by the drag queue. */
  dragTo(payload: DragPayload): void {
    this.drags.push(payload);
  }

  /** Called on pointer release; waits until the final position is on the server. */
  async endDrag(): Promise<void> {
    await this.drags.settled();
    const err = this.drags.lastError;
    this.drags.lastError = null;
    if (err instanceof ApiError && err.code === "DEGENERATE_SCREW") {
      // server state never moved: re-rendering from it snaps the handle back
      this.store.setWarning(err.message);
      await this.refresh();
      return;
    }
    if (err) {
      throw err;
    }
  }

  private async sendDrag(payload: DragPayload): Promise<void> {
    const screw = await this.api.dragEndpoint(
      this.currentSessionId,
      payload.screwId,
      payload.view,
      payload.endpoint,
      payload.u,
      payload.v,
    );
    this.store.mergeScrew(screw);
  }

  canExport(): boolean {
    const snapshot = this.store.snapshot;
    return snapshot !== null && snapshot.screws.length > 0;
  }

  async exportPlan(): Promise<PlanDownload> {
    try {
      const text = await this.api.exportPlan(this.currentSessionId);
      this.store.setExportHint(null);
      return {
        filename: `${this.currentSessionId}-plan.json`,
        text,
        mediaType: "application/json",
      };
    } catch (err) {
      if (err instanceof ApiError && err.code === "EMPTY_PLAN") {
        this.store.setExportHint(err.message);
      }
      throw err;
    }
  }
}
