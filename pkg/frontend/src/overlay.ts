/** Derives per-panel render models from the latest server snapshot.
 *
 * Pure projection of server state: every coordinate below comes out of
 * the snapshot untouched. No geometry is computed client-side, so the
 * synchronized-view behavior lives in exactly one place (the service).
 */

import type { Marker } from "./store.js";
import type {
  BoxBody,
  Point2Out,
  SessionSnapshot,
  ViewName,
} from "./types.js";

export interface HandleModel {
  screwId: string;
  endpoint: "entry" | "target";
  at: Point2Out;
}

export interface ScrewOverlay {
  screwId: string;
  entry: Point2Out;
  target: Point2Out;
  silhouette: Point2Out[] | null;
}

export interface LabeledBox {
  label: string;
  box: BoxBody;
}

export interface PanelModel {
  view: ViewName;
  imageRef: string;
  width: number;
  height: number;
  boxes: BoxBody[];
  labeledBoxes: LabeledBox[];
  screws: ScrewOverlay[];
  handles: HandleModel[];
  markers: Point2Out[];
}

export function panelModel(
  snapshot: SessionSnapshot,
  view: ViewName,
  markers: Marker[] = [],
): PanelModel {
  const viewState = view === "AP" ? snapshot.ap : snapshot.lp;
  const screws: ScrewOverlay[] = snapshot.screws.map((screw) => {
    const projection = view === "AP" ? screw.ap : screw.lp;
    return {
      screwId: screw.id,
      entry: projection.entry,
      target: projection.target,
      silhouette: projection.silhouette,
    };
  });
  const handles: HandleModel[] = screws.flatMap((s) => [
    { screwId: s.screwId, endpoint: "entry" as const, at: s.entry },
    { screwId: s.screwId, endpoint: "target" as const, at: s.target },
  ]);
  return {
    view,
    imageRef: viewState.image_ref,
    width: viewState.width,
    height: viewState.height,
    boxes: viewState.boxes,
    labeledBoxes: snapshot.labels
      .filter((entry) => entry.view === view)
      .map((entry) => ({ label: entry.label, box: entry.box })),
    screws,
    handles,
    markers: markers.filter((m) => m.view === view).map((m) => m.at),
  };
}

/** Distance-based handle lookup for pointer interactions. */
export function findHandle(
  model: PanelModel,
  u: number,
  v: number,
  radius = 8,
): HandleModel | null {
  let best: HandleModel | null = null;
  let bestDist = radius;
  for (const handle of model.handles) {
    const dist = Math.hypot(handle.at.u - u, handle.at.v - v);
    if (dist <= bestDist) {
      best = handle;
      bestDist = dist;
    }
  }
  return best;
}
