/** Wire types mirroring the planning service JSON bodies. */

export type ViewName = "AP" | "LP";
export type SideName = "left" | "right";
export type EndpointName = "entry" | "target";
export type Rotation = 0 | 90 | 180 | 270;

export interface BoxBody {
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  confidence: number;
}

export interface Point2Out {
  u: number;
  v: number;
}

export interface Point3Out {
  x: number;
  y: number;
  z: number;
}

export interface OrientationOut {
  rotation: number;
  flipped: boolean;
}

export interface CalibrationOut {
  scale: number;
  v_offset: number;
}

export interface ViewOut {
  view_kind: ViewName;
  image_ref: string;
  width: number;
  height: number;
  orientation: OrientationOut;
  calibration: CalibrationOut;
  boxes: BoxBody[];
}

export interface LabelOut {
  view: ViewName;
  label: string;
  box: BoxBody;
}

export interface ViewProjectionOut {
  entry: Point2Out;
  target: Point2Out;
  /** null when the screw projects to a single point in this view */
  silhouette: Point2Out[] | null;
}

export interface ScrewOut {
  id: string;
  vertebra_label: string;
  side: SideName;
  diameter: number;
  screw_type: string;
  length: number;
  entry: Point3Out;
  target: Point3Out;
  ap: ViewProjectionOut;
  lp: ViewProjectionOut;
}

export interface SessionSnapshot {
  id: string;
  ap: ViewOut;
  lp: ViewOut;
  labels: LabelOut[];
  screws: ScrewOut[];
  sync_captured: boolean;
}

export interface LabelResult {
  view: ViewName;
  label: string;
  box: BoxBody;
  marker: Point2Out;
}

export interface DetectionsOut {
  ap_boxes: BoxBody[];
  lp_boxes: BoxBody[];
}

export interface ErrorBody {
  code: string;
  message: string;
  detail?: unknown;
}

export interface ImageIn {
  image_ref: string;
  width: number;
  height: number;
}
