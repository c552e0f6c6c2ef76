/** Canvas rendering for one view panel. Pure drawing; no state. */

import type { PanelModel } from "./overlay.js";

const BOX_COLOR = "#3fa7ff";
const LABELED_COLOR = "#ffd43b";
const SCREW_COLOR = "#51cf66";
const MARKER_COLOR = "#ff6b6b";

export function drawPanel(
  ctx: CanvasRenderingContext2D,
  model: PanelModel,
  image: CanvasImageSource | null,
): void {
  ctx.canvas.width = model.width;
  ctx.canvas.height = model.height;
  ctx.clearRect(0, 0, model.width, model.height);
  if (image) {
    ctx.drawImage(image, 0, 0, model.width, model.height);
  } else {
    ctx.fillStyle = "#101418";
    ctx.fillRect(0, 0, model.width, model.height);
  }

  ctx.lineWidth = 1.5;
  ctx.strokeStyle = BOX_COLOR;
  for (const box of model.boxes) {
    ctx.strokeRect(box.x1, box.y1, box.x2 - box.x1, box.y2 - box.y1);
  }

  ctx.strokeStyle = LABELED_COLOR;
  ctx.fillStyle = LABELED_COLOR;
  ctx.font = "13px sans-serif";
  for (const { label, box } of model.labeledBoxes) {
    ctx.strokeRect(box.x1, box.y1, box.x2 - box.x1, box.y2 - box.y1);
    ctx.fillText(label, box.x1 + 3, box.y1 + 14);
  }

  for (const screw of model.screws) {
    if (screw.silhouette && screw.silhouette.length > 2) {
      ctx.beginPath();
      const first = screw.silhouette[0]!;
      ctx.moveTo(first.u, first.v);
      for (const p of screw.silhouette.slice(1)) {
        ctx.lineTo(p.u, p.v);
      }
      ctx.closePath();
      ctx.globalAlpha = 0.25;
      ctx.fillStyle = SCREW_COLOR;
      ctx.fill();
      ctx.globalAlpha = 1;
    }
    ctx.strokeStyle = SCREW_COLOR;
    ctx.beginPath();
    ctx.moveTo(screw.entry.u, screw.entry.v);
    ctx.lineTo(screw.target.u, screw.target.v);
    ctx.stroke();
  }

  for (const handle of model.handles) {
    ctx.beginPath();
    ctx.arc(handle.at.u, handle.at.v, 5, 0, Math.PI * 2);
    if (handle.endpoint === "entry") {
      ctx.fillStyle = SCREW_COLOR;
      ctx.fill();
    } else {
      ctx.strokeStyle = SCREW_COLOR;
      ctx.stroke();
    }
  }

  ctx.strokeStyle = MARKER_COLOR;
  for (const at of model.markers) {
    ctx.beginPath();
    ctx.moveTo(at.u - 6, at.v);
    ctx.lineTo(at.u + 6, at.v);
    ctx.moveTo(at.u, at.v - 6);
    ctx.lineTo(at.u, at.v + 6);
    ctx.stroke();
  }
}
