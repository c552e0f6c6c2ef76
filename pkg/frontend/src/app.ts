/** Browser bootstrap: wires canvases and controls to the controller. */

import { ApiClient } from "./api.js";
import { PlannerController } from "./controller.js";
import { findHandle, panelModel } from "./overlay.js";
import { drawPanel } from "./panel.js";
import { SessionStore } from "./store.js";
import { VERTEBRA_LABELS } from "./labels.js";
import type { Rotation, SideName, ViewName } from "./types.js";

interface DragState {
  screwId: string;
  endpoint: "entry" | "target";
  view: ViewName;
}

function requireEl<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) {
    throw new Error(`missing element #${id}`);
  }
  return el as T;
}

function canvasPoint(canvas: HTMLCanvasElement, event: MouseEvent): { u: number; v: number } {
  const rect = canvas.getBoundingClientRect();
  return {
    u: ((event.clientX - rect.left) / rect.width) * canvas.width,
    v: ((event.clientY - rect.top) / rect.height) * canvas.height,
  };
}

export function bootstrap(): void {
  const params = new URLSearchParams(window.location.search);
  const base = params.get("api") ?? "";
  const sessionId = params.get("session") ?? "cli";

  const store = new SessionStore();
  const controller = new PlannerController(new ApiClient(base), store);

  const apCanvas = requireEl<HTMLCanvasElement>("ap-canvas");
  const lpCanvas = requireEl<HTMLCanvasElement>("lp-canvas");
  const labelPicker = requireEl<HTMLSelectElement>("label-picker");
  const sidePicker = requireEl<HTMLSelectElement>("side-picker");
  const addScrewBtn = requireEl<HTMLButtonElement>("add-screw");
  const rotatePicker = requireEl<HTMLSelectElement>("rotation");
  const flipToggle = requireEl<HTMLInputElement>("flip");
  const orientView = requireEl<HTMLSelectElement>("orient-view");
  const applyOrient = requireEl<HTMLButtonElement>("apply-orientation");
  const exportBtn = requireEl<HTMLButtonElement>("export-plan");
  const detectBtn = requireEl<HTMLButtonElement>("run-detect");
  const statusLine = requireEl<HTMLDivElement>("status");

  for (const label of VERTEBRA_LABELS) {
    const option = document.createElement("option");
    option.value = label;
    option.textContent = label;
    labelPicker.appendChild(option);
  }
  labelPicker.addEventListener("change", () => {
    controller.selectLabel(labelPicker.value || null);
  });

  const images = new Map<string, HTMLImageElement>();
  function imageFor(ref: string): HTMLImageElement | null {
    if (!ref) {
      return null;
    }
    let img = images.get(ref);
    if (!img) {
      img = new Image();
      img.src = `${base}/images/${ref}`;
      img.addEventListener("load", render);
      images.set(ref, img);
    }
    return img.complete && img.naturalWidth > 0 ? img : null;
  }

  function render(): void {
    const state = store.getState();
    if (!state.snapshot) {
      return;
    }
    const apModel = panelModel(state.snapshot, "AP", state.markers);
    const lpModel = panelModel(state.snapshot, "LP", state.markers);
    drawPanel(apCanvas.getContext("2d")!, apModel, imageFor(apModel.imageRef));
    drawPanel(lpCanvas.getContext("2d")!, lpModel, imageFor(lpModel.imageRef));
    exportBtn.disabled = !controller.canExport();
    exportBtn.title = exportBtn.disabled ? "add a screw before exporting" : "";
    const notes: string[] = [];
    if (state.popup) {
      notes.push(state.popup.message);
    }
    if (state.warning) {
      notes.push(state.warning);
    }
    if (state.exportHint) {
      notes.push(state.exportHint);
    }
    statusLine.textContent = notes.join(" | ");
  }

  store.subscribe(render);

  let drag: DragState | null = null;

  function bindPanel(canvas: HTMLCanvasElement, view: ViewName): void {
    canvas.addEventListener("mousedown", (event) => {
      const snapshot = store.snapshot;
      if (!snapshot) {
        return;
      }
      const { u, v } = canvasPoint(canvas, event);
      const handle = findHandle(panelModel(snapshot, view), u, v);
      if (handle) {
        drag = { screwId: handle.screwId, endpoint: handle.endpoint, view };
      }
    });
    canvas.addEventListener("mousemove", (event) => {
      if (!drag || drag.view !== view) {
        return;
      }
      const { u, v } = canvasPoint(canvas, event);
      controller.dragTo({ screwId: drag.screwId, endpoint: drag.endpoint, view, u, v });
    });
    canvas.addEventListener("mouseup", (event) => {
      if (drag && drag.view === view) {
        const { u, v } = canvasPoint(canvas, event);
        controller.dragTo({ screwId: drag.screwId, endpoint: drag.endpoint, view, u, v });
        drag = null;
        void controller.endDrag().catch((err) => {
          store.setWarning(String(err));
        });
        return;
      }
      const { u, v } = canvasPoint(canvas, event);
      void controller.handleLabelClick(view, u, v).catch((err) => {
        store.setPopup({ kind: "error", message: String(err) });
      });
    });
  }

  bindPanel(apCanvas, "AP");
  bindPanel(lpCanvas, "LP");

  addScrewBtn.addEventListener("click", () => {
    const label = labelPicker.value;
    const side = sidePicker.value as SideName;
    void controller.addScrew(label, side).catch((err) => {
      store.setPopup({ kind: "error", message: String(err) });
    });
  });

  applyOrient.addEventListener("click", () => {
    const rotation = Number(rotatePicker.value) as Rotation;
    void controller
      .setOrientation(orientView.value as ViewName, rotation, flipToggle.checked)
      .catch((err) => {
        store.setPopup({ kind: "error", message: String(err) });
      });
  });

  detectBtn.addEventListener("click", () => {
    void controller.runDetection().catch((err) => {
      store.setPopup({ kind: "error", message: String(err) });
    });
  });

  exportBtn.addEventListener("click", () => {
    void controller
      .exportPlan()
      .then((download) => {
        const blob = new Blob([download.text], { type: download.mediaType });
        const url = URL.createObjectURL(blob);
        const link = document.createElement("a");
        link.href = url;
        link.download = download.filename;
        link.click();
        URL.revokeObjectURL(url);
      })
      .catch((err) => {
        store.setPopup({ kind: "error", message: String(err) });
      });
  });

  void controller.openSession(sessionId).catch((err) => {
    statusLine.textContent = `cannot load session "${sessionId}": ${String(err)}`;
  });
}

if (typeof document !== "undefined") {
  bootstrap();
}
