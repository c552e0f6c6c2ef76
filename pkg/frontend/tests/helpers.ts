/** Test scaffolding: spawns the real planning service for e2e runs. */

import { spawn, type ChildProcess } from "node:child_process";
import process from "node:process";

import { ApiClient } from "../src/api.js";
import type { BoxBody, ViewName } from "../src/types.js";

export interface LiveServer {
  baseUrl: string;
  stop: () => void;
}

const PYTHON = process.env.PYTHON ?? "python3";

export async function startServer(): Promise<LiveServer> {
  const port = 18000 + (process.pid % 2000);
  const baseUrl = `http://127.0.0.1:${port}`;
  const child: ChildProcess = spawn(
    PYTHON,
    ["-m", "spineplan.cli", "serve"],
    {
      env: {
        ...process.env,
        SPINEPLAN_HOST: "127.0.0.1",
        SPINEPLAN_PORT: String(port),
      },
      stdio: ["ignore", "pipe", "pipe"],
    },
  );
  let stderr = "";
  child.stderr?.on("data", (chunk) => {
    stderr += String(chunk);
  });

  const deadline = Date.now() + 30000;
  for (;;) {
    if (child.exitCode !== null) {
      throw new Error(`service exited with ${child.exitCode}: ${stderr}`);
    }
    try {
      const response = await fetch(`${baseUrl}/health`);
      if (response.ok) {
        break;
      }
    } catch {
      // not up yet
    }
    if (Date.now() > deadline) {
      child.kill();
      throw new Error(`service did not come up on ${baseUrl}: ${stderr}`);
    }
    await new Promise((resolve) => setTimeout(resolve, 150));
  }
  return {
    baseUrl,
    stop: () => {
      child.kill();
    },
  };
}

export const AP_BOXES: BoxBody[] = [
  { x1: 185.0, y1: 120.0, x2: 325.0, y2: 185.0, confidence: 0.88 },
  { x1: 180.0, y1: 200.0, x2: 330.0, y2: 270.0, confidence: 0.94 },
  { x1: 175.0, y1: 285.0, x2: 335.0, y2: 360.0, confidence: 0.91 },
];

export const LP_BOXES: BoxBody[] = [
  { x1: 145.0, y1: 110.0, x2: 305.0, y2: 175.0, confidence: 0.85 },
  { x1: 140.0, y1: 190.0, x2: 300.0, y2: 260.0, confidence: 0.92 },
  { x1: 150.0, y1: 275.0, x2: 310.0, y2: 350.0, confidence: 0.9 },
];

export const LABEL_CLICKS: Record<string, { view: ViewName; u: number; v: number }[]> = {
  L4: [
    { view: "AP", u: 255, v: 235 },
    { view: "LP", u: 220, v: 225 },
  ],
  L5: [
    { view: "AP", u: 250, v: 320 },
    { view: "LP", u: 230, v: 312 },
  ],
};

let counter = 0;

/** Fresh session with fixture detections attached to both views. */
export async function seedSession(api: ApiClient, withBoxes = true): Promise<string> {
  counter += 1;
  const id = `ui-e2e-${process.pid}-${counter}`;
  await api.createSession(
    { image_ref: "ap.png", width: 512, height: 480 },
    { image_ref: "lp.png", width: 512, height: 480 },
    id,
  );
  if (withBoxes) {
    await api.attachDetections(id, "AP", AP_BOXES);
    await api.attachDetections(id, "LP", LP_BOXES);
  }
  return id;
}
